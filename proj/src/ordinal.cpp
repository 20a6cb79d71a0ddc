#include "ordauto/ordinal.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>

namespace ordauto {

namespace {

std::atomic<int> g_depth_budget{8};

uint64_t checked_mul(uint64_t a, uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a)
        throw RangeError("ordinal coefficient overflow");
    return a * b;
}

uint64_t checked_add(uint64_t a, uint64_t b) {
    if (b > UINT64_MAX - a)
        throw RangeError("ordinal coefficient overflow");
    return a + b;
}

}  // namespace

int cnf_depth_budget() { return g_depth_budget.load(); }

void set_cnf_depth_budget(int budget) {
    if (budget < 1)
        throw PreconditionError("CNF depth budget must be >= 1");
    g_depth_budget.store(budget);
}

Ordinal::Ordinal(uint64_t n) {
    if (n > 0)
        terms_.push_back(Term{Ordinal(), n});
}

Ordinal Ordinal::omega() { return omega_power(Ordinal(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent) {
    int d = 1 + exponent.depth();
    if (d > cnf_depth_budget())
        throw DepthError("w^" + exponent.str() + " exceeds CNF depth budget " +
                         std::to_string(cnf_depth_budget()));
    Ordinal r;
    r.terms_.push_back(Term{exponent, 1});
    return r;
}

Ordinal Ordinal::from_terms(const std::vector<Term>& raw) {
    Ordinal acc;
    for (const Term& t : raw) {
        if (t.coefficient == 0)
            continue;
        Ordinal one;
        one.terms_.push_back(t);
        acc = add(acc, one);
    }
    return acc;
}

bool Ordinal::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

uint64_t Ordinal::finite_value() const {
    if (terms_.empty())
        return 0;
    if (!is_finite())
        throw RangeError("finite_value() on infinite ordinal " + str());
    return terms_[0].coefficient;
}

bool Ordinal::is_limit() const {
    return !terms_.empty() && !terms_.back().exponent.is_zero();
}

bool Ordinal::is_successor() const {
    return !terms_.empty() && terms_.back().exponent.is_zero();
}

Ordinal Ordinal::predecessor() const {
    if (!is_successor())
        throw RangeError("predecessor() of non-successor " + str());
    Ordinal r = *this;
    if (r.terms_.back().coefficient == 1)
        r.terms_.pop_back();
    else
        r.terms_.back().coefficient -= 1;
    return r;
}

const Ordinal& Ordinal::leading_exponent() const {
    if (terms_.empty())
        throw RangeError("leading_exponent() of 0");
    return terms_[0].exponent;
}

int Ordinal::depth() const {
    int d = 0;
    for (const Term& t : terms_)
        d = std::max(d, 1 + t.exponent.depth());
    return d;
}

std::string Ordinal::str() const { return format(*this); }

int compare(const Ordinal& a, const Ordinal& b) {
    size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a.terms_[i].exponent, b.terms_[i].exponent);
        if (c != 0)
            return c;
        if (a.terms_[i].coefficient != b.terms_[i].coefficient)
            return a.terms_[i].coefficient < b.terms_[i].coefficient ? -1 : 1;
    }
    if (a.terms_.size() != b.terms_.size())
        return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero())
        return a;
    if (a.is_zero())
        return b;
    const Ordinal& lead = b.terms_[0].exponent;
    Ordinal r;
    size_t i = 0;
    while (i < a.terms_.size() && compare(a.terms_[i].exponent, lead) > 0)
        r.terms_.push_back(a.terms_[i++]);
    r.terms_.push_back(b.terms_[0]);
    if (i < a.terms_.size() && compare(a.terms_[i].exponent, lead) == 0)
        r.terms_.back().coefficient =
            checked_add(r.terms_.back().coefficient, a.terms_[i].coefficient);
    r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
    return r;
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
    size_t i = 0;
    // Walk the common prefix of equal terms.
    while (i < a.terms_.size() && i < b.terms_.size()) {
        int ce = compare(a.terms_[i].exponent, b.terms_[i].exponent);
        if (ce < 0) {
            // a's remainder is absorbed by b's next term.
            Ordinal r;
            r.terms_.assign(b.terms_.begin() + i, b.terms_.end());
            return r;
        }
        if (ce > 0)
            throw UnderflowError("left_subtract: " + a.str() + " > " + b.str());
        if (a.terms_[i].coefficient != b.terms_[i].coefficient) {
            if (a.terms_[i].coefficient > b.terms_[i].coefficient)
                throw UnderflowError("left_subtract: " + a.str() + " > " + b.str());
            Ordinal r;
            r.terms_.push_back(Ordinal::Term{b.terms_[i].exponent,
                                             b.terms_[i].coefficient - a.terms_[i].coefficient});
            r.terms_.insert(r.terms_.end(), b.terms_.begin() + i + 1, b.terms_.end());
            return r;
        }
        ++i;
    }
    if (i < a.terms_.size())
        throw UnderflowError("left_subtract: " + a.str() + " > " + b.str());
    Ordinal r;
    r.terms_.assign(b.terms_.begin() + i, b.terms_.end());
    return r;
}

Ordinal multiply(const Ordinal& a, const Ordinal& b) {
    if (a.is_zero() || b.is_zero())
        return Ordinal();
    const Ordinal& ae = a.terms_[0].exponent;
    Ordinal r;
    for (const Ordinal::Term& t : b.terms_) {
        if (t.exponent.is_zero()) {
            // Finite part: a*m keeps a's tail once.
            r.terms_.push_back(
                Ordinal::Term{ae, checked_mul(a.terms_[0].coefficient, t.coefficient)});
            r.terms_.insert(r.terms_.end(), a.terms_.begin() + 1, a.terms_.end());
        } else {
            r.terms_.push_back(Ordinal::Term{add(ae, t.exponent), t.coefficient});
        }
    }
    return r;
}

std::string Cardinality::str() const {
    return finite ? std::to_string(value) : std::string("aleph0");
}

bool operator==(const Cardinality& a, const Cardinality& b) {
    if (a.finite != b.finite)
        return false;
    return !a.finite || a.value == b.value;
}

bool operator<(const Cardinality& a, const Cardinality& b) {
    if (a.finite && b.finite)
        return a.value < b.value;
    return a.finite && !b.finite;
}

Cardinality cardinality(const Ordinal& a) {
    if (a.is_finite())
        return Cardinality{true, a.finite_value()};
    return Cardinality{false, 0};
}

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("ordinal literal: " + msg, 1, static_cast<int>(pos) + 1);
    }
    uint64_t nat() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected a natural number");
        uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            uint64_t d = static_cast<uint64_t>(text[pos] - '0');
            if (v > (UINT64_MAX - d) / 10)
                fail("number too large");
            v = v * 10 + d;
            ++pos;
        }
        return v;
    }
};

Ordinal parse_sum(Cursor& c);

Ordinal parse_factor(Cursor& c) {
    if (c.eat('(')) {
        Ordinal inner = parse_sum(c);
        if (!c.eat(')'))
            c.fail("expected ')'");
        return inner;
    }
    if (c.peek() == 'w') {
        c.eat('w');
        return Ordinal::omega();
    }
    return Ordinal(c.nat());
}

Ordinal parse_term(Cursor& c) {
    if (c.peek() == 'w') {
        c.eat('w');
        Ordinal exponent(1);
        if (c.eat('^'))
            exponent = parse_factor(c);
        uint64_t coeff = 1;
        if (c.eat('*'))
            coeff = c.nat();
        if (coeff == 0)
            return Ordinal();
        return multiply(Ordinal::omega_power(exponent), Ordinal(coeff));
    }
    return Ordinal(c.nat());
}

Ordinal parse_sum(Cursor& c) {
    Ordinal acc = parse_term(c);
    while (c.eat('+'))
        acc = add(acc, parse_term(c));
    return acc;
}

std::string format_exponent(const Ordinal& e) {
    if (e.is_finite())
        return std::to_string(e.finite_value());
    if (e == Ordinal::omega())
        return "w";
    return "(" + format(e) + ")";
}

}  // namespace

Ordinal parse_ordinal(std::string_view text) {
    Cursor c{text};
    if (c.eof())
        c.fail("empty literal");
    Ordinal r = parse_sum(c);
    if (!c.eof())
        c.fail("trailing input");
    return r;
}

std::string format(const Ordinal& a) {
    if (a.is_zero())
        return "0";
    std::string out;
    for (const Ordinal::Term& t : a.terms()) {
        if (!out.empty())
            out += "+";
        if (t.exponent.is_zero()) {
            out += std::to_string(t.coefficient);
            continue;
        }
        if (t.exponent == Ordinal(1))
            out += "w";
        else
            out += "w^" + format_exponent(t.exponent);
        if (t.coefficient > 1)
            out += "*" + std::to_string(t.coefficient);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural helpers
// ---------------------------------------------------------------------------

std::vector<std::pair<Ordinal, Ordinal>> suffix_splits(const Ordinal& n) {
    std::vector<std::pair<Ordinal, Ordinal>> out;
    const auto& ts = n.terms();
    for (size_t i = 0; i < ts.size(); ++i) {
        for (uint64_t c = ts[i].coefficient; c >= 1; --c) {
            Ordinal head, tail;
            std::vector<Ordinal::Term> ht(ts.begin(), ts.begin() + i);
            if (c < ts[i].coefficient)
                ht.push_back(Ordinal::Term{ts[i].exponent, ts[i].coefficient - c});
            head = Ordinal::from_terms(ht);
            std::vector<Ordinal::Term> tt;
            tt.push_back(Ordinal::Term{ts[i].exponent, c});
            tt.insert(tt.end(), ts.begin() + i + 1, ts.end());
            tail = Ordinal::from_terms(tt);
            out.emplace_back(std::move(head), std::move(tail));
        }
    }
    out.emplace_back(n, Ordinal());
    return out;
}

std::optional<Ordinal> half_of_sum(const Ordinal& a) {
    if (a.is_zero())
        return Ordinal();
    const auto& ts = a.terms();
    if (ts[0].coefficient % 2 != 0)
        return std::nullopt;
    std::vector<Ordinal::Term> ht;
    ht.push_back(Ordinal::Term{ts[0].exponent, ts[0].coefficient / 2});
    ht.insert(ht.end(), ts.begin() + 1, ts.end());
    return Ordinal::from_terms(ht);
}

std::optional<Ordinal> ordinal_sqrt(const Ordinal& g) {
    if (g.is_finite()) {
        uint64_t v = g.finite_value();
        uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
        while (r > 0 && r * r > v)
            --r;
        while ((r + 1) * (r + 1) <= v)
            ++r;
        if (r * r == v)
            return Ordinal(r);
        return std::nullopt;
    }
    // g = w^G*d + tail; a square root a = w^e*c + rho forces e+e = G, c = d,
    // and a*rho to reproduce the tail (high copies of rho's terms, then the
    // finite-part cross term, then rho itself).
    const auto& ts = g.terms();
    const Ordinal& G = ts[0].exponent;
    uint64_t d = ts[0].coefficient;
    auto e = half_of_sum(G);
    if (!e || e->is_zero())
        return std::nullopt;
    std::vector<Ordinal::Term> high;   // candidate infinite terms of rho
    size_t i = 1;
    while (i < ts.size() && compare(ts[i].exponent, *e) > 0) {
        Ordinal f = left_subtract(*e, ts[i].exponent);
        if (f.is_zero())
            return std::nullopt;
        high.push_back(Ordinal::Term{f, ts[i].coefficient});
        ++i;
    }
    uint64_t m = 0;
    if (i < ts.size() && compare(ts[i].exponent, *e) == 0) {
        if (ts[i].coefficient % d != 0)
            return std::nullopt;
        m = ts[i].coefficient / d;
        ++i;
    }
    std::vector<Ordinal::Term> low(ts.begin() + i, ts.end());
    if (m == 0) {
        if (!low.empty())
            return std::nullopt;
    } else {
        // low must be exactly high ++ [m].
        std::vector<Ordinal::Term> expect = high;
        expect.push_back(Ordinal::Term{Ordinal(), m});
        if (Ordinal::from_terms(low) != Ordinal::from_terms(expect))
            return std::nullopt;
    }
    std::vector<Ordinal::Term> cand;
    cand.push_back(Ordinal::Term{*e, d});
    cand.insert(cand.end(), high.begin(), high.end());
    if (m > 0)
        cand.push_back(Ordinal::Term{Ordinal(), m});
    Ordinal a = Ordinal::from_terms(cand);
    if (multiply(a, a) == g)
        return a;
    return std::nullopt;
}

Ordinal fundamental_sequence(const Ordinal& f, uint64_t k) {
    if (!f.is_limit())
        throw PreconditionError("fundamental_sequence of non-limit " + f.str());
    const auto& ts = f.terms();
    std::vector<Ordinal::Term> ht(ts.begin(), ts.end() - 1);
    if (ts.back().coefficient > 1)
        ht.push_back(Ordinal::Term{ts.back().exponent, ts.back().coefficient - 1});
    Ordinal head = Ordinal::from_terms(ht);
    const Ordinal& e = ts.back().exponent;
    if (e.is_successor())
        return add(head, multiply(Ordinal::omega_power(e.predecessor()), Ordinal(k)));
    return add(head, Ordinal::omega_power(fundamental_sequence(e, k)));
}

}  // namespace ordauto
