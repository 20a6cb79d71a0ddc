#include "ordauto/word.hpp"

#include <algorithm>
#include <cctype>

namespace ordauto {

Alphabet::Alphabet(std::vector<Symbol> symbols, bool allow_lambda) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    for (const Symbol& s : symbols_) {
        if (s.empty())
            throw AlphabetError("empty symbol");
        if (s == kLeftMark || s == kRightMark)
            throw AlphabetError("reserved token in alphabet: " + s);
        if (s == kLambda && !allow_lambda)
            throw AlphabetError("reserved token in alphabet: " + s);
    }
}

bool Alphabet::contains(const Symbol& s) const {
    return std::binary_search(symbols_.begin(), symbols_.end(), s);
}

int Alphabet::index_of(const Symbol& s) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
    if (it == symbols_.end() || *it != s)
        return -1;
    return static_cast<int>(it - symbols_.begin());
}

Alphabet Alphabet::with_lambda() const {
    std::vector<Symbol> v = symbols_;
    v.push_back(kLambda);
    return Alphabet(std::move(v), true);
}

Alphabet Alphabet::without_lambda() const {
    std::vector<Symbol> v;
    for (const Symbol& s : symbols_)
        if (s != kLambda)
            v.push_back(s);
    return Alphabet(std::move(v));
}

bool Alphabet::has_lambda() const { return contains(kLambda); }

bool Alphabet::subset_of(const Alphabet& o) const {
    return std::includes(o.symbols_.begin(), o.symbols_.end(), symbols_.begin(), symbols_.end());
}

Alphabet Alphabet::unite(const Alphabet& a, const Alphabet& b) {
    std::vector<Symbol> v = a.symbols_;
    v.insert(v.end(), b.symbols_.begin(), b.symbols_.end());
    bool lam = a.has_lambda() || b.has_lambda();
    return Alphabet(std::move(v), lam);
}

bool operator==(const Block& a, const Block& b) {
    return a.symbol == b.symbol && a.run == b.run;
}

namespace {

std::vector<Block> normalize_blocks(std::vector<Block> in) {
    std::vector<Block> out;
    for (Block& b : in) {
        if (b.run.is_zero())
            continue;
        if (!out.empty() && out.back().symbol == b.symbol)
            out.back().run = add(out.back().run, b.run);
        else
            out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

BlockWord::BlockWord(Alphabet alphabet, std::vector<Block> blocks)
    : alphabet_(std::move(alphabet)), blocks_(normalize_blocks(std::move(blocks))), declared_(true) {
    for (const Block& b : blocks_)
        if (!alphabet_.contains(b.symbol))
            throw AlphabetError("symbol outside alphabet: " + b.symbol);
}

BlockWord BlockWord::of(std::vector<Block> blocks) {
    std::vector<Symbol> syms;
    bool lam = false;
    for (const Block& b : blocks) {
        syms.push_back(b.symbol);
        lam = lam || b.symbol == kLambda;
    }
    BlockWord w(Alphabet(std::move(syms), lam), std::move(blocks));
    w.declared_ = false;
    return w;
}

std::string BlockWord::str() const { return format(*this); }

bool operator==(const BlockWord& a, const BlockWord& b) { return a.blocks() == b.blocks(); }

bool operator<(const BlockWord& a, const BlockWord& b) {
    const auto& x = a.blocks();
    const auto& y = b.blocks();
    for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i].symbol != y[i].symbol)
            return x[i].symbol < y[i].symbol;
        int c = compare(x[i].run, y[i].run);
        if (c != 0)
            return c < 0;
    }
    return x.size() < y.size();
}

Ordinal length(const BlockWord& w) {
    Ordinal n;
    for (const Block& b : w.blocks())
        n = add(n, b.run);
    return n;
}

BlockWord concat(const BlockWord& a, const BlockWord& b) {
    Alphabet alpha;
    bool declared = a.declared_ || b.declared_;
    if (a.declared_ && b.declared_) {
        if (b.alphabet().subset_of(a.alphabet()))
            alpha = a.alphabet();
        else if (a.alphabet().subset_of(b.alphabet()))
            alpha = b.alphabet();
        else
            throw AlphabetError("concat: incompatible alphabets");
    } else if (a.declared_) {
        if (!b.alphabet().subset_of(a.alphabet()))
            throw AlphabetError("concat: symbols outside the declared alphabet");
        alpha = a.alphabet();
    } else if (b.declared_) {
        if (!a.alphabet().subset_of(b.alphabet()))
            throw AlphabetError("concat: symbols outside the declared alphabet");
        alpha = b.alphabet();
    } else {
        alpha = Alphabet::unite(a.alphabet(), b.alphabet());
    }
    std::vector<Block> blocks = a.blocks();
    blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
    BlockWord w(std::move(alpha), std::move(blocks));
    w.declared_ = declared;
    return w;
}

BlockWord slice(const BlockWord& w, const Ordinal& from, const Ordinal& to) {
    Ordinal len = length(w);
    if (from > to || to > len)
        throw RangeError("slice [" + from.str() + ", " + to.str() + ") of word of length " +
                         len.str());
    std::vector<Block> out;
    Ordinal pos;  // start of the current block
    for (const Block& b : w.blocks()) {
        Ordinal end = add(pos, b.run);
        const Ordinal& lo = from > pos ? from : pos;
        const Ordinal& hi = to < end ? to : end;
        if (lo < hi)
            out.push_back(Block{b.symbol, left_subtract(lo, hi)});
        pos = end;
        if (pos >= to)
            break;
    }
    BlockWord r(w.alphabet(), std::move(out));
    r.declared_ = w.declared_;
    return r;
}

BlockWord prefix(const BlockWord& w, const Ordinal& a) { return slice(w, Ordinal(), a); }

BlockWord tail(const BlockWord& w, const Ordinal& a) { return slice(w, a, length(w)); }

const Symbol& symbol_at(const BlockWord& w, const Ordinal& i) {
    Ordinal pos;
    for (const Block& b : w.blocks()) {
        Ordinal end = add(pos, b.run);
        if (i < end)
            return b.symbol;
        pos = end;
    }
    throw RangeError("position " + i.str() + " outside word of length " + pos.str());
}

ProjectionStats projection_stats(const BlockWord& w, const Symbol& s) {
    if (!w.alphabet().contains(s))
        throw AlphabetError("projection symbol outside alphabet: " + s);
    Ordinal otp;
    for (const Block& b : w.blocks())
        if (b.symbol == s)
            otp = add(otp, b.run);
    return ProjectionStats{otp, cardinality(otp)};
}

// ---------------------------------------------------------------------------
// Word literals
// ---------------------------------------------------------------------------

namespace {

bool symbol_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

}  // namespace

BlockWord parse_word(std::string_view text) {
    std::vector<Block> blocks;
    size_t i = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("word literal: " + msg, 1, static_cast<int>(i) + 1);
    };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (text.substr(i, 3) == "eps") {
        size_t j = i + 3;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        if (j >= text.size())
            return BlockWord();
    }
    while (true) {
        skip();
        if (i >= text.size())
            break;
        size_t start = i;
        while (i < text.size() && symbol_char(text[i]))
            ++i;
        if (i == start)
            fail("expected a symbol");
        Symbol sym(text.substr(start, i - start));
        Ordinal run(1);
        if (i < text.size() && text[i] == '^') {
            ++i;
            if (i < text.size() && text[i] == '(') {
                size_t depth = 1, j = i + 1;
                while (j < text.size() && depth > 0) {
                    if (text[j] == '(')
                        ++depth;
                    if (text[j] == ')')
                        --depth;
                    ++j;
                }
                if (depth != 0)
                    fail("unbalanced parentheses");
                run = parse_ordinal(text.substr(i + 1, j - i - 2));
                i = j;
            } else {
                size_t start2 = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    ++i;
                if (i == start2)
                    fail("expected a run length");
                run = parse_ordinal(text.substr(start2, i - start2));
            }
        }
        blocks.push_back(Block{std::move(sym), std::move(run)});
    }
    if (blocks.empty())
        throw ParseError("word literal: empty input (use `eps`)", 1, 1);
    return BlockWord::of(std::move(blocks));
}

BlockWord parse_word(std::string_view text, const Alphabet& alphabet) {
    BlockWord w = parse_word(text);
    return BlockWord(alphabet, w.blocks());
}

std::string format(const BlockWord& w) {
    if (w.empty())
        return "eps";
    std::string out;
    for (const Block& b : w.blocks()) {
        if (!out.empty())
            out += " ";
        out += b.symbol;
        if (b.run == Ordinal(1))
            continue;
        if (b.run.is_finite())
            out += "^" + std::to_string(b.run.finite_value());
        else
            out += "^(" + format(b.run) + ")";
    }
    return out;
}

}  // namespace ordauto
