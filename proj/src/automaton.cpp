#include "ordauto/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ordauto/sampling.hpp"

namespace ordauto {

namespace {

constexpr int kSetRunGuard = 12;  // max |Q| for mask-space machinery

StateSet resized(const StateSet& s, int cap) {
    StateSet r(cap);
    s.for_each([&](int i) {
        if (i < cap)
            r.set(i);
    });
    return r;
}

int mask_to_id(const StateSet& s) {
    int id = 0;
    s.for_each([&](int i) { id |= 1 << i; });
    return id;
}

StateSet id_to_mask(int id, int n) {
    StateSet s(n);
    for (int i = 0; i < n; ++i)
        if (id & (1 << i))
            s.set(i);
    return s;
}

}  // namespace

int LimitRule::eval(const StateSet& s) const {
    auto it = entries.find(s);
    if (it != entries.end())
        return it->second;
    if (fallback)
        return fallback(s);
    return -1;
}

StateSet NoaLimitRule::eval(const StateSet& s, int size) const {
    auto it = entries.find(s);
    if (it != entries.end())
        return it->second;
    if (fallback)
        return fallback(s);
    return StateSet(size);
}

// ---------------------------------------------------------------------------
// LimitDoa
// ---------------------------------------------------------------------------

LimitDoa::LimitDoa(Alphabet alphabet, std::vector<std::string> states, int start,
                   std::vector<int> accepting, std::vector<std::vector<int>> step, LimitRule limit)
    : alphabet_(std::move(alphabet)),
      names_(std::move(states)),
      start_(start),
      accepting_(static_cast<int>(names_.size())),
      step_(std::move(step)),
      limit_(std::move(limit)) {
    for (int q : accepting)
        accepting_.set(q);
    if (start_ < 0 || start_ >= static_cast<int>(names_.size()))
        throw PreconditionError("start state out of range");
    if (step_.size() != names_.size())
        throw PreconditionError("step table size mismatch");
    for (auto& row : step_)
        if (row.size() != alphabet_.size())
            throw PreconditionError("step row size mismatch");
}

LimitDoa::LimitDoa(const LimitDoa& o)
    : alphabet_(o.alphabet_),
      names_(o.names_),
      start_(o.start_),
      accepting_(o.accepting_),
      step_(o.step_),
      limit_(o.limit_),
      complete_(o.complete_) {}

LimitDoa& LimitDoa::operator=(const LimitDoa& o) {
    if (this != &o) {
        std::scoped_lock lk(mu_);
        alphabet_ = o.alphabet_;
        names_ = o.names_;
        start_ = o.start_;
        accepting_ = o.accepting_;
        step_ = o.step_;
        limit_ = o.limit_;
        complete_ = o.complete_;
        engines_.clear();
    }
    return *this;
}

Engine& LimitDoa::engine_for(int sym) const {
    auto it = engines_.find(sym);
    if (it != engines_.end())
        return *it->second;
    LimitRule rule = limit_;
    auto eng = std::make_unique<Engine>(
        states(), [this, sym](int q) { return step_[q][sym]; },
        [rule](const StateSet& s) { return rule.eval(s); });
    return *engines_.emplace(sym, std::move(eng)).first->second;
}

std::optional<int> LimitDoa::block_step(int q, const Symbol& s, const Ordinal& n) const {
    int sym = alphabet_.index_of(s);
    if (sym < 0)
        throw AlphabetError("symbol outside automaton alphabet: " + s);
    std::scoped_lock lk(mu_);
    int r = engine_for(sym).consume(q, n);
    if (r < 0)
        return std::nullopt;
    return r;
}

std::optional<int> LimitDoa::run_from(int q, const BlockWord& w) const {
    int state = q;
    for (const Block& b : w.blocks()) {
        auto next = block_step(state, b.symbol, b.run);
        if (!next)
            return std::nullopt;
        state = *next;
    }
    return state;
}

DoaRunOutcome LimitDoa::run(const BlockWord& w) const {
    auto end = run_from(start_, w);
    if (!end)
        return DoaRunOutcome{false, -1, false};
    return DoaRunOutcome{true, *end, accepting_.test(*end)};
}

bool LimitDoa::accepts(const BlockWord& w) const { return run(w).accepted; }

// ---------------------------------------------------------------------------
// LimitNoa
// ---------------------------------------------------------------------------

LimitNoa::LimitNoa(Alphabet alphabet, std::vector<std::string> states, int start,
                   std::vector<int> accepting, std::vector<std::vector<StateSet>> step,
                   NoaLimitRule limit)
    : alphabet_(std::move(alphabet)),
      names_(std::move(states)),
      start_(start),
      accepting_(static_cast<int>(names_.size())),
      step_(std::move(step)),
      limit_(std::move(limit)) {
    for (int q : accepting)
        accepting_.set(q);
}

LimitNoa::LimitNoa(const LimitNoa& o)
    : alphabet_(o.alphabet_),
      names_(o.names_),
      start_(o.start_),
      accepting_(o.accepting_),
      step_(o.step_),
      limit_(o.limit_) {}

LimitNoa& LimitNoa::operator=(const LimitNoa& o) {
    if (this != &o) {
        std::scoped_lock lk(mu_);
        alphabet_ = o.alphabet_;
        names_ = o.names_;
        start_ = o.start_;
        accepting_ = o.accepting_;
        step_ = o.step_;
        limit_ = o.limit_;
        engines_.clear();
    }
    return *this;
}

StateSet LimitNoa::start_set() const {
    StateSet s(states());
    s.set(start_);
    return s;
}

int LimitNoa::mask_limit(const StateSet& mask_ids) const {
    StateSet out(states());
    mask_ids.for_each(
        [&](int id) { out |= limit_.eval(id_to_mask(id, states()), states()); });
    return mask_to_id(out);
}

Engine& LimitNoa::mask_engine(int sym) const {
    auto it = engines_.find(sym);
    if (it != engines_.end())
        return *it->second;
    int n = states();
    if (n > kSetRunGuard)
        throw GuardError("set-run machinery limited to " + std::to_string(kSetRunGuard) +
                         " states, got " + std::to_string(n));
    int m = 1 << n;
    auto eng = std::make_unique<Engine>(
        m,
        [this, sym, n](int id) {
            StateSet out(n);
            id_to_mask(id, n).for_each([&](int q) { out |= step_[q][sym]; });
            return mask_to_id(out);
        },
        [this](const StateSet& ids) { return mask_limit(ids); });
    return *engines_.emplace(sym, std::move(eng)).first->second;
}

StateSet LimitNoa::run_set(const StateSet& from, const BlockWord& w) const {
    std::scoped_lock lk(mu_);
    int id = mask_to_id(from);
    for (const Block& b : w.blocks()) {
        int sym = alphabet_.index_of(b.symbol);
        if (sym < 0)
            throw AlphabetError("symbol outside automaton alphabet: " + b.symbol);
        id = mask_engine(sym).consume(id, b.run);
        // Mask machines are total; consume cannot die.
    }
    return id_to_mask(id, states());
}

NoaRunOutcome LimitNoa::run(const BlockWord& w) const {
    StateSet end = run_set(start_set(), w);
    StateSet hit = end;
    hit &= accepting_;
    return NoaRunOutcome{end, !hit.empty()};
}

bool LimitNoa::accepts(const BlockWord& w) const { return run(w).accepted; }

DoaRunOutcome TransitionOracle::run(const BlockWord& w) const {
    auto end = next(start, w);
    if (!end)
        return DoaRunOutcome{false, -1, false};
    return DoaRunOutcome{true, *end, accepting(*end)};
}

bool TransitionOracle::accepts(const BlockWord& w) const { return run(w).accepted; }

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

LimitNoa as_noa(const LimitDoa& a) {
    int n = a.states();
    std::vector<std::vector<StateSet>> step(n);
    for (int q = 0; q < n; ++q) {
        step[q].resize(a.alphabet().size(), StateSet(n));
        for (size_t s = 0; s < a.alphabet().size(); ++s) {
            int t = a.one_step(q, static_cast<int>(s));
            if (t >= 0)
                step[q][s].set(t);
        }
    }
    NoaLimitRule rule;
    LimitRule base = a.limit();
    rule.fallback = [base, n](const StateSet& s) {
        StateSet out(n);
        int t = base.eval(s);
        if (t >= 0)
            out.set(t);
        return out;
    };
    return LimitNoa(a.alphabet(), a.state_names(), a.start(), a.accepting().to_vector(),
                    std::move(step), std::move(rule));
}

LimitDoa complete(const LimitDoa& a) {
    int n = a.states();
    int sink = n;
    std::vector<std::string> names = a.state_names();
    std::string sink_name = "sink";
    while (std::find(names.begin(), names.end(), sink_name) != names.end())
        sink_name += "_";
    names.push_back(sink_name);
    std::vector<std::vector<int>> step(n + 1);
    for (int q = 0; q < n; ++q) {
        step[q].resize(a.alphabet().size());
        for (size_t s = 0; s < a.alphabet().size(); ++s) {
            int t = a.one_step(q, static_cast<int>(s));
            step[q][s] = t >= 0 ? t : sink;
        }
    }
    step[sink].assign(a.alphabet().size(), sink);
    LimitRule rule;
    LimitRule base = a.limit();
    rule.fallback = [base, sink, n](const StateSet& s) {
        if (s.test(sink))
            return sink;
        int t = base.eval(resized(s, n));
        return t >= 0 ? t : sink;
    };
    LimitDoa out(a.alphabet(), std::move(names), a.start(), a.accepting().to_vector(),
                 std::move(step), std::move(rule));
    out.mark_complete();
    return out;
}

LimitDoa complement(const LimitDoa& a) {
    if (!a.is_complete())
        throw NotCompleteError("complement requires a complete DOA");
    std::vector<int> acc;
    for (int q = 0; q < a.states(); ++q)
        if (!a.is_accepting(q))
            acc.push_back(q);
    std::vector<std::vector<int>> step(a.states());
    for (int q = 0; q < a.states(); ++q) {
        step[q].resize(a.alphabet().size());
        for (size_t s = 0; s < a.alphabet().size(); ++s)
            step[q][s] = a.one_step(q, static_cast<int>(s));
    }
    LimitDoa out(a.alphabet(), a.state_names(), a.start(), acc, std::move(step), a.limit());
    out.mark_complete();
    return out;
}

LimitNoa union_noa(const LimitNoa& a, const LimitNoa& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw AlphabetError("union: alphabets differ");
    int na = a.states(), nb = b.states();
    int n = 1 + na + nb;
    auto sa = [&](int q) { return 1 + q; };
    auto sb = [&](int q) { return 1 + na + q; };

    std::vector<std::string> names;
    names.push_back("q0");
    for (const auto& s : a.state_names())
        names.push_back("l:" + s);
    for (const auto& s : b.state_names())
        names.push_back("r:" + s);

    size_t syms = a.alphabet().size();
    std::vector<std::vector<StateSet>> step(n, std::vector<StateSet>(syms, StateSet(n)));
    for (size_t s = 0; s < syms; ++s) {
        a.step()[a.start()][s].for_each([&](int t) { step[0][s].set(sa(t)); });
        b.step()[b.start()][s].for_each([&](int t) { step[0][s].set(sb(t)); });
        for (int q = 0; q < na; ++q)
            a.step()[q][s].for_each([&](int t) { step[sa(q)][s].set(sa(t)); });
        for (int q = 0; q < nb; ++q)
            b.step()[q][s].for_each([&](int t) { step[sb(q)][s].set(sb(t)); });
    }

    // The combined limit rule decomposes componentwise; the fresh start never
    // occurs cofinally.
    NoaLimitRule rule;
    NoaLimitRule ra = a.limit(), rb = b.limit();
    rule.fallback = [ra, rb, na, nb, n](const StateSet& s) {
        StateSet pa(na), pb(nb);
        s.for_each([&](int q) {
            if (q >= 1 && q < 1 + na)
                pa.set(q - 1);
            else if (q >= 1 + na)
                pb.set(q - 1 - na);
        });
        StateSet out(n);
        if (!pa.empty())
            ra.eval(pa, na).for_each([&](int t) { out.set(1 + t); });
        if (!pb.empty())
            rb.eval(pb, nb).for_each([&](int t) { out.set(1 + na + t); });
        return out;
    };

    std::vector<int> acc;
    if (a.accepting().test(a.start()) || b.accepting().test(b.start()))
        acc.push_back(0);
    a.accepting().for_each([&](int q) { acc.push_back(sa(q)); });
    b.accepting().for_each([&](int q) { acc.push_back(sb(q)); });

    LimitNoa full(a.alphabet(), std::move(names), 0, std::move(acc), std::move(step),
                  std::move(rule));

    // Drop states unreachable through steps and explicit limit entries. This
    // removes the original starts exactly when nothing re-enters them.
    bool prunable = !a.limit().fallback && !b.limit().fallback;
    if (!prunable)
        return full;
    std::vector<std::pair<StateSet, StateSet>> limit_edges;
    for (const auto& [k, v] : a.limit().entries) {
        StateSet key(n), val(n);
        k.for_each([&](int q) { key.set(sa(q)); });
        v.for_each([&](int q) { val.set(sa(q)); });
        limit_edges.emplace_back(key, val);
    }
    for (const auto& [k, v] : b.limit().entries) {
        StateSet key(n), val(n);
        k.for_each([&](int q) { key.set(sb(q)); });
        v.for_each([&](int q) { val.set(sb(q)); });
        limit_edges.emplace_back(key, val);
    }
    StateSet reach(n);
    reach.set(0);
    bool grew = true;
    while (grew) {
        grew = false;
        StateSet next = reach;
        reach.for_each([&](int q) {
            for (size_t s = 0; s < syms; ++s)
                next |= full.step()[q][s];
        });
        for (const auto& [k, v] : limit_edges) {
            StateSet inter = k;
            inter &= reach;
            if (!inter.empty())
                next |= v;
        }
        if (next != reach) {
            reach = next;
            grew = true;
        }
    }
    if (reach.count() == n)
        return full;

    std::vector<int> remap(n, -1);
    int m = 0;
    for (int q = 0; q < n; ++q)
        if (reach.test(q))
            remap[q] = m++;
    std::vector<std::string> names2;
    for (int q = 0; q < n; ++q)
        if (reach.test(q))
            names2.push_back(full.state_names()[q]);
    std::vector<std::vector<StateSet>> step2(m, std::vector<StateSet>(syms, StateSet(m)));
    for (int q = 0; q < n; ++q) {
        if (remap[q] < 0)
            continue;
        for (size_t s = 0; s < syms; ++s)
            full.step()[q][s].for_each([&](int t) {
                if (remap[t] >= 0)
                    step2[remap[q]][s].set(remap[t]);
            });
    }
    NoaLimitRule rule2;
    for (const auto& [k, v] : limit_edges) {
        bool alive = true;
        StateSet key(m), val(m);
        k.for_each([&](int q) {
            if (remap[q] < 0)
                alive = false;
            else
                key.set(remap[q]);
        });
        if (!alive)
            continue;  // a dropped state can never occur cofinally
        v.for_each([&](int q) {
            if (remap[q] >= 0)
                val.set(remap[q]);
        });
        rule2.entries[key] = val;
    }
    std::vector<int> acc2;
    full.accepting().for_each([&](int q) {
        if (remap[q] >= 0)
            acc2.push_back(remap[q]);
    });
    return LimitNoa(a.alphabet(), std::move(names2), 0, std::move(acc2), std::move(step2),
                    std::move(rule2));
}

LimitDoa determinize(const LimitNoa& nin) {
    int n = nin.states();
    if (n > kSetRunGuard)
        throw GuardError("determinize limited to " + std::to_string(kSetRunGuard) + " states");
    int m = 1 << n;
    std::vector<std::string> names(m);
    for (int id = 0; id < m; ++id) {
        std::string s = "{";
        bool first = true;
        for (int q = 0; q < n; ++q)
            if (id & (1 << q)) {
                if (!first)
                    s += ",";
                s += nin.state_names()[q];
                first = false;
            }
        names[id] = s + "}";
    }
    size_t syms = nin.alphabet().size();
    std::vector<std::vector<int>> step(m, std::vector<int>(syms));
    for (int id = 0; id < m; ++id)
        for (size_t s = 0; s < syms; ++s) {
            StateSet out(n);
            id_to_mask(id, n).for_each([&](int q) { out |= nin.step()[q][s]; });
            step[id][s] = mask_to_id(out);
        }
    std::vector<int> acc;
    for (int id = 0; id < m; ++id) {
        StateSet inter = id_to_mask(id, n);
        inter &= nin.accepting();
        if (!inter.empty())
            acc.push_back(id);
    }
    LimitRule rule;
    NoaLimitRule base = nin.limit();
    rule.fallback = [base, n](const StateSet& ids) {
        StateSet out(n);
        ids.for_each([&](int id) { out |= base.eval(id_to_mask(id, n), n); });
        return mask_to_id(out);
    };
    LimitDoa out(nin.alphabet(), std::move(names), 1 << nin.start(), std::move(acc),
                 std::move(step), std::move(rule));
    out.mark_complete();
    return out;
}

// ---------------------------------------------------------------------------
// Prefix-tree DOA for a finite language
// ---------------------------------------------------------------------------

namespace {

// Recognizer for exactly s^alpha (alpha > 0 with finite CNF exponents),
// consuming one symbol per step. States track the lowest nonzero CNF digit
// of the consumed count within the current w^e unit; limits map the set of
// lower-digit states to the next digit up.
struct RunCounter {
    std::vector<int> unit_exp;       // one entry per w^e unit, CNF order
    std::vector<int> c_state;        // id of "about to consume unit j"; c_state[U] = exact hit
    std::vector<std::vector<int>> d_state;  // per unit, per digit level
    int exact = 0;
    int dead = 0;
    int count = 0;

    explicit RunCounter(const Ordinal& alpha) {
        for (const auto& t : alpha.terms()) {
            if (!t.exponent.is_finite())
                throw DepthError("prefix_tree_doa: run " + alpha.str() +
                                 " has infinite CNF exponents");
            for (uint64_t c = 0; c < t.coefficient; ++c)
                unit_exp.push_back(static_cast<int>(t.exponent.finite_value()));
        }
        int id = 0;
        c_state.resize(unit_exp.size() + 1);
        d_state.resize(unit_exp.size());
        for (size_t j = 0; j < unit_exp.size(); ++j) {
            c_state[j] = id++;
            d_state[j].resize(unit_exp[j]);
            for (int d = 0; d < unit_exp[j]; ++d)
                d_state[j][d] = id++;
        }
        c_state[unit_exp.size()] = id++;
        exact = c_state[unit_exp.size()];
        dead = id++;
        count = id;
    }

    int step(int st) const {
        if (st == dead || st == exact)
            return dead;
        for (size_t j = 0; j < unit_exp.size(); ++j) {
            if (st == c_state[j])
                return unit_exp[j] == 0 ? c_state[j + 1] : d_state[j][0];
            for (int d = 0; d < unit_exp[j]; ++d)
                if (st == d_state[j][d])
                    return d_state[j][0];
        }
        return dead;
    }

    // Limit of a set of cofinally occurring counter states.
    int lim(const std::vector<int>& proj) const {
        if (proj.size() == 1 && proj[0] == dead)
            return dead;
        // Valid cofinal sets are exactly {D_{j,0}, ..., D_{j,d-1}}.
        for (size_t j = 0; j < unit_exp.size(); ++j) {
            for (int d = 1; d <= unit_exp[j]; ++d) {
                std::vector<int> want(d_state[j].begin(), d_state[j].begin() + d);
                std::sort(want.begin(), want.end());
                if (want == proj)
                    return d < unit_exp[j] ? d_state[j][d] : c_state[j + 1];
            }
        }
        return dead;
    }
};

struct TrieNode {
    bool member = false;
    // symbol -> list of (run, child node)
    std::map<Symbol, std::vector<std::pair<Ordinal, int>>> edges;
};

}  // namespace

LimitDoa prefix_tree_doa(const std::vector<BlockWord>& members, const Alphabet& alphabet) {
    std::vector<TrieNode> trie(1);
    for (const BlockWord& w : members) {
        int node = 0;
        for (const Block& b : w.blocks()) {
            if (!alphabet.contains(b.symbol))
                throw AlphabetError("prefix_tree_doa: symbol outside alphabet: " + b.symbol);
            auto& outs = trie[node].edges[b.symbol];
            int child = -1;
            for (auto& [run, c] : outs)
                if (run == b.run)
                    child = c;
            if (child < 0) {
                child = static_cast<int>(trie.size());
                trie.emplace_back();
                outs.emplace_back(b.run, child);
            }
            node = child;
        }
        trie[node].member = true;
    }

    // One gadget per (node, symbol): the product of the run counters of the
    // outgoing edges. Global states: node 0's entry plus every gadget tuple.
    struct Gadget {
        std::vector<RunCounter> counters;
        std::vector<int> children;
        std::vector<int> radix;  // mixed-radix strides into the tuple space
        int tuples = 0;
        int base = 0;  // first global id
    };
    std::map<std::pair<int, Symbol>, Gadget> gadgets;
    int next_id = 1;  // 0 = root entry state
    for (size_t node = 0; node < trie.size(); ++node) {
        for (const auto& [sym, outs] : trie[node].edges) {
            Gadget g;
            for (const auto& [run, child] : outs) {
                g.counters.emplace_back(run);
                g.children.push_back(child);
            }
            g.tuples = 1;
            for (const auto& c : g.counters) {
                g.radix.push_back(g.tuples);
                g.tuples *= c.count;
                if (g.tuples > 20000)
                    throw GuardError("prefix_tree_doa: gadget product too large");
            }
            g.base = next_id;
            next_id += g.tuples;
            gadgets[{static_cast<int>(node), sym}] = std::move(g);
        }
    }
    int total = next_id;
    if (total > 60000)
        throw GuardError("prefix_tree_doa: state space too large");

    auto tuple_of = [](const Gadget& g, int local) {
        std::vector<int> t(g.counters.size());
        for (size_t i = 0; i < g.counters.size(); ++i)
            t[i] = (local / g.radix[i]) % g.counters[i].count;
        return t;
    };
    auto local_of = [](const Gadget& g, const std::vector<int>& t) {
        int local = 0;
        for (size_t i = 0; i < t.size(); ++i)
            local += t[i] * g.radix[i];
        return local;
    };
    // Child node reached when exactly one counter sits at its exact state.
    auto routed_child = [&](const Gadget& g, const std::vector<int>& t) {
        int child = -1;
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i] == g.counters[i].exact) {
                if (child >= 0)
                    return -1;
                child = g.children[i];
            }
        return child;
    };
    auto entry_state = [&](int node, const Symbol& sym) -> int {
        auto it = gadgets.find({node, sym});
        if (it == gadgets.end())
            return -1;
        const Gadget& g = it->second;
        std::vector<int> t(g.counters.size(), 0);
        // entry tuple is all-zero (every counter at its first C state), but
        // the global transition consumes one symbol, so step it once.
        for (size_t i = 0; i < t.size(); ++i)
            t[i] = g.counters[i].step(g.counters[i].c_state[0]);
        return g.base + local_of(g, t);
    };

    std::vector<std::string> names(total);
    names[0] = "<root>";
    std::vector<std::vector<int>> step(total, std::vector<int>(alphabet.size(), -1));
    std::vector<int> acc;
    if (trie[0].member)
        acc.push_back(0);
    for (size_t s = 0; s < alphabet.size(); ++s)
        step[0][s] = entry_state(0, alphabet.symbols()[s]);

    for (auto& [key, g] : gadgets) {
        const Symbol& gsym = key.second;
        for (int local = 0; local < g.tuples; ++local) {
            int id = g.base + local;
            auto t = tuple_of(g, local);
            names[id] = "g" + std::to_string(g.base) + "." + std::to_string(local);
            int child = routed_child(g, t);
            for (size_t s = 0; s < alphabet.size(); ++s) {
                const Symbol& sym = alphabet.symbols()[s];
                if (sym == gsym) {
                    std::vector<int> t2(t.size());
                    for (size_t i = 0; i < t.size(); ++i)
                        t2[i] = g.counters[i].step(t[i]);
                    step[id][s] = g.base + local_of(g, t2);
                } else if (child >= 0) {
                    step[id][s] = entry_state(child, sym);
                }
            }
            if (child >= 0 && trie[child].member)
                acc.push_back(id);
        }
    }

    LimitRule rule;
    // Limits always fall inside a single gadget: decompose per counter.
    std::map<std::pair<int, Symbol>, Gadget>* gp =
        new std::map<std::pair<int, Symbol>, Gadget>(gadgets);
    std::shared_ptr<std::map<std::pair<int, Symbol>, Gadget>> gshare(gp);
    rule.fallback = [gshare, tuple_of, local_of](const StateSet& s) -> int {
        const Gadget* g = nullptr;
        for (const auto& [k, cand] : *gshare) {
            bool all = true, any = false;
            s.for_each([&](int id) {
                if (id >= cand.base && id < cand.base + cand.tuples)
                    any = true;
                else
                    all = false;
            });
            if (any && all) {
                g = &cand;
                break;
            }
            if (any)
                return -1;  // states from several gadgets never share a limit
        }
        if (!g)
            return -1;
        std::vector<std::vector<int>> proj(g->counters.size());
        s.for_each([&](int id) {
            auto t = tuple_of(*g, id - g->base);
            for (size_t i = 0; i < t.size(); ++i)
                proj[i].push_back(t[i]);
        });
        std::vector<int> target(g->counters.size());
        for (size_t i = 0; i < proj.size(); ++i) {
            std::sort(proj[i].begin(), proj[i].end());
            proj[i].erase(std::unique(proj[i].begin(), proj[i].end()), proj[i].end());
            target[i] = g->counters[i].lim(proj[i]);
        }
        return g->base + local_of(*g, target);
    };

    return LimitDoa(alphabet, std::move(names), 0, std::move(acc), std::move(step),
                    std::move(rule));
}

// ---------------------------------------------------------------------------
// Coherence checking
// ---------------------------------------------------------------------------

CoherenceReport check_coherence(const WordNextFn& next, int states, const Alphabet& alphabet,
                                int samples, uint64_t seed) {
    std::mt19937_64 rng(seed);
    WordSampler sampler{alphabet};
    CoherenceReport report;
    std::uniform_int_distribution<int> stated(0, states - 1);
    for (int i = 0; i < samples; ++i) {
        BlockWord w = sampler.sample(rng);
        auto positions = split_positions(w);
        std::uniform_int_distribution<size_t> posd(0, positions.size() - 1);
        Ordinal split = positions[posd(rng)];
        int q = stated(rng);
        ++report.samples;
        auto direct = next(q, w);
        auto mid = next(q, prefix(w, split));
        std::optional<int> composed;
        if (mid)
            composed = next(*mid, tail(w, split));
        if (direct != composed) {
            auto show = [](const std::optional<int>& v) {
                return v ? std::to_string(*v) : std::string("undefined");
            };
            report.failures.push_back(CoherenceFailure{
                q, w, split, "direct=" + show(direct) + " composed=" + show(composed)});
            if (report.failures.size() >= 10)
                break;
        }
    }
    return report;
}

CoherenceReport check_coherence(const LimitDoa& a, int samples, uint64_t seed) {
    return check_coherence(
        [&a](int q, const BlockWord& w) { return a.run_from(q, w); }, a.states(), a.alphabet(),
        samples, seed);
}

CoherenceReport check_coherence(const LimitNoa& a, int samples, uint64_t seed) {
    // Coherence of set-run semantics, checked at the mask level.
    int n = a.states();
    if (n > kSetRunGuard)
        throw GuardError("coherence check: automaton too large for set-run");
    return check_coherence(
        [&a, n](int id, const BlockWord& w) -> std::optional<int> {
            return mask_to_id(a.run_set(id_to_mask(id, n), w));
        },
        1 << n, a.alphabet(), samples, seed);
}

CoherenceReport check_coherence(const TransitionOracle& a, int samples, uint64_t seed) {
    return check_coherence(a.next, a.states, a.alphabet, samples, seed);
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) {
        if (t[0] == '#')
            break;
        out.push_back(t);
    }
    return out;
}

}  // namespace

AutomatonFile parse_automaton(std::string_view text) {
    std::vector<Symbol> alpha_syms;
    std::vector<std::string> states;
    std::map<std::string, int> index;
    std::string start_name;
    std::vector<std::string> accept_names;
    struct StepLine {
        std::string from, sym;
        std::vector<std::string> to;
        int line;
    };
    struct LimitLine {
        std::vector<std::string> from, to;
        int line;
    };
    std::vector<StepLine> steps;
    std::vector<LimitLine> limits;
    std::string declared_type;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty())
            continue;
        const std::string& head = toks[0];
        if (head == "type") {
            if (toks.size() != 2)
                throw ParseError("type takes one argument", lineno, 1);
            declared_type = toks[1];
        } else if (head == "alphabet") {
            alpha_syms.assign(toks.begin() + 1, toks.end());
        } else if (head == "states") {
            for (size_t i = 1; i < toks.size(); ++i) {
                if (index.count(toks[i]))
                    throw ParseError("duplicate state " + toks[i], lineno, 1);
                index[toks[i]] = static_cast<int>(states.size());
                states.push_back(toks[i]);
            }
        } else if (head == "start") {
            if (toks.size() != 2)
                throw ParseError("start takes one state", lineno, 1);
            start_name = toks[1];
        } else if (head == "accept") {
            accept_names.insert(accept_names.end(), toks.begin() + 1, toks.end());
        } else if (head == "step") {
            if (toks.size() < 4)
                throw ParseError("step needs `step from sym to...`", lineno, 1);
            steps.push_back(StepLine{toks[1], toks[2], {toks.begin() + 3, toks.end()}, lineno});
        } else if (head == "limit") {
            auto arrow = std::find(toks.begin(), toks.end(), "->");
            if (arrow == toks.end() || arrow == toks.begin() + 1 || arrow + 1 == toks.end())
                throw ParseError("limit needs `limit q1 q2 -> t...`", lineno, 1);
            limits.push_back(
                LimitLine{{toks.begin() + 1, arrow}, {arrow + 1, toks.end()}, lineno});
        } else {
            throw ParseError("unknown directive " + head, lineno, 1);
        }
    }
    bool lambda = declared_type == "lambda-noa" ||
                  std::find(alpha_syms.begin(), alpha_syms.end(), kLambda) != alpha_syms.end();
    Alphabet alphabet(alpha_syms, lambda);
    if (states.empty())
        throw ParseError("no states declared");
    auto state_of = [&](const std::string& s, int ln) {
        auto it = index.find(s);
        if (it == index.end())
            throw ParseError("unknown state " + s, ln, 1);
        return it->second;
    };
    int start = state_of(start_name.empty() ? states[0] : start_name, 0);
    int n = static_cast<int>(states.size());

    std::vector<std::vector<StateSet>> nstep(n,
                                             std::vector<StateSet>(alphabet.size(), StateSet(n)));
    bool deterministic = true;
    for (const auto& s : steps) {
        int q = state_of(s.from, s.line);
        int sym = alphabet.index_of(s.sym);
        if (sym < 0)
            throw ParseError("unknown symbol " + s.sym, s.line, 1);
        for (const auto& t : s.to)
            nstep[q][sym].set(state_of(t, s.line));
        if (nstep[q][sym].count() > 1)
            deterministic = false;
    }
    NoaLimitRule nrule;
    for (const auto& l : limits) {
        StateSet key(n), val(n);
        for (const auto& s : l.from)
            key.set(state_of(s, l.line));
        for (const auto& s : l.to)
            val.set(state_of(s, l.line));
        if (val.count() > 1)
            deterministic = false;
        if (nrule.entries.count(key))
            throw ParseError("duplicate limit entry", l.line, 1);
        nrule.entries[key] = val;
    }
    std::vector<int> acc;
    for (const auto& s : accept_names)
        acc.push_back(state_of(s, 0));
    if (declared_type == "noa" || declared_type == "lambda-noa")
        deterministic = false;

    AutomatonFile out;
    out.deterministic = deterministic;
    out.noa = LimitNoa(alphabet, states, start, acc, nstep, nrule);
    if (deterministic) {
        std::vector<std::vector<int>> dstep(n, std::vector<int>(alphabet.size(), -1));
        for (int q = 0; q < n; ++q)
            for (size_t sidx = 0; sidx < alphabet.size(); ++sidx)
                nstep[q][sidx].for_each([&](int t) { dstep[q][sidx] = t; });
        LimitRule drule;
        for (const auto& [k, v] : nrule.entries)
            v.for_each([&](int t) { drule.entries[k] = t; });
        out.doa = LimitDoa(alphabet, states, start, acc, dstep, drule);
        bool total = static_cast<size_t>(out.doa.limit().entries.size()) ==
                     (n <= 20 ? (size_t(1) << n) - 1 : size_t(-1));
        for (int q = 0; q < n && total; ++q)
            for (size_t sidx = 0; sidx < alphabet.size() && total; ++sidx)
                total = dstep[q][sidx] >= 0;
        if (total)
            out.doa.mark_complete();
    }
    return out;
}

namespace {

std::string format_common(const Alphabet& alphabet, const std::vector<std::string>& names,
                          int start, const StateSet& accepting, const std::string& type) {
    std::string out = "type " + type + "\nalphabet";
    for (const auto& s : alphabet.symbols())
        out += " " + s;
    out += "\nstates";
    for (const auto& s : names)
        out += " " + s;
    out += "\nstart " + names[start] + "\naccept";
    accepting.for_each([&](int q) { out += " " + names[q]; });
    out += "\n";
    return out;
}

}  // namespace

std::string format(const LimitDoa& a) {
    std::string out =
        format_common(a.alphabet(), a.state_names(), a.start(), a.accepting(), "doa");
    for (int q = 0; q < a.states(); ++q)
        for (size_t s = 0; s < a.alphabet().size(); ++s)
            if (a.one_step(q, static_cast<int>(s)) >= 0)
                out += "step " + a.state_names()[q] + " " + a.alphabet().symbols()[s] + " " +
                       a.state_names()[a.one_step(q, static_cast<int>(s))] + "\n";
    for (const auto& [k, v] : a.limit().entries) {
        out += "limit";
        k.for_each([&](int q) { out += " " + a.state_names()[q]; });
        out += " -> " + a.state_names()[v] + "\n";
    }
    return out;
}

std::string format(const LimitNoa& a) {
    std::string out =
        format_common(a.alphabet(), a.state_names(), a.start(), a.accepting(),
                      a.alphabet().has_lambda() ? "lambda-noa" : "noa");
    for (int q = 0; q < a.states(); ++q)
        for (size_t s = 0; s < a.alphabet().size(); ++s)
            if (!a.step()[q][s].empty()) {
                out += "step " + a.state_names()[q] + " " + a.alphabet().symbols()[s];
                a.step()[q][s].for_each([&](int t) { out += " " + a.state_names()[t]; });
                out += "\n";
            }
    for (const auto& [k, v] : a.limit().entries) {
        out += "limit";
        k.for_each([&](int q) { out += " " + a.state_names()[q]; });
        out += " ->";
        v.for_each([&](int t) { out += " " + a.state_names()[t]; });
        out += "\n";
    }
    return out;
}

}  // namespace ordauto
