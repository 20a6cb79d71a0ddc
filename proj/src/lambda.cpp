#include "ordauto/lambda.hpp"

namespace ordauto {

namespace {

constexpr int kMaskGuard = 12;

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

EliminatedNoa::EliminatedNoa(const LimitNoa& a)
    : alphabet_(a.alphabet().without_lambda()),
      full_alphabet_(a.alphabet()),
      n_(a.states()),
      step_(a.step()),
      limit_(a.limit()),
      accepting_(a.accepting()),
      start_(a.start()) {
    if (!a.alphabet().has_lambda())
        throw AlphabetError("lambda_eliminate: automaton has no lambda transitions declared");
    if (n_ > kMaskGuard)
        throw GuardError("lambda_eliminate limited to " + std::to_string(kMaskGuard) + " states");
    lambda_sym_ = full_alphabet_.index_of(kLambda);
}

Engine& EliminatedNoa::engine_for(int sym) const {
    auto it = engines_.find(sym);
    if (it != engines_.end())
        return *it->second;
    int m = 1 << n_;
    auto eng = std::make_unique<Engine>(
        m,
        [this, sym](int id) {
            StateSet out(n_);
            id_to_mask(id, n_).for_each([&](int q) { out |= step_[q][sym]; });
            return mask_to_id(out);
        },
        [this](const StateSet& ids) {
            StateSet out(n_);
            ids.for_each([&](int id) { out |= limit_.eval(id_to_mask(id, n_), n_); });
            return mask_to_id(out);
        });
    return *engines_.emplace(sym, std::move(eng)).first->second;
}

std::set<int> EliminatedNoa::lambda_orbit(int mask_id) const {
    auto it = lambda_orbit_cache_.find(mask_id);
    if (it != lambda_orbit_cache_.end())
        return it->second;
    // Masks after lambda^a for any a (covered below w^w; see README notes).
    auto orbit = engine_for(lambda_sym_).orbit_below(mask_id, Ordinal::omega());
    lambda_orbit_cache_[mask_id] = orbit;
    return orbit;
}

std::set<int> EliminatedNoa::block_finals(int mask_id, int sym, const Ordinal& run) const {
    auto key = std::make_pair(mask_id, std::make_pair(sym, run));
    auto it = block_cache_.find(key);
    if (it != block_cache_.end())
        return it->second;

    Engine& eng = engine_for(sym);
    std::set<int> finals;
    std::set<std::pair<int, Ordinal>> seen;
    std::vector<std::pair<int, Ordinal>> work{{mask_id, run}};
    seen.insert(work[0]);
    while (!work.empty()) {
        auto [m, remaining] = work.back();
        work.pop_back();
        finals.insert(eng.consume(m, remaining));
        for (const auto& [head, tl] : suffix_splits(remaining)) {
            int m0 = eng.consume(m, head);
            Ordinal below = tl.is_zero() ? Ordinal() : tl.leading_exponent();
            for (int m1 : eng.orbit_below(m0, below)) {
                for (int m2 : lambda_orbit(m1)) {
                    auto p = std::make_pair(m2, tl);
                    if (seen.insert(p).second)
                        work.push_back(p);
                }
            }
        }
    }
    block_cache_[key] = finals;
    return finals;
}

EliminatedNoa::Trajectories EliminatedNoa::initial() const {
    std::scoped_lock lk(mu_);
    std::set<int> init;
    for (int m : lambda_orbit(1 << start_))
        init.insert(m);
    return init;
}

EliminatedNoa::Trajectories EliminatedNoa::next(const Trajectories& from,
                                                const BlockWord& w) const {
    std::scoped_lock lk(mu_);
    std::set<int> cur = from;
    if (w.empty()) {
        std::set<int> out;
        for (int m : cur) {
            auto orb = lambda_orbit(m);
            out.insert(orb.begin(), orb.end());
        }
        return out;
    }
    for (const Block& b : w.blocks()) {
        int sym = full_alphabet_.index_of(b.symbol);
        if (sym < 0 || b.symbol == kLambda)
            throw AlphabetError("eliminated automaton word contains " + b.symbol);
        std::set<int> nxt;
        for (int m : cur) {
            auto f = block_finals(m, sym, b.run);
            nxt.insert(f.begin(), f.end());
        }
        cur = std::move(nxt);
    }
    return cur;
}

bool EliminatedNoa::accepts(const BlockWord& w) const {
    Trajectories end = next(initial(), w);
    for (int m : end) {
        StateSet s = id_to_mask(m, n_);
        s &= accepting_;
        if (!s.empty())
            return true;
    }
    return false;
}

StateSet EliminatedNoa::end_states(const BlockWord& w) const {
    Trajectories end = next(initial(), w);
    StateSet out(n_);
    for (int m : end)
        out |= id_to_mask(m, n_);
    return out;
}

int EliminatedNoa::intern(const Trajectories& t) const {
    std::scoped_lock lk(mu_);
    auto it = ids_.find(t);
    if (it != ids_.end())
        return it->second;
    int id = static_cast<int>(interned_.size());
    interned_.push_back(t);
    ids_[t] = id;
    return id;
}

int EliminatedNoa::initial_id() const { return intern(initial()); }

std::optional<int> EliminatedNoa::next_id(int id, const BlockWord& w) const {
    Trajectories t;
    {
        std::scoped_lock lk(mu_);
        if (id < 0 || id >= static_cast<int>(interned_.size()))
            return std::nullopt;
        t = interned_[id];
    }
    return intern(next(t, w));
}

int EliminatedNoa::interned_count() const {
    std::scoped_lock lk(mu_);
    return static_cast<int>(interned_.size());
}

TransitionOracle oracle_view(const EliminatedNoa& e) {
    TransitionOracle o;
    o.name = "lambda-eliminated";
    o.alphabet = e.alphabet();
    o.states = std::max(1, e.interned_count());
    o.start = e.initial_id();
    o.accepting = [](int) { return false; };  // acceptance handled by EliminatedNoa
    o.next = [&e](int id, const BlockWord& w) { return e.next_id(id, w); };
    return o;
}

}  // namespace ordauto
