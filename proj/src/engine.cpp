#include "ordauto/engine.hpp"

#include <algorithm>

namespace ordauto {

namespace {
constexpr int kTowerIterationCap = 4096;
constexpr int kLimitStreak = 4;     // no-growth streak ending a limit union
constexpr int kLimitIterCap = 128;  // fundamental-sequence elements explored
}  // namespace

Engine::Engine(int m, const std::function<int(int)>& step_fn, LimFn lim)
    : m_(m), lim_(std::move(lim)) {
    UnitTable base;
    base.step.resize(m_);
    base.vis.reserve(m_);
    for (int q = 0; q < m_; ++q) {
        base.step[q] = step_fn(q);
        StateSet v(m_);
        v.set(q);
        base.vis.push_back(std::move(v));
    }
    intern(std::move(base));  // id 0
}

int Engine::intern(UnitTable t) {
    auto it = ids_.find(t);
    if (it != ids_.end())
        return it->second;
    int id = static_cast<int>(tables_.size());
    ids_.emplace(t, id);
    tables_.push_back(std::move(t));
    return id;
}

int Engine::lift_omega(int tid) {
    auto it = omega_cache_.find(tid);
    if (it != omega_cache_.end())
        return it->second;
    // Copy: intern() may reallocate tables_.
    const UnitTable T = tables_[tid];
    UnitTable out;
    out.step.assign(m_, -1);
    out.vis.assign(m_, StateSet(m_));
    for (int q = 0; q < m_; ++q) {
        std::vector<int> path;
        std::vector<int> at(m_, -1);
        int p = q;
        int cycle_start = -1;
        while (true) {
            if (at[p] >= 0) {
                cycle_start = at[p];
                break;
            }
            at[p] = static_cast<int>(path.size());
            path.push_back(p);
            p = T.step[p];
            if (p < 0)
                break;
        }
        StateSet all(m_);
        for (int x : path)
            all |= T.vis[x];
        out.vis[q] = all;
        if (cycle_start < 0)
            continue;  // died inside: step stays -1
        StateSet cof(m_);
        for (size_t i = cycle_start; i < path.size(); ++i)
            cof |= T.vis[path[i]];
        out.step[q] = lim_(cof);
    }
    int id = intern(std::move(out));
    omega_cache_[tid] = id;
    return id;
}

int Engine::lift_tower(int tid, const Ordinal& f) {
    if (f.is_zero())
        return lift_omega(tid);
    auto key = std::make_pair(tid, f);
    auto it = tower_cache_.find(key);
    if (it != tower_cache_.end())
        return it->second;

    // Ladder of segment machines M_k with unit w^{s_{k+1}}, s_j the j-th
    // fundamental-sequence element of w^f. Consecutive segments absorb, so
    // segment k runs machine M_k from the segment-k start state.
    std::vector<int> ladder;
    auto machine_at = [&](size_t k) -> int {
        while (ladder.size() <= k) {
            if (ladder.size() > static_cast<size_t>(kTowerIterationCap))
                throw DepthError("tower ladder exceeded iteration cap");
            int next;
            if (f.is_successor()) {
                int prev = ladder.empty() ? tid : ladder.back();
                next = lift_tower(prev, f.predecessor());
            } else {
                next = lift_power(
                    tid, Ordinal::omega_power(fundamental_sequence(f, ladder.size() + 1)));
            }
            ladder.push_back(next);
        }
        return ladder[k];
    };

    UnitTable out;
    out.step.assign(m_, -1);
    out.vis.assign(m_, StateSet(m_));
    for (int q = 0; q < m_; ++q) {
        std::map<std::pair<int, int>, int> seen;  // (machine id, state) -> k
        std::vector<std::pair<int, int>> hist;
        int state = q;
        StateSet all(m_);
        int rep_from = -1, rep_at = -1;
        for (int k = 0; k < kTowerIterationCap; ++k) {
            int mk = machine_at(k);
            auto pos = seen.find({mk, state});
            if (pos != seen.end()) {
                rep_from = pos->second;
                rep_at = k;
                break;
            }
            seen[{mk, state}] = k;
            hist.push_back({mk, state});
            all |= tables_[mk].vis[state];
            state = tables_[mk].step[state];
            if (state < 0)
                break;
        }
        out.vis[q] = all;
        if (state < 0)
            continue;
        if (rep_from < 0)
            throw DepthError("tower segment iteration exceeded cap");
        StateSet cof(m_);
        for (int k = rep_from; k < rep_at; ++k)
            cof |= tables_[hist[k].first].vis[hist[k].second];
        out.step[q] = lim_(cof);
    }
    int id = intern(std::move(out));
    tower_cache_[key] = id;
    return id;
}

int Engine::lift_power(int tid, const Ordinal& e) {
    if (e.is_zero())
        return tid;
    auto key = std::make_pair(tid, e);
    auto it = power_cache_.find(key);
    if (it != power_cache_.end())
        return it->second;
    // w^e factors as the product of w^{w^{f_j}} over e's CNF terms, largest
    // exponent innermost.
    int cur = tid;
    for (const Ordinal::Term& t : e.terms())
        for (uint64_t c = 0; c < t.coefficient; ++c)
            cur = lift_tower(cur, t.exponent);
    power_cache_[key] = cur;
    return cur;
}

int Engine::power_table(const Ordinal& e) { return lift_power(0, e); }

int Engine::consume(int q, const Ordinal& n) {
    int state = q;
    for (const Ordinal::Term& t : n.terms()) {
        int tid = lift_power(0, t.exponent);
        for (uint64_t c = 0; c < t.coefficient && state >= 0; ++c)
            state = tables_[tid].step[state];
        if (state < 0)
            return -1;
    }
    return state;
}

std::set<int> Engine::orbit_below(int q, const Ordinal& e) {
    if (e.is_zero())
        return {q};
    if (e.is_successor()) {
        Ordinal d = e.predecessor();
        int jt = lift_power(0, d);
        std::set<int> out;
        std::set<int> starts;
        int p = q;
        while (p >= 0 && starts.insert(p).second) {
            auto sub = orbit_below(p, d);
            out.insert(sub.begin(), sub.end());
            p = tables_[jt].step[p];
        }
        return out;
    }
    // Limit exponent: union along the fundamental sequence until stable.
    std::set<int> out;
    int streak = 0;
    for (int k = 0; k < kLimitIterCap && streak < kLimitStreak; ++k) {
        size_t before = out.size();
        auto sub = orbit_below(q, fundamental_sequence(e, k));
        out.insert(sub.begin(), sub.end());
        streak = out.size() == before ? streak + 1 : 0;
    }
    return out;
}

}  // namespace ordauto
