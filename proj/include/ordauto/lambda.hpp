#ifndef ORDAUTO_LAMBDA_HPP
#define ORDAUTO_LAMBDA_HPP

#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "ordauto/automaton.hpp"

namespace ordauto {

// lambda-elimination: the NOA over Sigma whose transition is the union of
// the lambda-NOA's set-runs over all lambda-enrichments of the input.
//
// Enrichments are BlockWords, so they contain finitely many lambda-blocks:
// an enriched run is a finite alternation of pure constant-symbol runs and
// lambda-gap runs. The evaluator tracks, per input block s^n, the reachable
// (mask, remaining-tail) pairs: a gap at cut d with d + t = n leaves tail t,
// and the masks reachable at the cut are the pure-run orbit of the head
// composed with the lambda-run orbit. Distinct gap patterns are distinct
// set-run trajectories, so the automaton state is a *set of masks*; masks
// are only unioned for the final acceptance/display value.
class EliminatedNoa {
  public:
    explicit EliminatedNoa(const LimitNoa& lambda_noa);

    const Alphabet& alphabet() const { return alphabet_; }

    using Trajectories = std::set<int>;  // set of mask ids

    Trajectories initial() const;
    Trajectories next(const Trajectories& from, const BlockWord& w) const;

    bool accepts(const BlockWord& w) const;
    // Union over trajectories; the paper's D'(q0, w) as one state set.
    StateSet end_states(const BlockWord& w) const;

    // Interned trajectory-set ids for coherence checking. Ids are stable.
    int intern(const Trajectories& t) const;
    int initial_id() const;
    std::optional<int> next_id(int id, const BlockWord& w) const;
    int interned_count() const;

    int source_states() const { return n_; }

  private:
    Engine& engine_for(int sym) const;
    std::set<int> lambda_orbit(int mask_id) const;
    std::set<int> block_finals(int mask_id, int sym, const Ordinal& run) const;

    Alphabet alphabet_;       // Sigma (lambda removed)
    Alphabet full_alphabet_;  // Sigma + lambda
    int n_ = 0;
    int lambda_sym_ = -1;
    std::vector<std::vector<StateSet>> step_;
    NoaLimitRule limit_;
    StateSet accepting_;
    int start_ = 0;

    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<Engine>> engines_;
    mutable std::map<int, std::set<int>> lambda_orbit_cache_;
    mutable std::map<std::pair<int, std::pair<int, Ordinal>>, std::set<int>> block_cache_;
    mutable std::vector<Trajectories> interned_;
    mutable std::map<Trajectories, int> ids_;
};

// Convenience wrapper returning an oracle view over interned trajectory ids
// (for check_coherence; warm up by evaluating some words first).
TransitionOracle oracle_view(const EliminatedNoa& e);

}  // namespace ordauto

#endif
