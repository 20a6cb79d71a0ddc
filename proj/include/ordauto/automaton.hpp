#ifndef ORDAUTO_AUTOMATON_HPP
#define ORDAUTO_AUTOMATON_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ordauto/engine.hpp"
#include "ordauto/stateset.hpp"
#include "ordauto/word.hpp"

namespace ordauto {

// Limit rule of a deterministic presentation: explicit entries, optionally
// backed by a computed rule for derived automata. Absent entries leave runs
// undefined.
struct LimitRule {
    std::map<StateSet, int> entries;
    std::function<int(const StateSet&)> fallback;  // may be null; -1 = undefined

    int eval(const StateSet& s) const;
};

// Set-valued limit rule of a nondeterministic presentation. A set with no
// entry contributes nothing (that branch of the run dies).
struct NoaLimitRule {
    std::map<StateSet, StateSet> entries;
    std::function<StateSet(const StateSet&)> fallback;  // may be null

    StateSet eval(const StateSet& s, int size) const;
};

struct DoaRunOutcome {
    bool defined = false;
    int end = -1;
    bool accepted = false;
};

struct NoaRunOutcome {
    StateSet end;  // empty set = no surviving branch
    bool accepted = false;
};

// Deterministic ordinal automaton in one-step + limit-rule presentation.
class LimitDoa {
  public:
    LimitDoa() = default;
    LimitDoa(Alphabet alphabet, std::vector<std::string> states, int start,
             std::vector<int> accepting, std::vector<std::vector<int>> step, LimitRule limit);
    LimitDoa(const LimitDoa& o);
    LimitDoa& operator=(const LimitDoa& o);

    const Alphabet& alphabet() const { return alphabet_; }
    int states() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& state_names() const { return names_; }
    int start() const { return start_; }
    const StateSet& accepting() const { return accepting_; }
    bool is_accepting(int q) const { return accepting_.test(q); }
    // One-step map; -1 = undefined.
    int one_step(int q, int sym) const { return step_[q][sym]; }
    const LimitRule& limit() const { return limit_; }

    bool is_complete() const { return complete_; }
    void mark_complete() { complete_ = true; }

    // State after consuming s^n from q (the accelerated transfinite run).
    std::optional<int> block_step(int q, const Symbol& s, const Ordinal& n) const;
    std::optional<int> run_from(int q, const BlockWord& w) const;
    DoaRunOutcome run(const BlockWord& w) const;
    bool accepts(const BlockWord& w) const;

  private:
    Engine& engine_for(int sym) const;

    Alphabet alphabet_;
    std::vector<std::string> names_;
    int start_ = 0;
    StateSet accepting_;
    std::vector<std::vector<int>> step_;  // [state][symbol] -> target or -1
    LimitRule limit_;
    bool complete_ = false;

    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<Engine>> engines_;
};

// Nondeterministic ordinal automaton. Runs use set-run semantics: the
// deterministic automaton over subsets, with the limit rule lifted as
// L(Xs) = union of lim(S) over the subsets S occurring cofinally.
class LimitNoa {
  public:
    LimitNoa() = default;
    LimitNoa(Alphabet alphabet, std::vector<std::string> states, int start,
             std::vector<int> accepting, std::vector<std::vector<StateSet>> step,
             NoaLimitRule limit);
    LimitNoa(const LimitNoa& o);
    LimitNoa& operator=(const LimitNoa& o);

    const Alphabet& alphabet() const { return alphabet_; }
    int states() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& state_names() const { return names_; }
    int start() const { return start_; }
    const StateSet& accepting() const { return accepting_; }
    const std::vector<std::vector<StateSet>>& step() const { return step_; }
    const NoaLimitRule& limit() const { return limit_; }

    // Set-run from an arbitrary subset.
    StateSet run_set(const StateSet& from, const BlockWord& w) const;
    NoaRunOutcome run(const BlockWord& w) const;
    bool accepts(const BlockWord& w) const;

    StateSet start_set() const;

  private:
    friend LimitDoa determinize(const LimitNoa&);
    Engine& mask_engine(int sym) const;
    int mask_limit(const StateSet& mask_ids) const;  // the lifted rule, as mask id

    Alphabet alphabet_;
    std::vector<std::string> names_;
    int start_ = 0;
    StateSet accepting_;
    std::vector<std::vector<StateSet>> step_;
    NoaLimitRule limit_;

    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<Engine>> engines_;
};

// Opaque word-level transition function with a finite state universe;
// coherence is a claim to be property-checked, not a construction guarantee.
struct TransitionOracle {
    std::string name;
    Alphabet alphabet;
    int states = 0;
    int start = 0;
    std::function<bool(int)> accepting;
    std::function<std::optional<int>(int, const BlockWord&)> next;

    DoaRunOutcome run(const BlockWord& w) const;
    bool accepts(const BlockWord& w) const;
};

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

LimitNoa as_noa(const LimitDoa& a);

// Totalizes D with a fresh sink; the language is unchanged.
LimitDoa complete(const LimitDoa& a);

// Flips accepting states of a complete DOA; throws NotCompleteError otherwise.
LimitDoa complement(const LimitDoa& a);

// Fresh start forwarding into both components; accepts the union. Original
// starts are dropped when nothing re-enters them.
LimitNoa union_noa(const LimitNoa& a, const LimitNoa& b);

// Subset construction. The result is complete and runs over all 2^|Q| masks.
LimitDoa determinize(const LimitNoa& n);

// DOA accepting exactly the finite set S. Member runs must have CNF with
// finite exponents (below w^w); larger runs are not presentable with a
// finite limit rule.
LimitDoa prefix_tree_doa(const std::vector<BlockWord>& members, const Alphabet& alphabet);

// ---------------------------------------------------------------------------
// Coherence checking
// ---------------------------------------------------------------------------

struct CoherenceFailure {
    int state = 0;
    BlockWord word;
    Ordinal split;
    std::string detail;
};

struct CoherenceReport {
    int samples = 0;
    std::vector<CoherenceFailure> failures;
    bool ok() const { return failures.empty(); }
};

using WordNextFn = std::function<std::optional<int>(int, const BlockWord&)>;

// Samples (state, word, split) triples and checks
// next(next(q, w|[0,a)), w|[a,|w|)) == next(q, w).
CoherenceReport check_coherence(const WordNextFn& next, int states, const Alphabet& alphabet,
                                int samples, uint64_t seed);

CoherenceReport check_coherence(const LimitDoa& a, int samples, uint64_t seed);
CoherenceReport check_coherence(const LimitNoa& a, int samples, uint64_t seed);
CoherenceReport check_coherence(const TransitionOracle& a, int samples, uint64_t seed);

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------
//
//   # comment
//   type doa|noa|lambda-noa        (optional; inferred when absent)
//   alphabet 0 1
//   states z1 z2
//   start z1
//   accept z2
//   step z1 0 z1                   (noa: step q s t1 t2 ...)
//   limit z1 -> z1                 (noa: limit q1 q2 -> t1 t2 ...)

struct AutomatonFile {
    bool deterministic = true;
    LimitDoa doa;  // valid when deterministic
    LimitNoa noa;  // always valid (doa lifted when deterministic)
};

AutomatonFile parse_automaton(std::string_view text);
std::string format(const LimitDoa& a);
std::string format(const LimitNoa& a);

}  // namespace ordauto

#endif
