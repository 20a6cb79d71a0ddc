#ifndef ORDAUTO_ENGINE_HPP
#define ORDAUTO_ENGINE_HPP

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ordauto/ordinal.hpp"
#include "ordauto/stateset.hpp"

namespace ordauto {

// Accelerated evaluation of transfinite constant-symbol runs over a finite
// deterministic transition system with a limit rule.
//
// A UnitTable describes consuming one "unit" of input from each state:
//   step[q]  next state after one unit (-1 when the run dies inside it),
//   vis[q]   all base states occurring at positions [0, unit) of that run.
// The base table (unit = one symbol) has step = the one-step map and
// vis[q] = {q}. Lifting by omega replaces the unit by omega units: the new
// step walks the old step to its cycle and applies the limit rule to the
// union of the cycle's visit sets (exactly the states occurring cofinally
// below the new unit). Tower lifts handle units of size w^{w^f} via the
// fundamental sequence of w^f and periodicity of the lifted-table ladder.
class Engine {
  public:
    // -1 = limit undefined on that set.
    using LimFn = std::function<int(const StateSet&)>;

    struct UnitTable {
        std::vector<int> step;
        std::vector<StateSet> vis;
        bool operator<(const UnitTable& o) const {
            if (step != o.step)
                return step < o.step;
            return vis < o.vis;
        }
        bool operator==(const UnitTable& o) const { return step == o.step && vis == o.vis; }
    };

    // step_fn(q) -> successor or -1; m = number of states.
    Engine(int m, const std::function<int(int)>& step_fn, LimFn lim);

    int size() const { return m_; }

    // State after consuming s^n from q; -1 when the run is undefined.
    int consume(int q, const Ordinal& n);

    // All states occurring at positions [0, w^e) of the run from q
    // (so always including q). Positions past an undefined step do not exist.
    std::set<int> orbit_below(int q, const Ordinal& e);

    // Table whose unit is w^e symbols; exposed for visit-set inspection.
    int power_table(const Ordinal& e);
    const UnitTable& table(int id) const { return tables_[id]; }

  private:
    int intern(UnitTable t);
    int lift_omega(int tid);
    int lift_tower(int tid, const Ordinal& f);  // unit' = w^{w^f} units
    int lift_power(int tid, const Ordinal& e);  // unit' = w^e units

    int m_;
    LimFn lim_;
    std::vector<UnitTable> tables_;
    std::map<UnitTable, int> ids_;
    std::map<int, int> omega_cache_;
    std::map<std::pair<int, Ordinal>, int> power_cache_;
    std::map<std::pair<int, Ordinal>, int> tower_cache_;
};

}  // namespace ordauto

#endif
