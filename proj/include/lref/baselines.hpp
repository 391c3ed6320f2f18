#pragma once
// Reference selectors the two optimizing methods are compared against. All of
// them draw from the same per-RC feasible sets as the centralized method and
// differ only in the pick rule and how theta is chosen.

#include "lref/central.hpp"
#include "lref/lyap.hpp"
#include "lref/types.hpp"

namespace lref::baselines {

enum class Picker {
  Greedy,  // highest trust weight among feasible candidates
  Random,  // uniform among feasible candidates
  Sqos,    // uniform among feasible candidates that are QoS-active
};

enum class ThetaRule {
  Sghs,          // minimize F(theta) for the picked action
  RandomTheta,   // uniform draw over [theta_min, theta_max]
};

struct BaselineKind {
  Picker picker;
  ThetaRule theta_rule;
};

// Maps the four baseline Method values (greedy/random/sqos x sghs/random)
// onto their pick/theta rules. Throws for the two optimizing methods.
BaselineKind kind_of(Method method);

// Resolve conflicts greedily by RC id: RCs pick in ascending order, each from
// its still-unclaimed candidates. Idle RCs train themselves as everywhere.
Selection baseline_select(BaselineKind kind, const NetworkState& state,
                          const NeighborSets& sets, const lyap::VirtualQueues& q,
                          const SimConfig& cfg);

}  // namespace lref::baselines
