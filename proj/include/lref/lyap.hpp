#pragma once
// Virtual-queue bookkeeping for the two long-term constraints (per-RC
// participation fairness, per-UnRC C2C QoS) and the drift-plus-penalty
// objective that trades queue backlog against the per-round efficiency cost.

#include <optional>
#include <vector>

#include "lref/config.hpp"
#include "lref/types.hpp"

namespace lref::lyap {

struct VirtualQueues {
  std::vector<double> gamma;  // per RC: fairness debt
  std::vector<double> z;      // per UnRC: QoS debt

  static VirtualQueues zeros(int num_rc, int num_unrc) {
    return {std::vector<double>(num_rc, 0.0), std::vector<double>(num_unrc, 0.0)};
  }
};

// gamma_m[t+1] = max(gamma_m[t] + delta - alpha_m[t], 0); alpha_m is the
// number of learners RC m fielded this round (0 or 1).
inline double update_gamma(double gamma, double delta, int alpha_sum) {
  double next = gamma + delta - alpha_sum;
  return next > 0.0 ? next : 0.0;
}

// z_n[t+1] = max(z_n[t] + R_min - R_achieved, 0) whenever UnRC n was fielded
// while QoS-active (its reserved C2C link must keep up); untouched otherwise.
inline double update_z(double z, bool recommended_active, double r_min, double r_achieved) {
  if (!recommended_active) return z;
  double next = z + (r_min - r_achieved);
  return next > 0.0 ? next : 0.0;
}

// Per-round record of who was fielded, kept so the long-term constraint
// residuals can be recomputed after a run.
struct SelectionRecord {
  std::vector<int> rc_alpha;                    // per RC: 0/1 fielded a learner
  std::vector<std::uint8_t> recommended_active; // per UnRC: fielded while active
  std::vector<double> c2c_rate;                 // achieved rate (valid where flag set)
};

struct SelectionHistory {
  std::vector<SelectionRecord> rounds;
};

struct Residuals {
  // per RC: (time-avg selection rate) - delta; >= 0 means fairness satisfied
  std::vector<double> fairness;
  // per UnRC: (time-avg achieved C2C rate) - r_min over rounds where the UnRC
  // was fielded while active; empty optional when that never happened
  std::vector<std::optional<double>> qos;
};

Residuals constraint_residuals(const SelectionHistory& h, double delta, double r_min);

// Full drift-plus-penalty value of (action, theta) under the current queues:
//   V * max_participants WSET + sum_m gamma_m (delta - alpha_m)
//     + sum_{referred active n} z_n (r_min - c2c_rate_n).
// Throws std::invalid_argument if the action fields no one (selectors score
// the empty action by its queue term directly, not through here).
double drift_penalty(const ActionPolicy& action, double theta, const NetworkState& state,
                     const VirtualQueues& q, const SimConfig& cfg);

}  // namespace lref::lyap
