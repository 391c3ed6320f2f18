#pragma once
// Shared action-evaluation layer. Every selector (exhaustive, matching,
// baselines) and the harness score candidate actions through these helpers so
// the drift-plus-penalty numbers they compare and report are identical by
// construction.
//
// The theta-dependence of one participant's cost separates as
//   wset(theta) = (ln(1/theta) * a + b) / (1 - theta)
// with a = lambda-weighted one-iteration compute cost and b = lambda-weighted
// upload cost, so an action is summarized by its (a,b) pairs plus a
// theta-independent queue penalty c.

#include <vector>

#include "lref/config.hpp"
#include "lref/cost.hpp"
#include "lref/lyap.hpp"
#include "lref/types.hpp"

namespace lref::eval {

// Cost of one concrete (RC, learner) pairing this round.
struct PairCost {
  int rc = -1;
  int client = -1;     // global client id of the learner
  RcMode mode = RcMode::None;
  double trust = 0.0;  // w_{m,n} for referrals, 0 for self-learning
  cost::ComputeCost cmp;   // one local iteration
  cost::UploadCost com;    // one model upload
  double a_coeff = 0.0;    // lambda_t * t_cmp + lambda_e * e_cmp
  double b_coeff = 0.0;    // lambda_t * t_com + lambda_e * e_com
  double c2c_rate = 0.0;   // reserved-link rate (active referrals; 0 if unpaired)
  bool latency_ok = true;  // one iteration fits the compute deadline
  bool link_ok = true;     // upload rate strictly positive
};

// Idle RC m trains and uploads itself (full band, full power, full CPU).
PairCost self_cost(const NetworkState& state, const SimConfig& cfg, int m);

// RC m refers UnRC n (local index); Partial/Full follows n's QoS activity.
// When the uplink is dead (active with w = 1) the pair comes back with
// link_ok = false and no upload cost; callers must not select it.
PairCost referral_cost(const NetworkState& state, const SimConfig& cfg, int m, int n);

double wset_at(const PairCost& p, double theta, const SimConfig& cfg);

// An action reduced to what the objective needs.
struct ActionEvaluation {
  std::vector<PairCost> participants;
  double queue_penalty = 0.0;  // sum_m gamma_m (delta - alpha_m) + z terms
};

// Scores `action` against the current state/queues. Throws on malformed
// actions (referral outside (0,N), busy RC claiming Self, duplicate learner,
// dead link), so selector bugs surface here rather than as silent costs.
ActionEvaluation evaluate_action(const ActionPolicy& action, const NetworkState& state,
                                 const lyap::VirtualQueues& q, const SimConfig& cfg);

// F(theta) = v * max_k wset_k(theta) + queue_penalty; just queue_penalty for
// an empty action (no theta dependence left).
double objective_at(const ActionEvaluation& ev, double theta, const SimConfig& cfg);

double max_wset_at(const ActionEvaluation& ev, double theta, const SimConfig& cfg);

// Callable form of the inner objective for the theta search.
struct FObjective {
  std::vector<std::pair<double, double>> ab;  // per participant (a, b)
  double c = 0.0;
  double v = 1.0;

  double operator()(double theta) const;
};

FObjective make_objective(const ActionEvaluation& ev, const SimConfig& cfg);

}  // namespace lref::eval
