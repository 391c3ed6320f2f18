#include "lref/lyap.hpp"

#include <stdexcept>

#include "lref/evaluate.hpp"

namespace lref::lyap {

Residuals constraint_residuals(const SelectionHistory& h, double delta, double r_min) {
  if (h.rounds.empty()) throw std::invalid_argument("constraint_residuals: empty history");
  const size_t M = h.rounds.front().rc_alpha.size();
  const size_t N = h.rounds.front().recommended_active.size();
  const double T = double(h.rounds.size());

  Residuals res;
  res.fairness.assign(M, 0.0);
  res.qos.assign(N, std::nullopt);

  std::vector<double> rate_sum(N, 0.0);
  std::vector<int> rate_cnt(N, 0);
  for (const SelectionRecord& r : h.rounds) {
    if (r.rc_alpha.size() != M || r.recommended_active.size() != N ||
        r.c2c_rate.size() != N)
      throw std::invalid_argument("constraint_residuals: ragged history");
    for (size_t m = 0; m < M; ++m) res.fairness[m] += r.rc_alpha[m];
    for (size_t n = 0; n < N; ++n)
      if (r.recommended_active[n]) {
        rate_sum[n] += r.c2c_rate[n];
        ++rate_cnt[n];
      }
  }
  for (size_t m = 0; m < M; ++m) res.fairness[m] = res.fairness[m] / T - delta;
  for (size_t n = 0; n < N; ++n)
    if (rate_cnt[n] > 0) res.qos[n] = rate_sum[n] / rate_cnt[n] - r_min;
  return res;
}

double drift_penalty(const ActionPolicy& action, double theta, const NetworkState& state,
                     const VirtualQueues& q, const SimConfig& cfg) {
  eval::ActionEvaluation ev = eval::evaluate_action(action, state, q, cfg);
  if (ev.participants.empty())
    throw std::invalid_argument("drift_penalty: action fields no participants");
  return eval::objective_at(ev, theta, cfg);
}

}  // namespace lref::lyap
