#include "lref/evaluate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lref::eval {

PairCost self_cost(const NetworkState& state, const SimConfig& cfg, int m) {
  const Client& c = state.rc(m);
  PairCost p;
  p.rc = m;
  p.client = m;
  p.mode = RcMode::Self;
  p.cmp = cost::compute_cost(double(state.samples[m]), cfg.b_cycles, c.f_cpu, 1.0, cfg.rho,
                             cfg.zeta);
  p.latency_ok = p.cmp.t_cmp <= cfg.t_max_cmp_s;
  cost::LinkParams link{cfg.bandwidth_hz, cfg.n0_w_hz(), state.uplink_gain[m], c.p_max};
  double rate = cost::dparm_rate(link);
  p.link_ok = rate > 0.0;
  if (p.link_ok) p.com = cost::upload_cost(c.model_bits, rate, 1.0, c.p_max);
  p.a_coeff = cfg.lambda_t * p.cmp.t_cmp + cfg.lambda_e * p.cmp.e_cmp;
  p.b_coeff = cfg.lambda_t * p.com.t_com + cfg.lambda_e * p.com.e_com;
  return p;
}

PairCost referral_cost(const NetworkState& state, const SimConfig& cfg, int m, int n) {
  if (n < 0 || n >= state.num_unrc)
    throw std::invalid_argument("referral_cost: UnRC index out of range");
  double w = state.trust(m, n);
  if (!(w > 0.0))
    throw std::invalid_argument("referral_cost: RC " + std::to_string(m) +
                                " does not trust UnRC " + std::to_string(n));
  const Client& learner = state.unrc(n);
  const bool active = state.unrc_active[n] != 0;
  const int gid = state.num_rc + n;

  PairCost p;
  p.rc = m;
  p.client = gid;
  p.mode = active ? RcMode::ReferPartial : RcMode::ReferFull;
  p.trust = w;

  double row_sum = state.trust.row_sum(m);
  double pi = cost::pi_fraction(w, row_sum, active);
  p.cmp = cost::compute_cost(double(state.samples[gid]), cfg.b_cycles, learner.f_cpu, pi,
                             cfg.rho, cfg.zeta);
  p.latency_ok = p.cmp.t_cmp <= cfg.t_max_cmp_s;

  cost::LinkParams link{cfg.bandwidth_hz, cfg.n0_w_hz(), state.uplink_gain[gid], learner.p_max};
  double rate = cost::lrefm_rate(w, row_sum, active, link);
  p.link_ok = rate > 0.0;
  if (p.link_ok) p.com = cost::upload_cost(learner.model_bits, rate, pi, learner.p_max);

  // reserved C2C service rate: only an active learner keeps one, and only if
  // the pairing found it a peer this round. At w = 1 the reservation starves
  // the upload instead; the pair is unselectable and keeps no usable link.
  if (active && state.c2c_partner[n] >= 0 && w < 1.0) {
    double g = state.g_c2c(n, state.c2c_partner[n]);
    p.c2c_rate = cost::c2c_rate(true, w, g, learner.p_max, cfg.bandwidth_hz, cfg.n0_w_hz());
  }

  p.a_coeff = cfg.lambda_t * p.cmp.t_cmp + cfg.lambda_e * p.cmp.e_cmp;
  p.b_coeff = cfg.lambda_t * p.com.t_com + cfg.lambda_e * p.com.e_com;
  return p;
}

ActionEvaluation evaluate_action(const ActionPolicy& action, const NetworkState& state,
                                 const lyap::VirtualQueues& q, const SimConfig& cfg) {
  const int M = state.num_rc;
  if (int(action.rc.size()) != M)
    throw std::invalid_argument("evaluate_action: action size does not match RC count");
  if (!action.one_to_one())
    throw std::invalid_argument("evaluate_action: a learner is referred by two RCs");

  const double delta = cfg.delta();
  ActionEvaluation ev;
  for (int m = 0; m < M; ++m) {
    const RcDecision& d = action.rc[m];
    switch (d.mode) {
      case RcMode::None:
        ev.queue_penalty += q.gamma[m] * delta;
        break;
      case RcMode::Self: {
        if (d.client != m)
          throw std::invalid_argument("evaluate_action: Self decision must name the RC itself");
        if (!state.rc_idle[m])
          throw std::invalid_argument("evaluate_action: busy RC " + std::to_string(m) +
                                      " cannot train locally");
        PairCost p = self_cost(state, cfg, m);
        if (!p.link_ok)
          throw std::invalid_argument("evaluate_action: RC " + std::to_string(m) +
                                      " has a dead uplink");
        ev.queue_penalty += q.gamma[m] * (delta - 1.0);
        ev.participants.push_back(std::move(p));
        break;
      }
      case RcMode::ReferPartial:
      case RcMode::ReferFull: {
        PairCost p = referral_cost(state, cfg, m, d.client);
        if (p.mode != d.mode)
          throw std::invalid_argument("evaluate_action: referral mode does not match the "
                                      "learner's QoS activity");
        if (!p.link_ok)
          throw std::invalid_argument("evaluate_action: referral with a dead uplink (RC " +
                                      std::to_string(m) + " -> UnRC " +
                                      std::to_string(d.client) + ")");
        ev.queue_penalty += q.gamma[m] * (delta - 1.0);
        if (p.mode == RcMode::ReferPartial)
          ev.queue_penalty += q.z[d.client] * (cfg.r_min_c2c - p.c2c_rate);
        ev.participants.push_back(std::move(p));
        break;
      }
    }
  }
  return ev;
}

double FObjective::operator()(double theta) const {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("objective: theta must lie in (0,1)");
  if (ab.empty()) return c;
  double x = std::log(1.0 / theta);
  double worst = 0.0;
  for (const auto& [a, b] : ab) worst = std::max(worst, x * a + b);
  return v * worst / (1.0 - theta) + c;
}

FObjective make_objective(const ActionEvaluation& ev, const SimConfig& cfg) {
  FObjective f;
  f.v = cfg.v;
  f.c = ev.queue_penalty;
  f.ab.reserve(ev.participants.size());
  for (const PairCost& p : ev.participants) f.ab.emplace_back(p.a_coeff, p.b_coeff);
  return f;
}

double wset_at(const PairCost& p, double theta, const SimConfig& cfg) {
  return cost::wset(cfg.lambda_t, cfg.lambda_e, theta,
                    cost::epoch_cost(theta, p.cmp, p.com));
}

double objective_at(const ActionEvaluation& ev, double theta, const SimConfig& cfg) {
  return make_objective(ev, cfg)(theta);
}

double max_wset_at(const ActionEvaluation& ev, double theta, const SimConfig& cfg) {
  double worst = 0.0;
  for (const PairCost& p : ev.participants) worst = std::max(worst, wset_at(p, theta, cfg));
  return worst;
}

}  // namespace lref::eval
