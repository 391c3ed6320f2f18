#include "lref/match.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lref/rng.hpp"
#include "lref/sghs.hpp"

namespace lref::match {

namespace {

// -(V * wset(theta) + C_m) for a pair already reduced to coefficients.
double pair_utility(const eval::PairCost& p, double c_m, double theta, const SimConfig& cfg) {
  double x = std::log(1.0 / theta);
  return -(cfg.v * (x * p.a_coeff + p.b_coeff) / (1.0 - theta) + c_m);
}

}  // namespace

double utility(const NetworkState& state, const NeighborSets& sets,
               const lyap::VirtualQueues& q, const SimConfig& cfg, int m, int n,
               bool self, double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("utility: theta must lie in (0,1)");
  const double delta = cfg.delta();

  if (self) {
    eval::PairCost p = eval::self_cost(state, cfg, m);
    if (!p.link_ok) return kUnacceptable;
    return pair_utility(p, q.gamma[m] * (delta - 1.0), theta, cfg);
  }

  // candidate must actually be sensed by m
  const auto& sensed = sets.sensed[m];
  if (!std::binary_search(sensed.begin(), sensed.end(), n)) return kUnacceptable;

  eval::PairCost p = eval::referral_cost(state, cfg, m, n);
  if (!p.latency_ok || !p.link_ok) return kUnacceptable;

  double c_m = q.gamma[m] * (delta - 1.0);
  if (p.mode == RcMode::ReferPartial) c_m += q.z[n] * (cfg.r_min_c2c - p.c2c_rate);
  return pair_utility(p, c_m, theta, cfg);
}

Preferences build_preferences(const NetworkState& state, const NeighborSets& sets,
                              const lyap::VirtualQueues& q, const SimConfig& cfg,
                              double theta) {
  const int M = state.num_rc, N = state.num_unrc;
  Preferences prefs;
  prefs.rc.resize(M);
  prefs.unrc.resize(N);
  prefs.u.assign(M, std::vector<double>(N, kUnacceptable));
  prefs.idle.resize(M);

  auto by_utility_then_id = [](const PreferenceEntry& a, const PreferenceEntry& b) {
    return a.u != b.u ? a.u > b.u : a.partner < b.partner;
  };

  for (int m = 0; m < M; ++m) {
    prefs.rc[m].owner = m;
    prefs.idle[m] = state.rc_idle[m];
    if (prefs.idle[m]) continue;  // fixed to self, sits out the game
    for (int n : sets.sensed[m]) {
      double u = utility(state, sets, q, cfg, m, n, false, theta);
      if (u == kUnacceptable) continue;
      prefs.u[m][n] = u;
      prefs.rc[m].ranked.push_back({n, u});
    }
    std::sort(prefs.rc[m].ranked.begin(), prefs.rc[m].ranked.end(), by_utility_then_id);
  }

  for (int n = 0; n < N; ++n) {
    prefs.unrc[n].owner = n;
    for (int m : sets.reach[n]) {
      if (prefs.idle[m] || prefs.u[m][n] == kUnacceptable) continue;
      prefs.unrc[n].ranked.push_back({m, prefs.u[m][n]});
    }
    std::sort(prefs.unrc[n].ranked.begin(), prefs.unrc[n].ranked.end(), by_utility_then_id);
  }
  return prefs;
}

Matching deferred_acceptance(const Preferences& prefs) {
  const int M = int(prefs.rc.size());
  const int N = int(prefs.unrc.size());

  Matching mat;
  mat.rc_partner.assign(M, -1);
  mat.unrc_partner.assign(N, -1);

  std::vector<size_t> next(M, 0);  // next list position each RC proposes to
  // an UnRC prefers m over m2 if utility is higher, ties to the lower id
  auto prefers = [&](int n, int m, int m2) {
    double um = prefs.u[m][n], um2 = prefs.u[m2][n];
    return um != um2 ? um > um2 : m < m2;
  };

  auto held_min = [&] {
    double mn = std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n)
      if (mat.unrc_partner[n] != -1)
        mn = std::min(mn, -prefs.u[mat.unrc_partner[n]][n]);
    return mn;
  };

  bool moved = true;
  while (moved) {
    moved = false;
    // proposal wave: every free RC with list entries left proposes once
    std::vector<std::vector<int>> proposals(N);
    for (int m = 0; m < M; ++m) {
      if (prefs.idle[m] || mat.rc_partner[m] != -1) continue;
      if (next[m] >= prefs.rc[m].ranked.size()) continue;
      int n = prefs.rc[m].ranked[next[m]].partner;
      ++next[m];
      ++mat.proposals;
      proposals[n].push_back(m);
      moved = true;
    }
    if (!moved) break;
    // each UnRC keeps the best of (current hold, new proposers)
    for (int n = 0; n < N; ++n) {
      if (proposals[n].empty()) continue;
      int best = mat.unrc_partner[n];
      for (int m : proposals[n])
        if (best == -1 || prefers(n, m, best)) best = m;
      if (best != mat.unrc_partner[n]) {
        if (mat.unrc_partner[n] != -1) mat.rc_partner[mat.unrc_partner[n]] = -1;
        mat.unrc_partner[n] = best;
        mat.rc_partner[best] = n;
      }
    }
    mat.min_neg_utility_trace.push_back(held_min());
  }
  return mat;
}

StabilityResult is_stable(const Matching& mat, const Preferences& prefs) {
  const int M = int(prefs.rc.size());
  const int N = int(prefs.unrc.size());
  for (int m = 0; m < M; ++m) {
    if (prefs.idle[m]) continue;
    for (int n = 0; n < N; ++n) {
      double u = prefs.u[m][n];
      if (u == kUnacceptable) continue;
      // m strictly prefers n over what it has
      int cur = mat.rc_partner[m];
      bool m_wants = cur == -1 || u > prefs.u[m][cur];
      if (!m_wants) continue;
      // n strictly prefers m over whom it holds
      int holder = mat.unrc_partner[n];
      bool n_wants = holder == -1 || u > prefs.u[holder][n];
      if (n_wants) return {false, m, n};
    }
  }
  return {true, -1, -1};
}

DistResult distributed_select(const NetworkState& state, const NeighborSets& sets,
                              const lyap::VirtualQueues& q, const SimConfig& cfg) {
  constexpr int kMaxOuter = 10;
  constexpr double kRelTol = 1e-6;

  DistResult out;
  double theta = 0.5;  // alternation start
  double prev_objective = std::numeric_limits<double>::quiet_NaN();

  for (int r = 1; r <= kMaxOuter; ++r) {
    out.outer_iters = r;

    // Stage I: stable matching under the incumbent theta
    Preferences prefs = build_preferences(state, sets, q, cfg, theta);
    Matching mat = deferred_acceptance(prefs);

    // induced joint action: idle -> self, matched -> referral, rest sit out
    ActionPolicy action;
    action.rc.resize(state.num_rc);
    for (int m = 0; m < state.num_rc; ++m) {
      if (prefs.idle[m]) {
        action.rc[m] = {RcMode::Self, m};
      } else if (int n = mat.rc_partner[m]; n != -1) {
        action.rc[m] = {state.unrc_active[n] ? RcMode::ReferPartial : RcMode::ReferFull, n};
      } else {
        action.rc[m] = {RcMode::None, -1};
      }
    }

    if (!out.steps.empty() && mat == out.steps.back().matching) {
      // fixed point: the same matching re-optimized from the incumbent theta
      // cannot move the objective, stop here
      out.converged = true;
      --out.outer_iters;
      break;
    }

    eval::ActionEvaluation ev = eval::evaluate_action(action, state, q, cfg);
    AlternationStep step;
    step.matching = std::move(mat);

    double objective;
    if (ev.participants.empty()) {
      // nobody matched and nobody idle: no-op round, nothing to optimize
      objective = ev.queue_penalty;
      step.f_before = step.f_after = objective;
      out.steps.push_back(std::move(step));
      out.selection = {std::move(action), theta, objective};
      out.converged = true;
      break;
    }

    // Stage II: theta search warm-started at the incumbent, so the objective
    // can only improve on f_before
    eval::FObjective f = eval::make_objective(ev, cfg);
    step.f_before = f(theta);
    auto rng = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Sghs, std::uint64_t(r));
    double warm[1] = {theta};
    sghs::Result sr = sghs::minimize(f, cfg.sghs, rng, warm);
    theta = sr.theta;
    objective = sr.value;
    step.f_after = sr.value;
    out.steps.push_back(std::move(step));

    out.selection = {std::move(action), theta, objective};
    if (!std::isnan(prev_objective) &&
        std::abs(objective - prev_objective) <= kRelTol * std::max(1.0, std::abs(prev_objective))) {
      out.converged = true;
      break;
    }
    prev_objective = objective;
  }
  return out;
}

}  // namespace lref::match
