#include "lref/central.hpp"

#include <algorithm>

#include "lref/rng.hpp"
#include "lref/sghs.hpp"

namespace lref::central {

std::int64_t FeasibleSets::joint_count(std::int64_t cap) const {
  std::int64_t total = 1;
  for (size_t m = 0; m < options.size(); ++m) {
    std::int64_t k = idle[m] ? 1 : std::int64_t(options[m].size()) + 1;
    if (total > cap / k) return cap + 1;  // saturate before overflowing
    total *= k;
  }
  return total;
}

FeasibleSets feasible_actions(const NetworkState& state, const NeighborSets& sets,
                              const SimConfig& cfg) {
  const int M = state.num_rc;
  FeasibleSets fs;
  fs.idle.resize(M);
  fs.self.resize(M);
  fs.options.resize(M);
  for (int m = 0; m < M; ++m) {
    fs.idle[m] = state.rc_idle[m];
    if (fs.idle[m]) {
      // an idle RC always trains locally; the deadline is assumed met for
      // the RC class of hardware, so no filtering here
      fs.self[m] = eval::self_cost(state, cfg, m);
      continue;
    }
    for (int n : sets.sensed[m]) {
      eval::PairCost p = eval::referral_cost(state, cfg, m, n);
      if (p.latency_ok && p.link_ok) fs.options[m].push_back({n, std::move(p)});
    }
  }
  return fs;
}

std::int64_t enumerate_joint_actions(const FeasibleSets& fs, std::int64_t cap,
                                     const std::function<void(const ActionPolicy&)>& visit) {
  if (cap < 1) throw std::invalid_argument("enumerate_joint_actions: cap must be >= 1");
  if (fs.joint_count(cap) > cap)
    throw EnumerationExplosion("joint action space exceeds the enumeration cap of " +
                               std::to_string(cap));
  const int M = int(fs.options.size());

  ActionPolicy a;
  a.rc.resize(M);
  // taken[n] guards one-to-one referrals during the descent
  int max_n = 0;
  for (int m = 0; m < M; ++m)
    for (const Candidate& c : fs.options[m]) max_n = std::max(max_n, c.unrc + 1);
  std::vector<std::uint8_t> taken(max_n, 0);

  std::int64_t count = 0;
  // iterative odometer would do, but the recursion depth is just M
  std::function<void(int)> descend = [&](int m) {
    if (m == M) {
      ++count;
      visit(a);
      return;
    }
    if (fs.idle[m]) {
      a.rc[m] = {RcMode::Self, m};
      descend(m + 1);
      return;
    }
    a.rc[m] = {RcMode::None, -1};
    descend(m + 1);
    for (const Candidate& c : fs.options[m]) {
      if (taken[c.unrc]) continue;
      a.rc[m] = {c.cost.mode, c.unrc};
      taken[c.unrc] = 1;
      descend(m + 1);
      taken[c.unrc] = 0;
    }
    a.rc[m] = {RcMode::None, -1};
  };
  descend(0);
  return count;
}

Selection centralized_select(const NetworkState& state, const NeighborSets& sets,
                             const lyap::VirtualQueues& q, const SimConfig& cfg) {
  FeasibleSets fs = feasible_actions(state, sets, cfg);

  Selection best;
  bool have_best = false;
  std::int64_t action_idx = -1;

  enumerate_joint_actions(fs, cfg.enum_cap, [&](const ActionPolicy& a) {
    ++action_idx;
    eval::ActionEvaluation ev = eval::evaluate_action(a, state, q, cfg);
    double theta = 0.5;
    double value;
    if (ev.participants.empty()) {
      value = ev.queue_penalty;  // nothing theta-dependent to optimize
    } else {
      eval::FObjective f = eval::make_objective(ev, cfg);
      auto rng = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Sghs,
                          std::uint64_t(action_idx));
      sghs::Result r = sghs::minimize(f, cfg.sghs, rng);
      theta = r.theta;
      value = r.value;
    }
    if (!have_best || value < best.objective) {
      best = {a, theta, value};
      have_best = true;
    }
  });

  // the all-none action is always enumerated, so a best always exists
  return best;
}

}  // namespace lref::central
