#include "lref/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "lref/rng.hpp"
#include "lref/sghs.hpp"

namespace lref::baselines {

BaselineKind kind_of(Method method) {
  switch (method) {
    case Method::GreedySghs: return {Picker::Greedy, ThetaRule::Sghs};
    case Method::RandomSghs: return {Picker::Random, ThetaRule::Sghs};
    case Method::SqosSghs: return {Picker::Sqos, ThetaRule::Sghs};
    case Method::GreedyRandom: return {Picker::Greedy, ThetaRule::RandomTheta};
    case Method::RandomRandom: return {Picker::Random, ThetaRule::RandomTheta};
    case Method::SqosRandom: return {Picker::Sqos, ThetaRule::RandomTheta};
    default: throw std::invalid_argument("kind_of: not a baseline method");
  }
}

Selection baseline_select(BaselineKind kind, const NetworkState& state,
                          const NeighborSets& sets, const lyap::VirtualQueues& q,
                          const SimConfig& cfg) {
  central::FeasibleSets fs = central::feasible_actions(state, sets, cfg);
  const int M = state.num_rc;

  auto pick_rng = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Baseline, 0);

  ActionPolicy action;
  action.rc.resize(M);
  std::vector<std::uint8_t> taken(state.num_unrc, 0);
  for (int m = 0; m < M; ++m) {
    if (fs.idle[m]) {
      action.rc[m] = {RcMode::Self, m};
      continue;
    }
    // conflict rule: earlier RCs claim first, later ones see what is left
    std::vector<const central::Candidate*> avail;
    for (const central::Candidate& c : fs.options[m]) {
      if (taken[c.unrc]) continue;
      if (kind.picker == Picker::Sqos && !state.unrc_active[c.unrc]) continue;
      avail.push_back(&c);
    }
    if (avail.empty()) {
      action.rc[m] = {RcMode::None, -1};
      continue;
    }
    const central::Candidate* choice = nullptr;
    switch (kind.picker) {
      case Picker::Greedy:
        // highest trust weight; candidate order breaks ties by UnRC id
        for (const auto* c : avail)
          if (!choice || c->cost.trust > choice->cost.trust) choice = c;
        break;
      case Picker::Random:
      case Picker::Sqos:
        choice = avail[std::uniform_int_distribution<size_t>(0, avail.size() - 1)(pick_rng)];
        break;
    }
    taken[choice->unrc] = 1;
    action.rc[m] = {choice->cost.mode, choice->unrc};
  }

  eval::ActionEvaluation ev = eval::evaluate_action(action, state, q, cfg);
  double theta = 0.5;
  double objective;
  if (ev.participants.empty()) {
    objective = ev.queue_penalty;
  } else if (kind.theta_rule == ThetaRule::Sghs) {
    eval::FObjective f = eval::make_objective(ev, cfg);
    auto rng = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Sghs, 0);
    sghs::Result r = sghs::minimize(f, cfg.sghs, rng);
    theta = r.theta;
    objective = r.value;
  } else {
    auto rng = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Baseline, 1);
    theta = std::uniform_real_distribution<double>(cfg.sghs.theta_min,
                                                   cfg.sghs.theta_max)(rng);
    objective = eval::objective_at(ev, theta, cfg);
  }
  return {std::move(action), theta, objective};
}

}  // namespace lref::baselines
