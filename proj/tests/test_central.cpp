#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "lref/central.hpp"
#include "lref/net.hpp"

using namespace lref;

namespace {

// 3 RCs, 4 UnRCs, engineered so every exclusion rule fires once:
// RC0 idle (forced self); RC1 can refer UnRC0 (active) and UnRC2 (inactive),
// while UnRC1 is unusable (active at trust 1 -> dead uplink); RC2's only
// trusted-in-range candidate misses the compute deadline, and UnRC0 is out of
// its sensing range.
struct FeasibilityWorld {
  SimConfig cfg;
  NetworkState st;
  NeighborSets sets;

  FeasibilityWorld() : cfg(testutil::tiny_config(3, 4)) {
    st = testutil::manual_state(cfg, {{0.0, 0.0},
                                      {10.0, 0.0},
                                      {-10.0, 0.0},
                                      {12.0, 0.0},
                                      {11.0, 0.0},
                                      {13.0, 0.0},
                                      {-12.0, 0.0}});
    st.trust(1, 0) = 0.5;
    st.trust(1, 1) = 1.0;
    st.trust(1, 2) = 0.96;  // row sum 2.46 -> pi ~ 0.39, deadline met
    st.trust(2, 0) = 0.98;
    st.trust(2, 3) = 0.02;  // row sum 1.0 -> pi = 0.02, one iteration takes 0.25 s
    st.unrc_active = {1, 1, 0, 0};
    st.c2c_partner = {1, 0, -1, -1};
    st.rc_idle = {1, 0, 0};
    sets = net::derive_neighbor_sets(st, cfg);
  }
};

// The smaller desk world shared with the lyap tests: both RCs busy, feasible
// options {UnRC0, UnRC2} for RC0 and {UnRC1} for RC1.
struct DeskWorld {
  SimConfig cfg;
  NetworkState st;
  NeighborSets sets;

  DeskWorld() : cfg(testutil::tiny_config(2, 3)) {
    st = testutil::manual_state(
        cfg, {{0.0, 0.0}, {4.0, 0.0}, {3.0, 0.0}, {6.0, 0.0}, {9.0, 0.0}});
    st.trust(0, 0) = 0.5;
    st.trust(0, 2) = 0.3;
    st.trust(1, 1) = 0.8;
    st.unrc_active = {1, 0, 0};
    st.c2c_partner = {1, 0, -1};
    sets = net::derive_neighbor_sets(st, cfg);
  }
};

// Exhaustive reference: every action x a dense theta grid.
double grid_best(const NetworkState& st, const NeighborSets& sets,
                 const lyap::VirtualQueues& q, const SimConfig& cfg,
                 ActionPolicy* best_action = nullptr) {
  auto fs = central::feasible_actions(st, sets, cfg);
  double best = std::numeric_limits<double>::infinity();
  const int K = 100000;
  central::enumerate_joint_actions(fs, cfg.enum_cap, [&](const ActionPolicy& a) {
    auto ev = eval::evaluate_action(a, st, q, cfg);
    double v;
    if (ev.participants.empty()) {
      v = ev.queue_penalty;
    } else {
      auto f = eval::make_objective(ev, cfg);
      v = std::numeric_limits<double>::infinity();
      for (int k = 0; k <= K; ++k) {
        double t = cfg.sghs.theta_min +
                   (cfg.sghs.theta_max - cfg.sghs.theta_min) * double(k) / K;
        v = std::min(v, f(t));
      }
    }
    if (v < best) {
      best = v;
      if (best_action) *best_action = a;
    }
  });
  return best;
}

}  // namespace

TEST_CASE("feasible action sets apply every exclusion rule") {
  FeasibilityWorld w;
  auto fs = central::feasible_actions(w.st, w.sets, w.cfg);

  REQUIRE(fs.idle.size() == 3);
  CHECK(fs.idle[0] == 1);
  CHECK(fs.options[0].empty());
  CHECK(fs.self[0].mode == RcMode::Self);
  CHECK(fs.self[0].link_ok);

  // RC1: UnRC0 and UnRC2 usable, UnRC1 dropped for its dead uplink
  REQUIRE(fs.options[1].size() == 2);
  CHECK(fs.options[1][0].unrc == 0);
  CHECK(fs.options[1][0].cost.mode == RcMode::ReferPartial);
  CHECK(fs.options[1][1].unrc == 2);
  CHECK(fs.options[1][1].cost.mode == RcMode::ReferFull);
  CHECK_FALSE(eval::referral_cost(w.st, w.cfg, 1, 1).link_ok);

  // RC2: UnRC3 misses the deadline, UnRC0 is out of range
  CHECK(fs.options[2].empty());
  CHECK_FALSE(eval::referral_cost(w.st, w.cfg, 2, 3).latency_ok);
  CHECK(std::find(w.sets.sensed[2].begin(), w.sets.sensed[2].end(), 0) ==
        w.sets.sensed[2].end());

  CHECK(fs.joint_count(1000) == 3);  // 1 (self) x 3 (none + 2) x 1 (none)
}

TEST_CASE("joint count saturates at the cap instead of overflowing") {
  central::FeasibleSets fs;
  const int M = 30;
  fs.idle.assign(M, 0);
  fs.self.resize(M);
  fs.options.resize(M);
  for (auto& o : fs.options) o.resize(9);  // 10 choices per RC -> 10^30 actions
  CHECK(fs.joint_count(10'000'000) == 10'000'001);

  int called = 0;
  CHECK_THROWS_AS(
      central::enumerate_joint_actions(fs, 10'000'000, [&](const ActionPolicy&) { ++called; }),
      central::EnumerationExplosion);
  CHECK(called == 0);  // nothing is visited when the cap trips

  CHECK_THROWS_AS(central::enumerate_joint_actions(fs, 0, [](const ActionPolicy&) {}),
                  std::invalid_argument);
}

TEST_CASE("enumeration order: none first, candidates ascending, RC0 outermost") {
  FeasibilityWorld w;
  auto fs = central::feasible_actions(w.st, w.sets, w.cfg);

  std::vector<ActionPolicy> seen;
  auto count = central::enumerate_joint_actions(
      fs, 1000, [&](const ActionPolicy& a) { seen.push_back(a); });
  CHECK(count == 3);
  REQUIRE(seen.size() == 3);

  ActionPolicy a0, a1, a2;
  a0.rc = {{RcMode::Self, 0}, {RcMode::None, -1}, {RcMode::None, -1}};
  a1.rc = {{RcMode::Self, 0}, {RcMode::ReferPartial, 0}, {RcMode::None, -1}};
  a2.rc = {{RcMode::Self, 0}, {RcMode::ReferFull, 2}, {RcMode::None, -1}};
  CHECK(seen[0] == a0);
  CHECK(seen[1] == a1);
  CHECK(seen[2] == a2);
}

TEST_CASE("enumeration matches an independent odometer on a random world") {
  SimConfig cfg = testutil::tiny_config(3, 6);
  cfg.trust_link_prob = 0.9;
  cfg.s_max_m = 100.0;  // everything in range: conflicts guaranteed
  cfg.seed = 77;
  NetworkState st = net::init_topology(cfg);
  st.rc_idle = {0, 0, 0};
  NeighborSets sets = net::derive_neighbor_sets(st, cfg);
  auto fs = central::feasible_actions(st, sets, cfg);
  REQUIRE(fs.options[0].size() > 1);  // world is dense enough to be interesting

  // reference: nested loops, -1 = none, indices into the candidate lists
  std::vector<ActionPolicy> expect;
  for (int i0 = -1; i0 < int(fs.options[0].size()); ++i0)
    for (int i1 = -1; i1 < int(fs.options[1].size()); ++i1)
      for (int i2 = -1; i2 < int(fs.options[2].size()); ++i2) {
        ActionPolicy a;
        a.rc.resize(3, {RcMode::None, -1});
        int idx[3] = {i0, i1, i2};
        for (int m = 0; m < 3; ++m)
          if (idx[m] >= 0) {
            const auto& c = fs.options[m][idx[m]];
            a.rc[m] = {c.cost.mode, c.unrc};
          }
        if (a.one_to_one()) expect.push_back(a);
      }

  std::vector<ActionPolicy> seen;
  auto count = central::enumerate_joint_actions(
      fs, cfg.enum_cap, [&](const ActionPolicy& a) { seen.push_back(a); });
  CHECK(count == std::int64_t(expect.size()));
  CHECK(seen == expect);
  CHECK(seen.size() < size_t((fs.options[0].size() + 1) * (fs.options[1].size() + 1) *
                             (fs.options[2].size() + 1)));  // some collide
}

TEST_CASE("centralized selection matches the exhaustive grid reference") {
  DeskWorld w;
  lyap::VirtualQueues q{{5.0, 5.0}, {0.0, 0.0, 0.0}};

  ActionPolicy best_action;
  double ref = grid_best(w.st, w.sets, q, w.cfg, &best_action);
  Selection sel = central::centralized_select(w.st, w.sets, q, w.cfg);

  CHECK(std::abs(sel.objective - ref) <= 1e-5 * std::max(1.0, std::abs(ref)));
  CHECK(sel.action == best_action);  // wide gaps in this world: argmin is unique
  CHECK(sel.action.one_to_one());
  CHECK(sel.theta > w.cfg.sghs.theta_min);
  CHECK(sel.theta < w.cfg.sghs.theta_max);

  // the reported objective is reproducible from the action and theta
  CHECK(lyap::drift_penalty(sel.action, sel.theta, w.st, q, w.cfg) ==
        doctest::Approx(sel.objective).epsilon(1e-12));

  // with queues at zero nothing pushes the busy RCs to field anyone: the
  // empty action (value 0) is optimal and gets picked
  lyap::VirtualQueues zq = lyap::VirtualQueues::zeros(2, 3);
  Selection idle_sel = central::centralized_select(w.st, w.sets, zq, w.cfg);
  CHECK(idle_sel.action.participant_count() == 0);
  CHECK(idle_sel.objective == 0.0);
}

TEST_CASE("idle RCs always train locally") {
  DeskWorld w;
  w.st.rc_idle = {1, 1};
  w.sets = net::derive_neighbor_sets(w.st, w.cfg);
  lyap::VirtualQueues q{{1.0, 1.0}, {0.0, 0.0, 0.0}};

  Selection sel = central::centralized_select(w.st, w.sets, q, w.cfg);
  CHECK(sel.action.rc[0] == RcDecision{RcMode::Self, 0});
  CHECK(sel.action.rc[1] == RcDecision{RcMode::Self, 1});

  // only one joint action exists, so the value must equal its grid minimum
  double ref = grid_best(w.st, w.sets, q, w.cfg);
  CHECK(std::abs(sel.objective - ref) <= 1e-5 * std::max(1.0, std::abs(ref)));
}

TEST_CASE("centralized selection is deterministic") {
  DeskWorld w;
  lyap::VirtualQueues q{{2.0, 1.0}, {1.0, 0.0, 0.0}};
  Selection a = central::centralized_select(w.st, w.sets, q, w.cfg);
  Selection b = central::centralized_select(w.st, w.sets, q, w.cfg);
  CHECK(a.action == b.action);
  CHECK(a.theta == b.theta);
  CHECK(a.objective == b.objective);
}
