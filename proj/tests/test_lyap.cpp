#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "lref/evaluate.hpp"
#include "lref/lyap.hpp"

using namespace lref;

namespace {

// The desk world used throughout: 2 RCs, 3 UnRCs on a line, explicit trust.
// RC0 refers UnRC0 (QoS-active, paired with UnRC1), RC1 refers UnRC1
// (inactive). UnRC2 only pads the population.
struct DeskWorld {
  SimConfig cfg;
  NetworkState st;

  DeskWorld() : cfg(testutil::tiny_config(2, 3)) {
    st = testutil::manual_state(
        cfg, {{0.0, 0.0}, {4.0, 0.0}, {3.0, 0.0}, {6.0, 0.0}, {9.0, 0.0}});
    st.trust(0, 0) = 0.5;
    st.trust(0, 2) = 0.3;  // row sum 0.8
    st.trust(1, 1) = 0.8;  // row sum 0.8
    st.unrc_active = {1, 0, 0};
    st.c2c_partner = {1, 0, -1};
  }
};

// Weighted epoch cost recomposed from scratch with std:: math only.
double wset_oracle(const SimConfig& cfg, double theta, double t_cmp, double e_cmp,
                   double t_com, double e_com) {
  double iters = std::log(1.0 / theta);
  double t = iters * t_cmp + t_com, e = iters * e_cmp + e_com;
  return (cfg.lambda_t * t + cfg.lambda_e * e) / (1.0 - theta);
}

}  // namespace

TEST_CASE("queue update rules") {
  // participation debt grows by delta when idle, shrinks by 1 - delta when fielding
  CHECK(lyap::update_gamma(1.0, 1.0 / 7.0, 0) == doctest::Approx(8.0 / 7.0).epsilon(1e-15));
  CHECK(lyap::update_gamma(5.0, 0.5, 1) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(lyap::update_gamma(0.1, 1.0 / 7.0, 1) == 0.0);  // floored at zero
  CHECK(lyap::update_gamma(0.0, 0.25, 0) == 0.25);

  // QoS debt moves only when the learner was fielded while active
  CHECK(lyap::update_z(3.0, false, 1e5, 0.0) == 3.0);
  CHECK(lyap::update_z(0.0, true, 1e5, 3e4) == doctest::Approx(7e4).epsilon(1e-15));
  CHECK(lyap::update_z(1.0, true, 1e5, 2e5) == 0.0);

  // the closed forms match a direct max-with-zero recomputation bit for bit
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 10000; ++i) {
    double q = u(g), d = u(g) / 2.0, z = u(g) * 1e5, rm = u(g) * 1e5, r = u(g) * 1e5;
    int alpha = i % 2;
    CHECK(lyap::update_gamma(q, d, alpha) == std::max(q + d - alpha, 0.0));
    CHECK(lyap::update_z(z, true, rm, r) == std::max(z + (rm - r), 0.0));
  }
}

TEST_CASE("constraint residuals") {
  SUBCASE("two-round desk check") {
    lyap::SelectionHistory h;
    h.rounds.push_back({{1}, {1}, {3e5}});
    h.rounds.push_back({{0}, {0}, {9e9}});  // rate ignored: flag is down
    auto res = lyap::constraint_residuals(h, 1.0 / 7.0, 1e5);
    REQUIRE(res.fairness.size() == 1);
    CHECK(res.fairness[0] == doctest::Approx(0.5 - 1.0 / 7.0).epsilon(1e-15));
    REQUIRE(res.qos.size() == 1);
    REQUIRE(res.qos[0].has_value());
    CHECK(*res.qos[0] == doctest::Approx(2e5).epsilon(1e-15));
  }

  SUBCASE("QoS averages only over recommended-active rounds") {
    lyap::SelectionHistory h;
    h.rounds.push_back({{1}, {1}, {1e5}});
    h.rounds.push_back({{1}, {0}, {0.0}});
    h.rounds.push_back({{0}, {1}, {2e5}});
    auto res = lyap::constraint_residuals(h, 0.5, 1e5);
    CHECK(res.fairness[0] == doctest::Approx(2.0 / 3.0 - 0.5).epsilon(1e-15));
    CHECK(*res.qos[0] == doctest::Approx(1.5e5 - 1e5).epsilon(1e-15));
  }

  SUBCASE("never recommended-active leaves the residual empty") {
    lyap::SelectionHistory h;
    h.rounds.push_back({{0, 1}, {0, 0}, {0.0, 0.0}});
    auto res = lyap::constraint_residuals(h, 0.25, 1e5);
    CHECK(!res.qos[0].has_value());
    CHECK(!res.qos[1].has_value());
    CHECK(res.fairness[1] == doctest::Approx(0.75).epsilon(1e-15));
  }

  SUBCASE("bad histories throw") {
    CHECK_THROWS_AS(lyap::constraint_residuals({}, 0.5, 1e5), std::invalid_argument);
    lyap::SelectionHistory ragged;
    ragged.rounds.push_back({{1}, {1}, {1e5}});
    ragged.rounds.push_back({{1, 0}, {1}, {1e5}});
    CHECK_THROWS_AS(lyap::constraint_residuals(ragged, 0.5, 1e5), std::invalid_argument);
  }
}

TEST_CASE("referral pair costs match a from-scratch recomputation") {
  DeskWorld dw;
  const SimConfig& cfg = dw.cfg;
  const double n0 = cfg.n0_w_hz(), B = cfg.bandwidth_hz;

  SUBCASE("partial referral (active learner)") {
    eval::PairCost p = eval::referral_cost(dw.st, cfg, 0, 0);
    CHECK(p.mode == RcMode::ReferPartial);
    CHECK(p.rc == 0);
    CHECK(p.client == 2);
    CHECK(p.trust == 0.5);
    CHECK(p.latency_ok);
    CHECK(p.link_ok);

    // compute: pi = w = 0.5, f_eff = 1e7
    double t_cmp = 1e4 * 10.0 / 1e7;
    double e_cmp = 1e-27 * 1e5 * 1e14;
    CHECK(p.cmp.t_cmp == doctest::Approx(t_cmp).epsilon(1e-12));
    CHECK(p.cmp.e_cmp == doctest::Approx(e_cmp).epsilon(1e-12));

    // upload: xi = 0.5, gain = 1e-3/27 at 3 m
    double h = 1e-3 / 27.0;
    double rate = 0.5 * B * std::log2(1.0 + h * 0.5 * 0.3 / (n0 * 0.5 * B));
    CHECK(p.com.t_com == doctest::Approx(1e5 / rate).epsilon(1e-12));
    CHECK(p.com.e_com == doctest::Approx(0.5 * 0.3 * (1e5 / rate)).epsilon(1e-12));

    // reserved C2C link to its partner 3 m away
    double g = 1e-3 / 27.0;
    double r_c2c = 0.5 * B * std::log2(1.0 + g * 0.5 * 0.3 / (n0 * 0.5 * B));
    CHECK(p.c2c_rate == doctest::Approx(r_c2c).epsilon(1e-12));

    CHECK(p.a_coeff ==
          doctest::Approx(cfg.lambda_t * t_cmp + cfg.lambda_e * e_cmp).epsilon(1e-12));
  }

  SUBCASE("full referral (inactive learner)") {
    eval::PairCost p = eval::referral_cost(dw.st, cfg, 1, 1);
    CHECK(p.mode == RcMode::ReferFull);
    CHECK(p.c2c_rate == 0.0);  // no reserved link for an inactive learner

    // pi = 0.8/0.8 = 1: full CPU, full power over the full band
    CHECK(p.cmp.t_cmp == doctest::Approx(1e5 / 2e7).epsilon(1e-12));
    double h = 1e-3 / 216.0;  // 6 m
    double rate = B * std::log2(1.0 + h * 0.3 / (n0 * B));
    CHECK(p.com.t_com == doctest::Approx(1e5 / rate).epsilon(1e-12));
    CHECK(p.com.e_com == doctest::Approx(0.3 * (1e5 / rate)).epsilon(1e-12));
  }

  SUBCASE("self learning") {
    dw.st.rc_idle = {1, 0};
    eval::PairCost p = eval::self_cost(dw.st, cfg, 0);
    CHECK(p.mode == RcMode::Self);
    CHECK(p.client == 0);
    CHECK(p.trust == 0.0);
    // RC0 sits on the origin: distance floored to 1 m
    double rate = B * std::log2(1.0 + 1e-3 * 0.5 / (n0 * B));
    CHECK(p.com.t_com == doctest::Approx(1e5 / rate).epsilon(1e-12));
    CHECK(p.cmp.t_cmp == doctest::Approx(1e5 / 2e8).epsilon(1e-12));
  }

  CHECK_THROWS_AS(eval::referral_cost(dw.st, cfg, 0, 1), std::invalid_argument);  // no trust
  CHECK_THROWS_AS(eval::referral_cost(dw.st, cfg, 0, 5), std::invalid_argument);  // bad index
}

TEST_CASE("drift-plus-penalty") {
  DeskWorld dw;
  const SimConfig& cfg = dw.cfg;
  const double delta = cfg.delta();  // 2/5

  ActionPolicy act;
  act.rc = {{RcMode::ReferPartial, 0}, {RcMode::ReferFull, 1}};
  lyap::VirtualQueues q{{2.0, 3.0}, {4.0, 0.0, 0.0}};

  SUBCASE("term-by-term oracle") {
    double theta = 0.6;
    eval::PairCost p0 = eval::referral_cost(dw.st, cfg, 0, 0);
    eval::PairCost p1 = eval::referral_cost(dw.st, cfg, 1, 1);
    double w0 = wset_oracle(cfg, theta, p0.cmp.t_cmp, p0.cmp.e_cmp, p0.com.t_com, p0.com.e_com);
    double w1 = wset_oracle(cfg, theta, p1.cmp.t_cmp, p1.cmp.e_cmp, p1.com.t_com, p1.com.e_com);
    double queue = 2.0 * (delta - 1.0) + 3.0 * (delta - 1.0) +
                   4.0 * (cfg.r_min_c2c - p0.c2c_rate);
    double want = cfg.v * std::max(w0, w1) + queue;
    CHECK(lyap::drift_penalty(act, theta, dw.st, q, cfg) ==
          doctest::Approx(want).epsilon(1e-12));

    // idle RCs pay gamma * delta instead
    ActionPolicy half;
    half.rc = {{RcMode::ReferPartial, 0}, {RcMode::None, -1}};
    double queue_half = 2.0 * (delta - 1.0) + 3.0 * delta + 4.0 * (cfg.r_min_c2c - p0.c2c_rate);
    CHECK(lyap::drift_penalty(half, theta, dw.st, q, cfg) ==
          doctest::Approx(cfg.v * w0 + queue_half).epsilon(1e-12));
  }

  SUBCASE("V scales only the efficiency part") {
    SimConfig boosted = cfg;
    boosted.v = 50.0;
    double base = lyap::drift_penalty(act, 0.5, dw.st, q, cfg);
    double big = lyap::drift_penalty(act, 0.5, dw.st, q, boosted);
    lyap::VirtualQueues zq = lyap::VirtualQueues::zeros(2, 3);
    double eff = lyap::drift_penalty(act, 0.5, dw.st, zq, cfg);  // pure V * max wset
    CHECK(big - base == doctest::Approx(49.0 * eff).epsilon(1e-9));
  }

  SUBCASE("raising one fairness queue shifts the value by h*(delta-1)") {
    lyap::VirtualQueues bumped = q;
    bumped.gamma[0] += 10.0;
    double before = lyap::drift_penalty(act, 0.5, dw.st, q, cfg);
    double after = lyap::drift_penalty(act, 0.5, dw.st, bumped, cfg);
    CHECK(after - before == doctest::Approx(10.0 * (delta - 1.0)).epsilon(1e-9));
  }

  SUBCASE("an action fielding nobody is rejected") {
    ActionPolicy none;
    none.rc = {{RcMode::None, -1}, {RcMode::None, -1}};
    CHECK_THROWS_AS(lyap::drift_penalty(none, 0.5, dw.st, q, cfg), std::invalid_argument);
  }
}

TEST_CASE("action evaluation rejects malformed actions") {
  DeskWorld dw;
  lyap::VirtualQueues q = lyap::VirtualQueues::zeros(2, 3);

  ActionPolicy wrong_size;
  wrong_size.rc = {{RcMode::None, -1}};
  CHECK_THROWS_AS(eval::evaluate_action(wrong_size, dw.st, q, dw.cfg), std::invalid_argument);

  // two RCs referring the same learner
  dw.st.trust(1, 0) = 0.9;
  ActionPolicy dup;
  dup.rc = {{RcMode::ReferPartial, 0}, {RcMode::ReferPartial, 0}};
  CHECK_THROWS_AS(eval::evaluate_action(dup, dw.st, q, dw.cfg), std::invalid_argument);

  // Self must name the RC itself, and the RC must be idle
  ActionPolicy wrong_self;
  wrong_self.rc = {{RcMode::Self, 1}, {RcMode::None, -1}};
  CHECK_THROWS_AS(eval::evaluate_action(wrong_self, dw.st, q, dw.cfg), std::invalid_argument);
  ActionPolicy busy_self;
  busy_self.rc = {{RcMode::Self, 0}, {RcMode::None, -1}};
  dw.st.rc_idle = {0, 0};
  CHECK_THROWS_AS(eval::evaluate_action(busy_self, dw.st, q, dw.cfg), std::invalid_argument);

  // referral mode must match the learner's QoS activity
  ActionPolicy wrong_mode;
  wrong_mode.rc = {{RcMode::ReferFull, 0}, {RcMode::None, -1}};
  CHECK_THROWS_AS(eval::evaluate_action(wrong_mode, dw.st, q, dw.cfg), std::invalid_argument);

  // a dead uplink (active learner reserving everything) is unselectable
  dw.st.trust(0, 0) = 1.0;
  ActionPolicy dead;
  dead.rc = {{RcMode::ReferPartial, 0}, {RcMode::None, -1}};
  CHECK_THROWS_AS(eval::evaluate_action(dead, dw.st, q, dw.cfg), std::invalid_argument);
}

TEST_CASE("objective helpers agree with each other") {
  DeskWorld dw;
  lyap::VirtualQueues q{{1.0, 0.5}, {0.2, 0.0, 0.0}};
  ActionPolicy act;
  act.rc = {{RcMode::ReferPartial, 0}, {RcMode::ReferFull, 1}};
  auto ev = eval::evaluate_action(act, dw.st, q, dw.cfg);
  REQUIRE(ev.participants.size() == 2);

  for (double theta : {0.1, 0.5, 0.9}) {
    double f = eval::objective_at(ev, theta, dw.cfg);
    double via_parts = dw.cfg.v * eval::max_wset_at(ev, theta, dw.cfg) + ev.queue_penalty;
    CHECK(f == doctest::Approx(via_parts).epsilon(1e-12));
    CHECK(eval::make_objective(ev, dw.cfg)(theta) == f);
  }

  // empty action: objective collapses to the queue penalty
  ActionPolicy none;
  none.rc = {{RcMode::None, -1}, {RcMode::None, -1}};
  auto empty = eval::evaluate_action(none, dw.st, q, dw.cfg);
  CHECK(empty.participants.empty());
  CHECK(eval::objective_at(empty, 0.5, dw.cfg) == empty.queue_penalty);
  CHECK(empty.queue_penalty ==
        doctest::Approx((1.0 + 0.5) * dw.cfg.delta()).epsilon(1e-12));
}
