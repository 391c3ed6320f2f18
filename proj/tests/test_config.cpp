#include <cmath>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "lref/config.hpp"

using namespace lref;

TEST_CASE("defaults are valid and self-consistent") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.delta() == doctest::Approx(10.0 / 70.0).epsilon(1e-15));
  // -174 dBm/Hz in watts
  CHECK(c.n0_w_hz() == doctest::Approx(3.9810717055349695e-21).epsilon(1e-12));
  CHECK(c.lambda_t + c.lambda_e == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("method names round-trip") {
  const Method all[] = {Method::Centralized, Method::Matching,   Method::GreedySghs,
                        Method::RandomSghs,  Method::SqosSghs,   Method::GreedyRandom,
                        Method::RandomRandom, Method::SqosRandom};
  for (Method m : all) CHECK(parse_method(method_name(m)) == m);
  CHECK_THROWS_AS(parse_method("not-a-method"), std::invalid_argument);
}

TEST_CASE("parse accepts key value lines with comments") {
  SimConfig c = parse_config(
      "# run setup\n"
      "num_rc 4\n"
      "num_unrc 12\n"
      "\n"
      "v 0.25   # trailing comment\n"
      "method centralized\n"
      "seed 99\n"
      "mobility_mean_speed 2.5\n"
      "ni 150\n");
  CHECK(c.num_rc == 4);
  CHECK(c.num_unrc == 12);
  CHECK(c.v == 0.25);
  CHECK(c.method == Method::Centralized);
  CHECK(c.seed == 99);
  CHECK(c.mobility.mean_speed == 2.5);
  CHECK(c.sghs.ni == 150);
  // untouched keys keep their defaults
  CHECK(c.bandwidth_hz == SimConfig{}.bandwidth_hz);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_config("no_such_key 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("num_rc 4\nnum_rc 5\n"), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(parse_config("num_rc\n"), std::invalid_argument);              // no value
  CHECK_THROWS_AS(parse_config("num_rc four\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("num_rc 4 5\n"), std::invalid_argument);          // extra token
  CHECK_THROWS_AS(parse_config("method sideways\n"), std::invalid_argument);

  // the error message carries the line number of the offence
  try {
    parse_config("num_rc 4\nbogus 1\n");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("dump and parse round-trip every field") {
  SimConfig c;
  c.num_rc = 3;
  c.num_unrc = 7;
  c.v = 0.017;
  c.lambda_t = 0.3;
  c.lambda_e = 0.7;
  c.trust_w_min = 0.4;
  c.seed = 123456789012345ULL;
  c.method = Method::SqosRandom;
  c.mobility.memory = 0.5;
  c.mobility.dir_std = 1.0 / 3.0;  // not exactly representable: exercises precision
  c.sghs.mu_hmcr = 0.9;
  c.sghs.theta_max = 0.99;
  c.rounds = 42;

  SimConfig back = parse_config(dump_config(c));
  CHECK(back.num_rc == c.num_rc);
  CHECK(back.num_unrc == c.num_unrc);
  CHECK(back.v == c.v);
  CHECK(back.lambda_t == c.lambda_t);
  CHECK(back.lambda_e == c.lambda_e);
  CHECK(back.trust_w_min == c.trust_w_min);
  CHECK(back.seed == c.seed);
  CHECK(back.method == c.method);
  CHECK(back.mobility.memory == c.mobility.memory);
  CHECK(back.mobility.dir_std == c.mobility.dir_std);
  CHECK(back.sghs.mu_hmcr == c.sghs.mu_hmcr);
  CHECK(back.sghs.theta_max == c.sghs.theta_max);
  CHECK(back.rounds == c.rounds);
  // and the full dump is a fixed point
  CHECK(dump_config(back) == dump_config(c));
}

TEST_CASE("config_items match the dump") {
  SimConfig c;
  auto items = config_items(c);
  CHECK(items.size() > 30);
  std::string joined;
  for (auto& [k, v] : items) joined += k + " " + v + "\n";
  CHECK(joined == dump_config(c));
}

TEST_CASE("validate flags out-of-range values") {
  auto broken = [](auto&& mutate) {
    SimConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.num_rc = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.num_unrc = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.bandwidth_hz = 0.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.lambda_t = 0.5; }).validate(),
                  std::invalid_argument);  // weights must sum to 1
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.zeta = 1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.idle_prob = 1.5; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.trust_w_min = -0.1; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.mobility.memory = 2.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.sghs.theta_min = 0.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.rounds = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.v = -1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.enum_cap = 0; }).validate(), std::invalid_argument);
}
