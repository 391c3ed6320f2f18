#pragma once
// Run configuration. Config files are plain "key value" text (one pair per
// line, '#' comments); keys mirror the struct field names exactly and unknown
// keys are an error so typos can't silently fall back to defaults.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lref/sghs.hpp"

namespace lref {

struct MobilityParams {
  double memory = 0.85;      // Gauss-Markov memory level alpha in [0,1]
  double mean_speed = 1.0;   // m/s
  double speed_std = 0.25;   // m/s, innovation std
  double dir_std = 0.25;     // rad, innovation std
};

enum class Method {
  Centralized,   // exhaustive joint-action enumeration + SGHS
  Matching,      // deferred-acceptance / SGHS alternation
  GreedySghs,    // max-trust pick, SGHS theta
  RandomSghs,    // uniform pick, SGHS theta
  SqosSghs,      // uniform pick among QoS-active, SGHS theta
  GreedyRandom,  // max-trust pick, uniform-random theta
  RandomRandom,
  SqosRandom,
};

Method parse_method(const std::string& name);          // throws on unknown name
const char* method_name(Method m);

struct SimConfig {
  // population
  int num_rc = 10;
  int num_unrc = 60;

  // radio
  double bandwidth_hz = 2e5;    // per-link uplink bandwidth B
  double carrier_hz = 2.3e9;    // informational (pathloss model is fixed)
  double p_rc_max_w = 0.5;
  double p_urc_max_w = 0.3;
  double n0_dbm_hz = -174.0;    // noise PSD
  double r_min_c2c = 1e5;       // QoS floor for reserved C2C links, bit/s

  // compute
  double f_rc = 2e8;    // cycles/s
  double f_urc = 2e7;
  double rho = 1e-27;   // effective switched capacitance
  double zeta = 3.0;    // energy exponent
  double q_mean = 1e4;  // Poisson mean of per-round sample counts
  double b_cycles = 10.0;  // cycles per sample per iteration
  double model_bits = 1e5; // upload size C_i
  double t_max_cmp_s = 0.1;  // hard per-iteration compute deadline

  // geometry
  double area_radius_m = 50.0;
  double s_max_m = 18.0;    // RC sensing radius
  double c2c_dist_m = 5.0;  // max C2C pairing distance
  MobilityParams mobility;

  // client behaviour
  double trust_link_prob = 0.3;
  double trust_w_min = 0.0;  // >0: weights ~ U[w_min,1] and one link forced to 1
  double idle_prob = 0.5;    // P(RC idle, i.e. free to train locally)
  double active_prob = 0.5;  // P(UnRC has own QoS traffic)

  // optimization
  double v = 1.0;            // Lyapunov penalty weight
  double lambda_t = 1.0 / 6.0;
  double lambda_e = 5.0 / 6.0;
  sghs::SghsParams sghs;
  std::int64_t enum_cap = 10'000'000;  // joint-action safety cap

  // run control
  int rounds = 300;
  std::uint64_t seed = 1;
  Method method = Method::Matching;

  double delta() const {  // fairness floor M/(M+N)
    return double(num_rc) / (num_rc + num_unrc);
  }
  double n0_w_hz() const { return std::pow(10.0, n0_dbm_hz / 10.0) * 1e-3; }

  void validate() const;  // throws std::invalid_argument on nonsense
};

// Parse "key value" text. Unknown key, duplicate key, or malformed value
// throws with the offending line.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& file);
std::string dump_config(const SimConfig& c);  // round-trips through parse_config

// (key, value) pairs in key order; same content as dump_config.
std::vector<std::pair<std::string, std::string>> config_items(const SimConfig& c);

}  // namespace lref
