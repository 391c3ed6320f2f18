#include "lref/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lref/rng.hpp"

namespace lref::net {

namespace {

// 30 dB attenuation at 1 m, pathloss exponent 3, distance floor 1 m.
double pathloss_gain(double d_m) {
  double d = std::max(d_m, 1.0);
  return 1e-3 / (d * d * d);
}

double draw_trust_weight(std::mt19937_64& g, const SimConfig& cfg) {
  if (cfg.trust_w_min > 0.0)
    return std::uniform_real_distribution<double>(cfg.trust_w_min, 1.0)(g);
  return uniform_pos_unit(g);
}

// Reflect p (and the headings) back into the disc of radius R around the
// origin. Mirrors the radial overshoot and flips the radial velocity
// component, so repeated steps cannot walk a client outside.
void reflect_into_disc(Client& c, double R) {
  double r = std::hypot(c.pos.x, c.pos.y);
  if (r <= R || r == 0.0) return;
  double nx = c.pos.x / r, ny = c.pos.y / r;  // outward normal
  double back = std::max(2.0 * R - r, 0.0);   // mirrored radius
  c.pos.x = nx * back;
  c.pos.y = ny * back;
  auto flip = [&](double ang) {
    double vx = std::cos(ang), vy = std::sin(ang);
    double vn = vx * nx + vy * ny;
    return std::atan2(vy - 2.0 * vn * ny, vx - 2.0 * vn * nx);
  };
  c.dir = flip(c.dir);
  c.mean_dir = flip(c.mean_dir);
}

}  // namespace

NetworkState init_topology(const SimConfig& cfg) {
  cfg.validate();
  const int M = cfg.num_rc, N = cfg.num_unrc;

  NetworkState st;
  st.round = 0;
  st.num_rc = M;
  st.num_unrc = N;
  st.clients.resize(size_t(M) + N);

  auto topo = make_rng(cfg.seed, 0, Stream::Topology);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < M + N; ++i) {
    Client& c = st.clients[i];
    c.id = i;
    c.kind = i < M ? ClientKind::Rc : ClientKind::Unrc;
    double r = cfg.area_radius_m * std::sqrt(unit(topo));
    double phi = 2.0 * std::numbers::pi * unit(topo);
    c.pos = {r * std::cos(phi), r * std::sin(phi)};
    c.speed = cfg.mobility.mean_speed;
    c.dir = 2.0 * std::numbers::pi * unit(topo);
    c.mean_dir = c.dir;
    c.p_max = i < M ? cfg.p_rc_max_w : cfg.p_urc_max_w;
    c.f_cpu = i < M ? cfg.f_rc : cfg.f_urc;
    c.model_bits = cfg.model_bits;
  }

  // trust links: Bernoulli per (RC, UnRC), weight on link; columns that come
  // out empty are repaired by the nearest RC so every UnRC is referable
  st.trust = TrustMatrix(M, N);
  auto trust = make_rng(cfg.seed, 0, Stream::Trust);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n)
      if (unit(trust) < cfg.trust_link_prob) st.trust(m, n) = draw_trust_weight(trust, cfg);
  for (int n = 0; n < N; ++n) {
    bool linked = false;
    for (int m = 0; m < M; ++m) linked |= st.trust(m, n) > 0.0;
    if (linked) continue;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m) {
      double d = dist(st.rc(m).pos, st.unrc(n).pos);
      if (d < best_d) best_d = d, best = m;
    }
    st.trust(best, n) = draw_trust_weight(trust, cfg);
  }
  if (cfg.trust_w_min > 0.0) {
    // heterogeneity-controlled mode: pin the strongest link to exactly 1
    int bm = 0, bn = 0;
    double best = -1.0;
    for (int m = 0; m < M; ++m)
      for (int n = 0; n < N; ++n)
        if (st.trust(m, n) > best) best = st.trust(m, n), bm = m, bn = n;
    st.trust(bm, bn) = 1.0;
  }

  sample_channels(st, cfg);
  sample_round_state(st, cfg);
  return st;
}

void step_mobility(NetworkState& state, const SimConfig& cfg) {
  const double a = cfg.mobility.memory;
  const double noise_scale = std::sqrt(std::max(0.0, 1.0 - a * a));
  auto g = make_rng(cfg.seed, std::uint64_t(state.round), Stream::Mobility);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Client& c : state.clients) {
    // Gauss-Markov: decay toward per-client means, Gaussian innovations
    double s = a * c.speed + (1.0 - a) * cfg.mobility.mean_speed +
               noise_scale * cfg.mobility.speed_std * gauss(g);
    double d = a * c.dir + (1.0 - a) * c.mean_dir +
               noise_scale * cfg.mobility.dir_std * gauss(g);
    c.speed = std::max(s, 0.0);
    c.dir = d;
    c.pos.x += c.speed * std::cos(c.dir);
    c.pos.y += c.speed * std::sin(c.dir);
    reflect_into_disc(c, cfg.area_radius_m);
  }
}

void sample_channels(NetworkState& state, const SimConfig& cfg) {
  const int M = state.num_rc, N = state.num_unrc;
  std::exponential_distribution<double> fading(1.0);

  auto up = make_rng(cfg.seed, std::uint64_t(state.round), Stream::UplinkFading);
  state.uplink_gain.resize(size_t(M) + N);
  for (int i = 0; i < M + N; ++i) {
    double d = std::hypot(state.clients[i].pos.x, state.clients[i].pos.y);
    state.uplink_gain[i] = pathloss_gain(d) * fading(up);
  }

  auto c2c = make_rng(cfg.seed, std::uint64_t(state.round), Stream::C2cFading);
  state.c2c_gain.assign(size_t(N) * N, 0.0);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double d = dist(state.unrc(i).pos, state.unrc(j).pos);
      double gain = pathloss_gain(d) * fading(c2c);
      state.c2c_gain[size_t(i) * N + j] = gain;
      state.c2c_gain[size_t(j) * N + i] = gain;
    }
}

void sample_round_state(NetworkState& state, const SimConfig& cfg) {
  const int M = state.num_rc, N = state.num_unrc;
  const std::uint64_t round = std::uint64_t(state.round);

  auto samp = make_rng(cfg.seed, round, Stream::Samples);
  std::poisson_distribution<std::int64_t> poisson(cfg.q_mean);
  state.samples.resize(size_t(M) + N);
  for (auto& q : state.samples) q = cfg.q_mean > 0.0 ? poisson(samp) : 0;

  auto status = make_rng(cfg.seed, round, Stream::RcStatus);
  std::bernoulli_distribution idle(cfg.idle_prob);
  state.rc_idle.resize(M);
  for (int m = 0; m < M; ++m) state.rc_idle[m] = idle(status);

  auto act = make_rng(cfg.seed, round, Stream::UnrcActive);
  std::bernoulli_distribution active(cfg.active_prob);
  state.unrc_active.resize(N);
  for (int n = 0; n < N; ++n) state.unrc_active[n] = active(act);

  // partial C2C pairing: each active UnRC grabs a uniform unpaired peer within
  // range, ascending order; a pair blocks both ends for the rest of the round
  auto pair_rng = make_rng(cfg.seed, round, Stream::Pairing);
  state.c2c_partner.assign(N, -1);
  for (int n = 0; n < N; ++n) {
    if (!state.unrc_active[n] || state.c2c_partner[n] != -1) continue;
    std::vector<int> in_range;
    for (int j = 0; j < N; ++j) {
      if (j == n || state.c2c_partner[j] != -1) continue;
      if (dist(state.unrc(n).pos, state.unrc(j).pos) <= cfg.c2c_dist_m) in_range.push_back(j);
    }
    if (in_range.empty()) continue;
    int pick = in_range[std::uniform_int_distribution<size_t>(0, in_range.size() - 1)(pair_rng)];
    state.c2c_partner[n] = pick;
    state.c2c_partner[pick] = n;
  }
}

void advance_round(NetworkState& state, const SimConfig& cfg, int round) {
  if (round != state.round + 1)
    throw std::invalid_argument("advance_round: rounds must advance by exactly 1");
  state.round = round;
  step_mobility(state, cfg);
  sample_channels(state, cfg);
  sample_round_state(state, cfg);
}

NeighborSets derive_neighbor_sets(const NetworkState& state, const SimConfig& cfg) {
  const int M = state.num_rc, N = state.num_unrc;
  NeighborSets s;
  s.trusted.resize(M);
  s.trusted_active.resize(M);
  s.sensed.resize(M);
  s.sensed_active.resize(M);
  s.reach.resize(N);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      if (!(state.trust(m, n) > 0.0)) continue;
      s.trusted[m].push_back(n);
      if (state.unrc_active[n]) s.trusted_active[m].push_back(n);
      if (dist(state.rc(m).pos, state.unrc(n).pos) <= cfg.s_max_m) {
        s.sensed[m].push_back(n);
        s.reach[n].push_back(m);
        if (state.unrc_active[n]) s.sensed_active[m].push_back(n);
      }
    }
  }
  return s;
}

double trust_heterogeneity(const TrustMatrix& w, const std::vector<std::vector<int>>& trusted) {
  if (trusted.empty()) throw std::invalid_argument("trust_heterogeneity: no RCs");
  double min_of_max = std::numeric_limits<double>::infinity();
  double max_of_min = 0.0;
  for (int m = 0; m < int(trusted.size()); ++m) {
    if (trusted[m].empty())
      throw std::invalid_argument("trust_heterogeneity: RC " + std::to_string(m) +
                                  " has an empty candidate set");
    double row_max = 0.0, row_min = std::numeric_limits<double>::infinity();
    for (int n : trusted[m]) {
      row_max = std::max(row_max, w(m, n));
      row_min = std::min(row_min, w(m, n));
    }
    if (!(row_min > 0.0))
      throw std::invalid_argument("trust_heterogeneity: non-positive weight in candidate set");
    min_of_max = std::min(min_of_max, row_max);
    max_of_min = std::max(max_of_min, row_min);
  }
  return min_of_max / max_of_min;
}

}  // namespace lref::net
