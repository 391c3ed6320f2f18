#pragma once
// Core data types shared by every module: clients, trust matrix, per-round
// network state, neighborhood sets, and the joint selection action.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lref {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline double dist(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class ClientKind : std::uint8_t { Rc, Unrc };

// One device. RCs occupy global ids [0, M), UnRCs [M, M+N); an UnRC's local
// index is id - M. Velocity is kept in polar form (speed, heading) because
// that is the Gauss-Markov state; mean_dir is the per-client drift heading.
struct Client {
  int id = 0;
  ClientKind kind = ClientKind::Rc;
  Vec2 pos;
  double speed = 0.0;     // m/s, >= 0
  double dir = 0.0;       // rad
  double mean_dir = 0.0;  // rad, fixed at initialization
  double p_max = 0.0;     // transmit power budget, W
  double f_cpu = 0.0;     // CPU frequency, cycles/s
  double model_bits = 0.0;  // size of a model update, bit
};

inline Vec2 velocity(const Client& c) {
  return {c.speed * std::cos(c.dir), c.speed * std::sin(c.dir)};
}

// Row-major M x N trust matrix; w(m,n) in [0,1], 0 = no link.
struct TrustMatrix {
  int rows = 0, cols = 0;
  std::vector<double> w;

  TrustMatrix() = default;
  TrustMatrix(int m, int n) : rows(m), cols(n), w(size_t(m) * n, 0.0) {}

  double operator()(int m, int n) const { return w[size_t(m) * cols + n]; }
  double& operator()(int m, int n) { return w[size_t(m) * cols + n]; }

  // Sum of row m over every linked UnRC (the RC's whole trusted set).
  double row_sum(int m) const {
    double s = 0.0;
    for (int n = 0; n < cols; ++n) s += (*this)(m, n);
    return s;
  }
};

// Everything the selectors read each round. Static pieces (clients' power/CPU,
// trust) are set once by init_topology; the rest is refreshed per round.
struct NetworkState {
  int round = 0;
  int num_rc = 0, num_unrc = 0;
  std::vector<Client> clients;  // size num_rc + num_unrc
  TrustMatrix trust;            // M x N, static over a run

  std::vector<double> uplink_gain;  // h_{i,0} per client, > 0
  std::vector<double> c2c_gain;     // N x N symmetric, g between UnRC pairs, > 0

  std::vector<std::int64_t> samples;  // Q_i per client, Poisson per round
  std::vector<std::uint8_t> rc_idle;     // per RC: 1 = idle this round
  std::vector<std::uint8_t> unrc_active; // per UnRC: 1 = has own QoS traffic
  std::vector<int> c2c_partner;          // per UnRC: partner local idx or -1

  double g_c2c(int a, int b) const { return c2c_gain[size_t(a) * num_unrc + b]; }
  const Client& rc(int m) const { return clients[m]; }
  const Client& unrc(int n) const { return clients[num_rc + n]; }
};

// Neighborhood structure derived from positions + trust. All UnRC indices are
// local (0..N-1); reach is the inverse view (per UnRC, which RCs sense it).
struct NeighborSets {
  std::vector<std::vector<int>> trusted;         // per RC: w>0
  std::vector<std::vector<int>> trusted_active;  // per RC: w>0 and QoS-active
  std::vector<std::vector<int>> sensed;          // per RC: trusted and within s_max
  std::vector<std::vector<int>> sensed_active;   // per RC: sensed and QoS-active
  std::vector<std::vector<int>> reach;           // per UnRC: RCs sensing it
};

// What one RC does this round. Self = train locally (idle RCs only),
// ReferPartial = delegate to a QoS-active UnRC (it reserves resources for its
// own traffic), ReferFull = delegate to an inactive UnRC.
enum class RcMode : std::uint8_t { None, Self, ReferPartial, ReferFull };

struct RcDecision {
  RcMode mode = RcMode::None;
  int client = -1;  // Self: the RC's own id. Refer*: local UnRC index.

  friend bool operator==(const RcDecision&, const RcDecision&) = default;
};

struct ActionPolicy {
  std::vector<RcDecision> rc;  // size M

  friend bool operator==(const ActionPolicy&, const ActionPolicy&) = default;

  int participant_count() const {
    int k = 0;
    for (const auto& d : rc) k += (d.mode != RcMode::None);
    return k;
  }

  // Every referred UnRC appears at most once across RCs.
  bool one_to_one() const {
    std::vector<int> seen;
    for (const auto& d : rc) {
      if (d.mode != RcMode::ReferPartial && d.mode != RcMode::ReferFull) continue;
      for (int s : seen)
        if (s == d.client) return false;
      seen.push_back(d.client);
    }
    return true;
  }
};

// Result of one selector invocation.
struct Selection {
  ActionPolicy action;
  double theta = 0.5;      // chosen local-accuracy parameter
  double objective = 0.0;  // drift-plus-penalty value at (action, theta)
};

}  // namespace lref
