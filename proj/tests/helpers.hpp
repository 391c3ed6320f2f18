#pragma once
// Hand-built miniature worlds for desk-checked tests. Everything is explicit
// (positions, trust weights, gains, flags) so expected values can be computed
// independently in the test body.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lref/config.hpp"
#include "lref/types.hpp"

namespace testutil {

// Config shrunk to a 2-RC / 3-UnRC world with otherwise-default parameters.
inline lref::SimConfig tiny_config(int num_rc = 2, int num_unrc = 3) {
  lref::SimConfig cfg;
  cfg.num_rc = num_rc;
  cfg.num_unrc = num_unrc;
  cfg.rounds = 5;
  return cfg;
}

// A fully explicit state: all clients at given positions, unit fading
// (gain = pure pathloss), fixed sample counts, no C2C pairs unless set.
inline lref::NetworkState manual_state(const lref::SimConfig& cfg,
                                       const std::vector<lref::Vec2>& pos) {
  const int M = cfg.num_rc, N = cfg.num_unrc;
  lref::NetworkState st;
  st.round = 0;
  st.num_rc = M;
  st.num_unrc = N;
  st.clients.resize(size_t(M) + N);
  for (int i = 0; i < M + N; ++i) {
    auto& c = st.clients[i];
    c.id = i;
    c.kind = i < M ? lref::ClientKind::Rc : lref::ClientKind::Unrc;
    c.pos = pos.at(i);
    c.speed = 0.0;
    c.dir = 0.0;
    c.mean_dir = 0.0;
    c.p_max = i < M ? cfg.p_rc_max_w : cfg.p_urc_max_w;
    c.f_cpu = i < M ? cfg.f_rc : cfg.f_urc;
    c.model_bits = cfg.model_bits;
  }
  st.trust = lref::TrustMatrix(M, N);
  st.uplink_gain.assign(size_t(M) + N, 0.0);
  for (int i = 0; i < M + N; ++i) {
    double d = std::max(std::hypot(pos[i].x, pos[i].y), 1.0);
    st.uplink_gain[i] = 1e-3 / (d * d * d);
  }
  st.c2c_gain.assign(size_t(N) * N, 0.0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      if (a == b) continue;
      double d = std::max(lref::dist(pos[M + a], pos[M + b]), 1.0);
      st.c2c_gain[size_t(a) * N + b] = 1e-3 / (d * d * d);
    }
  st.samples.assign(size_t(M) + N, std::int64_t(cfg.q_mean));
  st.rc_idle.assign(M, 0);
  st.unrc_active.assign(N, 0);
  st.c2c_partner.assign(N, -1);
  return st;
}

}  // namespace testutil
