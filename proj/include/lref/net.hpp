#pragma once
// Network world model: topology generation, Gauss-Markov mobility, pathloss +
// Rayleigh-fading channels, per-round client states (sample counts, RC idle
// flags, UnRC QoS activity, C2C pairing) and the trust neighborhoods.
//
// All randomness is drawn from purpose-keyed streams (rng.hpp) keyed by
// (config.seed, round, purpose), so the world evolution is identical across
// selection methods and V values sharing a seed.

#include "lref/config.hpp"
#include "lref/types.hpp"

namespace lref::net {

// Build the initial world: clients uniform in the disc, random headings,
// trust links Bernoulli(trust_link_prob) with U(0,1] weights (or U[w_min,1]
// with one link forced to 1 when trust_w_min > 0), every UnRC guaranteed at
// least one trusting RC (nearest RC backfills). Also samples the round-0
// channel/client state. Throws std::invalid_argument on a bad config.
NetworkState init_topology(const SimConfig& cfg);

// One Gauss-Markov mobility step (dt = 1 round): speed and heading each decay
// toward their per-client means with memory alpha and receive
// sqrt(1-alpha^2)-scaled Gaussian innovations; positions reflect off the disc
// boundary. Uses the round's Mobility stream; state.round must be current.
void step_mobility(NetworkState& state, const SimConfig& cfg);

// Redraw uplink gains (client -> server at the origin) and the symmetric
// UnRC-to-UnRC gain matrix: 30 dB attenuation at 1 m, pathloss exponent 3,
// distances clamped to >= 1 m, unit-mean exponential fading per link.
void sample_channels(NetworkState& state, const SimConfig& cfg);

// Redraw per-round client states: Poisson(q_mean) sample counts, RC idle
// flags ~ Bernoulli(idle_prob), UnRC QoS-active flags ~ Bernoulli(active_prob),
// and a random partial pairing of active UnRCs with peers within c2c_dist_m.
void sample_round_state(NetworkState& state, const SimConfig& cfg);

// Advance the world into `round`: bump the counter, move, re-sample channels
// and client states. init_topology leaves the state ready for round 0.
void advance_round(NetworkState& state, const SimConfig& cfg, int round);

// Trust neighborhoods at current positions: trusted (w > 0), sensed (trusted
// and within s_max), their QoS-active restrictions, and the inverse reach
// sets. All index lists ascending.
NeighborSets derive_neighbor_sets(const NetworkState& state, const SimConfig& cfg);

// Trust heterogeneity of the realized matrix over each RC's trusted set:
//   L = (min over RCs of its largest weight) / (max over RCs of its smallest
//   weight). A balanced matrix scores 1; spread-out weights score higher.
// Throws if any RC's restricted row is empty.
double trust_heterogeneity(const TrustMatrix& w, const std::vector<std::vector<int>>& trusted);

}  // namespace lref::net
