#pragma once
// Keyed RNG streams. Every random draw in the simulator comes from a generator
// built here, keyed by (run seed, round, purpose, salt). Methods that share a
// seed therefore see identical topologies, channels and client states no
// matter what the selector or V does to the draw *counts* elsewhere
// (common-random-numbers across compared methods).

#include <cstdint>
#include <random>

namespace lref {

// Purpose tag for a random stream. Values are part of the keying and must not
// be reordered once results are pinned.
enum class Stream : std::uint64_t {
  Topology = 1,   // initial positions, headings
  Trust,          // trust-link existence + weights
  Mobility,       // per-round speed/direction noise
  UplinkFading,   // client->server small-scale fading
  C2cFading,      // client<->client small-scale fading
  Samples,        // per-round training-sample counts
  RcStatus,       // per-round RC idle flags
  UnrcActive,     // per-round UnRC QoS-active flags
  Pairing,        // C2C partner picks
  Sghs,           // harmony-search draws
  Baseline,       // baseline selector picks / random theta
};

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t round,
                                Stream purpose, std::uint64_t salt = 0) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ round);
  k = splitmix64(k ^ static_cast<std::uint64_t>(purpose));
  k = splitmix64(k ^ salt);
  return k;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t round,
                                Stream purpose, std::uint64_t salt = 0) {
  return std::mt19937_64(stream_key(seed, round, purpose, salt));
}

// Uniform draw on (0,1]: strictly positive, 1 attainable.
inline double uniform_pos_unit(std::mt19937_64& g) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

}  // namespace lref
