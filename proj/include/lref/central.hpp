#pragma once
// Centralized benchmark selector: enumerate every feasible joint action
// (one-to-one referrals over per-RC candidate sets), run the theta search on
// each, keep the global drift-plus-penalty minimum. Exponential on purpose --
// it is the optimality reference the scalable method is judged against -- so
// enumeration carries a hard safety cap instead of pruning.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lref/evaluate.hpp"
#include "lref/lyap.hpp"
#include "lref/types.hpp"

namespace lref::central {

struct EnumerationExplosion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One referral option of one RC, with its costs precomputed.
struct Candidate {
  int unrc = -1;  // local index
  eval::PairCost cost;
};

struct FeasibleSets {
  // per RC: idle RCs train themselves (options empty, self_cost set); busy
  // RCs choose among `options` or skip the round
  std::vector<std::uint8_t> idle;
  std::vector<eval::PairCost> self;            // valid where idle
  std::vector<std::vector<Candidate>> options; // ascending by UnRC index

  // number of joint actions: product over RCs of |A_m| (busy: options+none,
  // idle: the forced self), saturating at cap+1 to stay overflow-safe
  std::int64_t joint_count(std::int64_t cap) const;
};

// Build per-RC action sets. A referral candidate must be sensed (trusted and
// within s_max), fit one local iteration into the compute deadline at its
// trust-implied CPU fraction, and have a live uplink (active learners with
// trust weight 1 reserve everything and are unusable).
FeasibleSets feasible_actions(const NetworkState& state, const NeighborSets& sets,
                              const SimConfig& cfg);

// Visit every joint action in deterministic order (RCs ascending; per RC:
// none first, then candidates ascending; idle RCs contribute their forced
// self). Returns the visit count. Throws EnumerationExplosion if the count
// would exceed `cap` -- checked up front, nothing is visited then.
std::int64_t enumerate_joint_actions(const FeasibleSets& fs, std::int64_t cap,
                                     const std::function<void(const ActionPolicy&)>& visit);

// Full centralized decision for this round.
Selection centralized_select(const NetworkState& state, const NeighborSets& sets,
                             const lyap::VirtualQueues& q, const SimConfig& cfg);

}  // namespace lref::central
