#pragma once
// Distributed selector: the client-selection game as one-to-one matching.
// Each busy RC ranks the referral candidates it senses by a local utility,
// UnRCs rank back via the same utility, RC-proposing deferred acceptance
// produces a stable matching, and an outer loop alternates matching with the
// SGHS theta search until the objective settles.

#include <limits>
#include <vector>

#include "lref/config.hpp"
#include "lref/evaluate.hpp"
#include "lref/lyap.hpp"
#include "lref/types.hpp"

namespace lref::match {

// Unacceptable partners (outside the neighborhood, latency violation, dead
// link) carry -inf and are never proposed to or held.
constexpr double kUnacceptable = -std::numeric_limits<double>::infinity();

// Local utility of RC m fielding candidate `n` (local UnRC index, or m's own
// id with self=true): minus the pair's V-weighted efficiency cost plus the
// RC's own queue terms. Larger is better. Returns kUnacceptable for
// infeasible pairs. Throws if theta is outside (0,1).
double utility(const NetworkState& state, const NeighborSets& sets,
               const lyap::VirtualQueues& q, const SimConfig& cfg, int m, int n,
               bool self, double theta);

struct PreferenceEntry {
  int partner = -1;
  double u = kUnacceptable;
};

struct PreferenceList {
  int owner = -1;
  std::vector<PreferenceEntry> ranked;  // finite-utility partners only,
                                        // non-increasing u, ties by id
};

struct Preferences {
  std::vector<PreferenceList> rc;    // per RC, over local UnRC indices
  std::vector<PreferenceList> unrc;  // per UnRC, over RC ids
  std::vector<std::vector<double>> u;  // u[m][n], kUnacceptable where infeasible
  std::vector<std::uint8_t> idle;      // idle RCs sit out the game
};

Preferences build_preferences(const NetworkState& state, const NeighborSets& sets,
                              const lyap::VirtualQueues& q, const SimConfig& cfg,
                              double theta);

struct Matching {
  std::vector<int> rc_partner;    // per RC: local UnRC index or -1
  std::vector<int> unrc_partner;  // per UnRC: RC id or -1
  std::int64_t proposals = 0;
  // min over held pairs of -U after each proposal wave (+inf before the first
  // hold); non-increasing by construction, asserted in tests
  std::vector<double> min_neg_utility_trace;

  bool operator==(const Matching& o) const {
    return rc_partner == o.rc_partner && unrc_partner == o.unrc_partner;
  }
};

// RC-proposing deferred acceptance over the finite entries. Deterministic;
// proposal count <= M*N.
Matching deferred_acceptance(const Preferences& prefs);

struct StabilityResult {
  bool stable = true;
  int blocking_rc = -1, blocking_unrc = -1;  // witness when !stable
};

// No pair (m,n) may strictly prefer each other over their current partners;
// being unmatched is worse than any finite-utility partner.
StabilityResult is_stable(const Matching& mat, const Preferences& prefs);

// Diagnostic trace of one alternation, kept for monotonicity checks.
struct AlternationStep {
  Matching matching;
  double f_before = 0.0;  // F at the incumbent theta, for the new matching
  double f_after = 0.0;   // F after the theta search (<= f_before)
};

struct DistResult {
  Selection selection;
  int outer_iters = 0;
  bool converged = false;
  std::vector<AlternationStep> steps;
};

// Full distributed decision for this round: alternate deferred acceptance
// (Stage I, at the incumbent theta) with the SGHS theta search (Stage II,
// warm-started at the incumbent) until the relative objective change drops
// below 1e-6, the matching repeats, or 10 outer iterations pass. The
// objective reported is the same global drift-plus-penalty centralized_select
// uses, so the two are directly comparable.
DistResult distributed_select(const NetworkState& state, const NeighborSets& sets,
                              const lyap::VirtualQueues& q, const SimConfig& cfg);

}  // namespace lref::match
