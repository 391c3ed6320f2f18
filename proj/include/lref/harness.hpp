#pragma once
// Simulation harness: drives the round loop (world evolution -> selection ->
// queue updates), collects per-round metrics and the selection history, and
// writes the run outputs (metrics.csv, selections.csv, summary.json).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lref/config.hpp"
#include "lref/lyap.hpp"
#include "lref/net.hpp"
#include "lref/types.hpp"

namespace lref::harness {

struct ParticipantDetail {
  int rc = -1;
  int client = -1;  // global client id
  RcMode mode = RcMode::None;
  double trust = 0.0;  // 0 for self-learning
  double t_cmp = 0.0, e_cmp = 0.0;      // one local iteration
  double t_com = 0.0, e_com = 0.0;      // one upload
  double t_epoch = 0.0, e_epoch = 0.0;  // at the chosen theta
  double wset = 0.0;
};

struct RoundMetrics {
  int round = 0;
  double objective = 0.0;      // selector's drift-plus-penalty value
  double max_wset = 0.0;       // cost of the round (0 when nobody trains)
  double time_avg_cost = 0.0;  // running mean of max_wset up to this round
  double theta = 0.5;
  double mean_queue_gamma = 0.0;  // post-update means
  double mean_queue_z = 0.0;
  int selected_count = 0;
  double mean_selected_trust = 0.0;  // over this round's referrals, 0 if none
  double wall_time_s = 0.0;
  std::vector<ParticipantDetail> participants;
};

struct RunSummary {
  double time_avg_cost = 0.0;
  double final_mean_gamma = 0.0, final_mean_z = 0.0;
  std::int64_t participant_count = 0, referral_count = 0;
  // ratio-of-sums aggregates over the whole run
  double mean_upload_time_s = 0.0, mean_upload_energy_j = 0.0;    // all participants
  double mean_referred_upload_time_s = 0.0, mean_referred_upload_energy_j = 0.0;
  double mean_epoch_time_s = 0.0, mean_epoch_energy_j = 0.0;
  double mean_selected_trust = 0.0;  // over referrals
  double l_trust = 0.0;              // realized heterogeneity; NaN if undefined
  std::vector<double> fairness_residuals;            // per RC
  std::vector<std::optional<double>> qos_residuals;  // per UnRC, empty = never applied
  double total_wall_time_s = 0.0;
};

struct RunResult {
  SimConfig config;
  std::vector<RoundMetrics> rounds;
  lyap::SelectionHistory history;
  RunSummary summary;
};

// Stepping interface, exposed so tests can drive the exact run_simulation
// evolution while instrumenting or replacing the per-round selector.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);  // world at round 0, queues empty

  const SimConfig& config() const { return cfg_; }
  const NetworkState& state() const { return state_; }
  const NeighborSets& sets() const { return sets_; }
  const lyap::VirtualQueues& queues() const { return queues_; }

  // run the configured method's selector on the current round
  Selection select() const;

  // account a selection: metrics, selection history, queue updates
  RoundMetrics apply(const Selection& sel);

  // advance the world into the next round
  void advance();

  const lyap::SelectionHistory& history() const { return history_; }

 private:
  SimConfig cfg_;
  NetworkState state_;
  NeighborSets sets_;
  lyap::VirtualQueues queues_;
  lyap::SelectionHistory history_;
  double cost_sum_ = 0.0;
  int rounds_done_ = 0;
};

// cfg.rounds rounds of select/apply/advance plus the end-of-run summary.
RunResult run_simulation(const SimConfig& cfg);

// metrics.csv (fixed column order), selections.csv (per-participant trace),
// summary.json (config echo + aggregates + residuals). Creates out_dir.
void write_outputs(const RunResult& run, const std::filesystem::path& out_dir);

// --- parameter sweeps -------------------------------------------------------

enum class SweepParam { V, Q, PUrc, LTrust };

SweepParam parse_sweep_param(const std::string& name);  // "v" "q" "p-urc" "l-trust"
const char* sweep_param_name(SweepParam p);

// Returns base with the swept knob applied. p-urc values are in dBm (the
// usual axis for transmit power); the rest are in the config's native units:
// v directly, q the Poisson mean, l-trust the lower edge of the trust-weight
// distribution.
SimConfig apply_sweep_value(SimConfig base, SweepParam p, double value);

struct SweepCell {
  double value = 0.0;
  std::uint64_t seed = 0;
  RunSummary summary;
};

// Full (values x seeds) grid, seeds = base.seed .. base.seed + num_seeds - 1,
// fanned out over `jobs` threads (<= 1 = sequential). Cells are independent
// runs; determinism is per-cell. When out_dir is given, each cell writes its
// run outputs into out_dir/<param>_<value>_seed<seed>/.
std::vector<SweepCell> run_sweep(const SimConfig& base, SweepParam p,
                                 const std::vector<double>& values, int num_seeds,
                                 int jobs,
                                 const std::optional<std::filesystem::path>& out_dir = {});

// sweep.csv: one row per cell with the headline aggregates.
void write_sweep_csv(const std::vector<SweepCell>& cells, SweepParam p,
                     const std::filesystem::path& file);

}  // namespace lref::harness
