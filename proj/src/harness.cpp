#include "lref/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lref/baselines.hpp"
#include "lref/central.hpp"
#include "lref/evaluate.hpp"
#include "lref/match.hpp"

namespace lref::harness {

namespace {

// shortest decimal form that round-trips back to the same double
std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

const char* mode_name(RcMode m) {
  switch (m) {
    case RcMode::None: return "none";
    case RcMode::Self: return "self";
    case RcMode::ReferPartial: return "refer-partial";
    case RcMode::ReferFull: return "refer-full";
  }
  return "?";
}

}  // namespace

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  state_ = net::init_topology(cfg_);
  sets_ = net::derive_neighbor_sets(state_, cfg_);
  queues_ = lyap::VirtualQueues::zeros(cfg_.num_rc, cfg_.num_unrc);
}

Selection Simulation::select() const {
  switch (cfg_.method) {
    case Method::Centralized:
      return central::centralized_select(state_, sets_, queues_, cfg_);
    case Method::Matching:
      return match::distributed_select(state_, sets_, queues_, cfg_).selection;
    default:
      return baselines::baseline_select(baselines::kind_of(cfg_.method), state_, sets_,
                                        queues_, cfg_);
  }
}

RoundMetrics Simulation::apply(const Selection& sel) {
  auto t0 = std::chrono::steady_clock::now();
  eval::ActionEvaluation ev = eval::evaluate_action(sel.action, state_, queues_, cfg_);

  RoundMetrics rm;
  rm.round = state_.round;
  rm.objective = sel.objective;
  rm.theta = sel.theta;
  rm.selected_count = int(ev.participants.size());

  double trust_sum = 0.0;
  int referrals = 0;
  for (const eval::PairCost& p : ev.participants) {
    ParticipantDetail d;
    d.rc = p.rc;
    d.client = p.client;
    d.mode = p.mode;
    d.trust = p.trust;
    d.t_cmp = p.cmp.t_cmp;
    d.e_cmp = p.cmp.e_cmp;
    d.t_com = p.com.t_com;
    d.e_com = p.com.e_com;
    cost::EpochCost ep = cost::epoch_cost(sel.theta, p.cmp, p.com);
    d.t_epoch = ep.t_epoch;
    d.e_epoch = ep.e_epoch;
    d.wset = eval::wset_at(p, sel.theta, cfg_);
    rm.max_wset = std::max(rm.max_wset, d.wset);
    if (p.mode == RcMode::ReferPartial || p.mode == RcMode::ReferFull) {
      trust_sum += p.trust;
      ++referrals;
    }
    rm.participants.push_back(d);
  }
  rm.mean_selected_trust = referrals > 0 ? trust_sum / referrals : 0.0;

  cost_sum_ += rm.max_wset;
  ++rounds_done_;
  rm.time_avg_cost = cost_sum_ / rounds_done_;

  // queue dynamics + the history the residuals are recomputed from
  lyap::SelectionRecord rec;
  rec.rc_alpha.assign(cfg_.num_rc, 0);
  rec.recommended_active.assign(cfg_.num_unrc, 0);
  rec.c2c_rate.assign(cfg_.num_unrc, 0.0);
  for (int m = 0; m < cfg_.num_rc; ++m)
    rec.rc_alpha[m] = sel.action.rc[m].mode != RcMode::None ? 1 : 0;
  for (const eval::PairCost& p : ev.participants)
    if (p.mode == RcMode::ReferPartial) {
      int n = p.client - cfg_.num_rc;
      rec.recommended_active[n] = 1;
      rec.c2c_rate[n] = p.c2c_rate;
    }

  const double delta = cfg_.delta();
  for (int m = 0; m < cfg_.num_rc; ++m)
    queues_.gamma[m] = lyap::update_gamma(queues_.gamma[m], delta, rec.rc_alpha[m]);
  for (int n = 0; n < cfg_.num_unrc; ++n)
    queues_.z[n] = lyap::update_z(queues_.z[n], rec.recommended_active[n] != 0,
                                  cfg_.r_min_c2c, rec.c2c_rate[n]);
  history_.rounds.push_back(std::move(rec));

  double gsum = 0.0, zsum = 0.0;
  for (double g : queues_.gamma) gsum += g;
  for (double z : queues_.z) zsum += z;
  rm.mean_queue_gamma = gsum / cfg_.num_rc;
  rm.mean_queue_z = zsum / cfg_.num_unrc;

  rm.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rm;
}

void Simulation::advance() { net::advance_round(state_, cfg_, state_.round + 1); sets_ = net::derive_neighbor_sets(state_, cfg_); }

RunResult run_simulation(const SimConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Simulation sim(cfg);
  RunResult run;
  run.config = sim.config();

  double l_trust = std::numeric_limits<double>::quiet_NaN();
  try {
    l_trust = net::trust_heterogeneity(sim.state().trust, sim.sets().trusted);
  } catch (const std::invalid_argument&) {
    // an RC with an empty trusted set leaves the ratio undefined
  }

  double up_t = 0.0, up_e = 0.0, ref_t = 0.0, ref_e = 0.0, ep_t = 0.0, ep_e = 0.0;
  double trust_sum = 0.0;
  std::int64_t participants = 0, referrals = 0;

  for (int r = 0; r < cfg.rounds; ++r) {
    Selection sel = sim.select();
    RoundMetrics rm = sim.apply(sel);
    for (const ParticipantDetail& d : rm.participants) {
      ++participants;
      up_t += d.t_com;
      up_e += d.e_com;
      ep_t += d.t_epoch;
      ep_e += d.e_epoch;
      if (d.mode == RcMode::ReferPartial || d.mode == RcMode::ReferFull) {
        ++referrals;
        ref_t += d.t_com;
        ref_e += d.e_com;
        trust_sum += d.trust;
      }
    }
    run.rounds.push_back(std::move(rm));
    if (r + 1 < cfg.rounds) sim.advance();
  }

  RunSummary& s = run.summary;
  const RoundMetrics& last = run.rounds.back();
  s.time_avg_cost = last.time_avg_cost;
  s.final_mean_gamma = last.mean_queue_gamma;
  s.final_mean_z = last.mean_queue_z;
  s.participant_count = participants;
  s.referral_count = referrals;
  s.mean_upload_time_s = participants ? up_t / participants : 0.0;
  s.mean_upload_energy_j = participants ? up_e / participants : 0.0;
  s.mean_referred_upload_time_s = referrals ? ref_t / referrals : 0.0;
  s.mean_referred_upload_energy_j = referrals ? ref_e / referrals : 0.0;
  s.mean_epoch_time_s = participants ? ep_t / participants : 0.0;
  s.mean_epoch_energy_j = participants ? ep_e / participants : 0.0;
  s.mean_selected_trust = referrals ? trust_sum / referrals : 0.0;
  s.l_trust = l_trust;

  lyap::Residuals res = lyap::constraint_residuals(sim.history(), cfg.delta(), cfg.r_min_c2c);
  s.fairness_residuals = std::move(res.fairness);
  s.qos_residuals = std::move(res.qos);
  s.total_wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.history = sim.history();
  return run;
}

void write_outputs(const RunResult& run, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string method = method_name(run.config.method);

  {
    std::ofstream csv(out_dir / "metrics.csv");
    if (!csv) throw std::runtime_error("cannot write " + (out_dir / "metrics.csv").string());
    csv << "round,method,V,objective,max_wset,time_avg_cost,theta,mean_queue_gamma,"
           "mean_queue_z,selected_count,mean_selected_trust\n";
    for (const RoundMetrics& r : run.rounds) {
      csv << r.round << ',' << method << ',' << fmt(run.config.v) << ',' << fmt(r.objective)
          << ',' << fmt(r.max_wset) << ',' << fmt(r.time_avg_cost) << ',' << fmt(r.theta)
          << ',' << fmt(r.mean_queue_gamma) << ',' << fmt(r.mean_queue_z) << ','
          << r.selected_count << ',' << fmt(r.mean_selected_trust) << '\n';
    }
  }

  {
    std::ofstream csv(out_dir / "selections.csv");
    if (!csv) throw std::runtime_error("cannot write " + (out_dir / "selections.csv").string());
    csv << "round,rc,client,mode,trust,theta\n";
    for (const RoundMetrics& r : run.rounds)
      for (const ParticipantDetail& d : r.participants)
        csv << r.round << ',' << d.rc << ',' << d.client << ',' << mode_name(d.mode) << ','
            << fmt(d.trust) << ',' << fmt(r.theta) << '\n';
  }

  nlohmann::json j;
  for (const auto& [k, v] : config_items(run.config)) j["config"][k] = v;
  j["rounds_run"] = run.rounds.size();
  const RunSummary& s = run.summary;
  j["final"] = {
      {"time_avg_cost", s.time_avg_cost},
      {"mean_queue_gamma", s.final_mean_gamma},
      {"mean_queue_z", s.final_mean_z},
      {"participant_count", s.participant_count},
      {"referral_count", s.referral_count},
      {"mean_upload_time_s", s.mean_upload_time_s},
      {"mean_upload_energy_j", s.mean_upload_energy_j},
      {"mean_referred_upload_time_s", s.mean_referred_upload_time_s},
      {"mean_referred_upload_energy_j", s.mean_referred_upload_energy_j},
      {"mean_epoch_time_s", s.mean_epoch_time_s},
      {"mean_epoch_energy_j", s.mean_epoch_energy_j},
      {"mean_selected_trust", s.mean_selected_trust},
      {"total_wall_time_s", s.total_wall_time_s},
  };
  j["final"]["l_trust"] =
      std::isnan(s.l_trust) ? nlohmann::json(nullptr) : nlohmann::json(s.l_trust);
  j["fairness_residuals"] = s.fairness_residuals;
  j["qos_residuals"] = nlohmann::json::array();
  for (const auto& q : s.qos_residuals)
    j["qos_residuals"].push_back(q ? nlohmann::json(*q) : nlohmann::json(nullptr));

  std::ofstream js(out_dir / "summary.json");
  if (!js) throw std::runtime_error("cannot write " + (out_dir / "summary.json").string());
  js << j.dump(2) << '\n';
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "v") return SweepParam::V;
  if (name == "q") return SweepParam::Q;
  if (name == "p-urc") return SweepParam::PUrc;
  if (name == "l-trust") return SweepParam::LTrust;
  throw std::invalid_argument("unknown sweep parameter: '" + name + "'");
}

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::V: return "v";
    case SweepParam::Q: return "q";
    case SweepParam::PUrc: return "p-urc";
    case SweepParam::LTrust: return "l-trust";
  }
  throw std::logic_error("sweep_param_name: bad enum value");
}

SimConfig apply_sweep_value(SimConfig base, SweepParam p, double value) {
  switch (p) {
    case SweepParam::V: base.v = value; break;
    case SweepParam::Q: base.q_mean = value; break;
    case SweepParam::PUrc: base.p_urc_max_w = std::pow(10.0, value / 10.0) * 1e-3; break;
    case SweepParam::LTrust: base.trust_w_min = value; break;
  }
  base.validate();
  return base;
}

std::vector<SweepCell> run_sweep(const SimConfig& base, SweepParam p,
                                 const std::vector<double>& values, int num_seeds,
                                 int jobs,
                                 const std::optional<std::filesystem::path>& out_dir) {
  if (values.empty()) throw std::invalid_argument("run_sweep: no values");
  if (num_seeds < 1) throw std::invalid_argument("run_sweep: need at least one seed");

  struct Job {
    double value;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  for (double v : values)
    for (int s = 0; s < num_seeds; ++s) todo.push_back({v, base.seed + std::uint64_t(s)});

  std::vector<SweepCell> cells(todo.size());
  auto run_cell = [&](size_t i) {
    SimConfig cfg = apply_sweep_value(base, p, todo[i].value);
    cfg.seed = todo[i].seed;
    RunResult res = run_simulation(cfg);
    if (out_dir) {
      std::ostringstream dir;
      dir << sweep_param_name(p) << '_' << fmt(todo[i].value) << "_seed" << todo[i].seed;
      write_outputs(res, *out_dir / dir.str());
    }
    cells[i] = {todo[i].value, todo[i].seed, std::move(res.summary)};
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < todo.size(); ++i) run_cell(i);
    return cells;
  }
  std::atomic<size_t> cursor{0};
  std::vector<std::future<void>> workers;
  int nw = std::min<int>(jobs, int(todo.size()));
  for (int w = 0; w < nw; ++w)
    workers.push_back(std::async(std::launch::async, [&] {
      for (size_t i = cursor.fetch_add(1); i < todo.size(); i = cursor.fetch_add(1))
        run_cell(i);
    }));
  for (auto& f : workers) f.get();  // propagates the first failure
  return cells;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, SweepParam p,
                     const std::filesystem::path& file) {
  std::ofstream csv(file);
  if (!csv) throw std::runtime_error("cannot write " + file.string());
  csv << "param,value,seed,time_avg_cost,l_trust,mean_selected_trust,"
         "mean_upload_time_s,mean_upload_energy_j,mean_referred_upload_time_s,"
         "mean_referred_upload_energy_j,mean_epoch_time_s,mean_epoch_energy_j\n";
  for (const SweepCell& c : cells) {
    const RunSummary& s = c.summary;
    csv << sweep_param_name(p) << ',' << fmt(c.value) << ',' << c.seed << ','
        << fmt(s.time_avg_cost) << ',' << fmt(s.l_trust) << ',' << fmt(s.mean_selected_trust)
        << ',' << fmt(s.mean_upload_time_s) << ',' << fmt(s.mean_upload_energy_j) << ','
        << fmt(s.mean_referred_upload_time_s) << ',' << fmt(s.mean_referred_upload_energy_j)
        << ',' << fmt(s.mean_epoch_time_s) << ',' << fmt(s.mean_epoch_energy_j) << '\n';
  }
}

}  // namespace lref::harness
