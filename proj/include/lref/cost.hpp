#pragma once
// Per-pair cost model: uplink rates under direct participation vs referral,
// upload and local-computation time/energy, epoch totals, C2C service rates,
// and the weighted system-efficiency cost of one participant.
//
// Conventions: SI units throughout (s, J, W, Hz, bit). A referred learner that
// still has its own QoS traffic ("active") reserves the fraction w of its
// bandwidth and transmit power for itself and lends the rest; an inactive one
// lends everything but its power is throttled by how much its recommender is
// trusted across the neighborhood.

#include <cmath>
#include <stdexcept>

namespace lref::cost {

enum class Mode { DParM, LRefM };  // direct participation vs learner referral

struct LinkParams {
  double bandwidth_hz = 0.0;  // B
  double n0_w_hz = 0.0;       // noise PSD
  double gain = 0.0;          // channel gain h (pathloss x fading)
  double p_max_w = 0.0;       // transmitter power budget
};

// Fraction of the learner's own bandwidth available for the FL upload.
inline double xi_fraction(double w, bool active) {
  if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("xi_fraction: w must be in (0,1]");
  return active ? 1.0 - w : 1.0;
}

// Fraction of the learner's transmit power spent on the FL upload.
// trust_row_sum is the recommender's total trust over its whole trusted set;
// only the inactive branch divides by it.
inline double pi_fraction(double w, double trust_row_sum, bool active) {
  if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("pi_fraction: w must be in (0,1]");
  if (active) return w;
  if (!(trust_row_sum > 0.0))
    throw std::invalid_argument("pi_fraction: trust row sum must be > 0 for an inactive learner");
  return w / trust_row_sum;
}

// Upload rate when the RC trains and uploads itself (full band, full power).
inline double dparm_rate(const LinkParams& l) {
  if (!(l.bandwidth_hz > 0.0) || !(l.n0_w_hz > 0.0))
    throw std::invalid_argument("dparm_rate: bandwidth and noise PSD must be > 0");
  if (!(l.gain >= 0.0) || !(l.p_max_w > 0.0))
    throw std::invalid_argument("dparm_rate: gain must be >= 0 and power > 0");
  return l.bandwidth_hz * std::log2(1.0 + l.gain * l.p_max_w / (l.n0_w_hz * l.bandwidth_hz));
}

// Upload rate of a referred learner. Active: it keeps the fraction w of band
// and power for its own traffic, so the upload sees bandwidth (1-w)B and
// power wP over that narrower band. Inactive: full band, power throttled to
// the recommender's normalized trust. Returns 0 when no bandwidth is left
// (w = 1, active) -- such links carry nothing and must not be selected.
inline double lrefm_rate(double w, double trust_row_sum, bool active, const LinkParams& l) {
  double xi = xi_fraction(w, active);
  if (xi == 0.0) return 0.0;
  double pi = pi_fraction(w, trust_row_sum, active);
  if (!(l.bandwidth_hz > 0.0) || !(l.n0_w_hz > 0.0))
    throw std::invalid_argument("lrefm_rate: bandwidth and noise PSD must be > 0");
  if (!(l.gain >= 0.0) || !(l.p_max_w > 0.0))
    throw std::invalid_argument("lrefm_rate: gain must be >= 0 and power > 0");
  return xi * l.bandwidth_hz *
         std::log2(1.0 + l.gain * pi * l.p_max_w / (l.n0_w_hz * xi * l.bandwidth_hz));
}

inline double uplink_rate(Mode mode, double w, double trust_row_sum, bool active,
                          const LinkParams& l) {
  return mode == Mode::DParM ? dparm_rate(l) : lrefm_rate(w, trust_row_sum, active, l);
}

struct UploadCost {
  double t_com = 0.0;  // s
  double e_com = 0.0;  // J
};

// One model upload of `bits` at `rate`; the transmitter spends power_fraction
// of its budget on it (1 for DParM, pi for LRefM).
inline UploadCost upload_cost(double bits, double rate, double power_fraction, double p_max_w) {
  if (!(bits > 0.0)) throw std::invalid_argument("upload_cost: bits must be > 0");
  if (!(rate > 0.0)) throw std::invalid_argument("upload_cost: rate must be > 0 (dead link)");
  if (!(power_fraction > 0.0 && power_fraction <= 1.0))
    throw std::invalid_argument("upload_cost: power fraction must be in (0,1]");
  if (!(p_max_w > 0.0)) throw std::invalid_argument("upload_cost: p_max must be > 0");
  double t = bits / rate;
  return {t, power_fraction * p_max_w * t};
}

struct ComputeCost {
  double t_cmp = 0.0;  // s, one local iteration
  double e_cmp = 0.0;  // J, one local iteration
};

// One local training pass over `samples` at effective frequency fraction*f.
// Energy follows the CPU power model rho * f_eff^zeta running for t_cmp, i.e.
// rho * samples * cycles * f_eff^(zeta-1).
inline ComputeCost compute_cost(double samples, double cycles_per_sample, double f_cpu,
                                double fraction, double rho, double zeta) {
  if (!(samples >= 0.0)) throw std::invalid_argument("compute_cost: samples must be >= 0");
  if (!(cycles_per_sample > 0.0)) throw std::invalid_argument("compute_cost: cycles must be > 0");
  if (!(f_cpu > 0.0)) throw std::invalid_argument("compute_cost: f_cpu must be > 0");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("compute_cost: CPU fraction must be in (0,1]");
  if (!(rho > 0.0) || !(zeta > 1.0))
    throw std::invalid_argument("compute_cost: need rho > 0 and zeta > 1");
  double cycles = samples * cycles_per_sample;
  double f_eff = fraction * f_cpu;
  return {cycles / f_eff, rho * cycles * std::pow(f_eff, zeta - 1.0)};
}

struct EpochCost {
  double t_epoch = 0.0;
  double e_epoch = 0.0;
};

// Whole-epoch cost at local accuracy theta: training runs ln(1/theta) local
// iterations, the upload happens once.
inline EpochCost epoch_cost(double theta, const ComputeCost& cmp, const UploadCost& com) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("epoch_cost: theta must lie in (0,1)");
  double iters = std::log(1.0 / theta);
  return {iters * cmp.t_cmp + com.t_com, iters * cmp.e_cmp + com.e_com};
}

// Service rate of the C2C link an active referred learner reserves for its own
// traffic: bandwidth share w, power share (1-w), only live while the learner
// is actually selected.
inline double c2c_rate(bool selected, double w, double gain, double p_max_w,
                       double bandwidth_hz, double n0_w_hz) {
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("c2c_rate: w must be in (0,1)");
  if (!(gain >= 0.0) || !(p_max_w > 0.0) || !(bandwidth_hz > 0.0) || !(n0_w_hz > 0.0))
    throw std::invalid_argument("c2c_rate: bad link parameters");
  if (!selected) return 0.0;
  return w * bandwidth_hz *
         std::log2(1.0 + gain * (1.0 - w) * p_max_w / (n0_w_hz * w * bandwidth_hz));
}

// Weighted system-efficiency cost of one participant over an expected epoch:
// (lambda_t * T + lambda_e * E) / (1 - theta).
inline double wset(double lambda_t, double lambda_e, double theta, const EpochCost& ep) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw std::domain_error("wset: theta must lie in [0,1)");
  return (lambda_t * ep.t_epoch + lambda_e * ep.e_epoch) / (1.0 - theta);
}

}  // namespace lref::cost
