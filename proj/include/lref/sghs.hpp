#pragma once
// Self-adaptive global-best harmony search over the scalar local-accuracy
// parameter theta in (0,1). Used by every selector to solve the inner
// min_theta F(theta) once a candidate action is fixed.

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace lref::sghs {

struct SghsParams {
  int hms = 5;              // harmony memory size
  int ni = 300;             // improvisations per run
  int update_period = 100;  // re-estimate HMCR/PAR means every this many
  double bw_min = 5e-4;     // late-stage bandwidth
  double bw_max = 0.5;      // initial bandwidth
  double mu_hmcr = 0.95, sigma_hmcr = 0.01;
  double mu_par = 0.30, sigma_par = 0.05;
  double theta_min = 1e-6, theta_max = 0.999;
};

// Single separable drift-plus-penalty objective for one (RC, client) pair:
//   f(theta) = v * (ln(1/theta) * a + b) / (1 - theta) + c
// a bundles the weighted per-iteration compute cost, b the weighted upload
// cost, c the theta-independent queue terms.
struct ObjectiveCoeffs {
  double a = 0.0, b = 0.0, c = 0.0, v = 1.0;
};

inline double f_objective(double theta, const ObjectiveCoeffs& k) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("f_objective: theta must lie in (0,1)");
  return k.v * (std::log(1.0 / theta) * k.a + k.b) / (1.0 - theta) + k.c;
}

// Bandwidth schedule: linear decay from bw_max to bw_min over the first half
// of the improvisations, then flat at bw_min. r is 0-based.
inline double bw_at(int r, const SghsParams& p) {
  if (r < 0 || p.ni <= 0) throw std::invalid_argument("bw_at: bad iteration index");
  if (2 * r < p.ni)
    return p.bw_max - (p.bw_max - p.bw_min) * (2.0 * r) / p.ni;
  return p.bw_min;
}

struct Result {
  double theta = 0.0;
  double value = 0.0;
  std::vector<double> best_trace;  // best objective seen, one entry per improvisation
};

// Minimize `f` over [theta_min, theta_max]. `warm_start` values (clamped to
// the domain) seed the first harmonies; the rest of the memory is uniform.
// Deterministic given `rng`'s state.
template <class F>
Result minimize(F&& f, const SghsParams& p, std::mt19937_64& rng,
                std::span<const double> warm_start = {}) {
  if (p.hms < 1) throw std::invalid_argument("sghs: harmony memory size must be >= 1");
  if (p.ni < 1) throw std::invalid_argument("sghs: need at least one improvisation");
  if (!(p.theta_min > 0.0 && p.theta_max < 1.0 && p.theta_min < p.theta_max))
    throw std::invalid_argument("sghs: theta bounds must satisfy 0 < min < max < 1");

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto clamp = [&](double t) {
    return t < p.theta_min ? p.theta_min : (t > p.theta_max ? p.theta_max : t);
  };
  auto uniform_theta = [&] {
    return p.theta_min + unit(rng) * (p.theta_max - p.theta_min);
  };

  std::vector<double> hm(p.hms), fv(p.hms);
  for (int h = 0; h < p.hms; ++h) {
    hm[h] = (size_t(h) < warm_start.size()) ? clamp(warm_start[h]) : uniform_theta();
    fv[h] = f(hm[h]);
  }

  auto best_worst = [&](int& ib, int& iw) {
    ib = iw = 0;
    for (int h = 1; h < p.hms; ++h) {
      if (fv[h] < fv[ib]) ib = h;
      if (fv[h] > fv[iw]) iw = h;
    }
  };

  double mu_hmcr = p.mu_hmcr, mu_par = p.mu_par;
  std::vector<double> acc_hmcr, acc_par;  // accepted-draw record, current period

  Result out;
  out.best_trace.reserve(p.ni);

  for (int r = 0; r < p.ni; ++r) {
    double hmcr = mu_hmcr + p.sigma_hmcr * std::normal_distribution<double>()(rng);
    double par = mu_par + p.sigma_par * std::normal_distribution<double>()(rng);
    hmcr = hmcr < 0.0 ? 0.0 : (hmcr > 1.0 ? 1.0 : hmcr);
    par = par < 0.0 ? 0.0 : (par > 1.0 ? 1.0 : par);

    int ib, iw;
    best_worst(ib, iw);

    double cand;
    if (unit(rng) < hmcr) {
      // memory consideration: perturb a random harmony within the bandwidth
      int h = std::uniform_int_distribution<int>(0, p.hms - 1)(rng);
      double step = unit(rng) * bw_at(r, p);
      bool up = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
      cand = clamp(hm[h] + (up ? step : -step));
      if (unit(rng) < par) cand = hm[ib];  // pitch toward the global best
    } else {
      cand = uniform_theta();
    }

    double fc = f(cand);
    if (fc < fv[iw]) {
      hm[iw] = cand;
      fv[iw] = fc;
      acc_hmcr.push_back(hmcr);
      acc_par.push_back(par);
    }

    // periodic self-adaptation: recenter the draw means on what worked
    if ((r + 1) % p.update_period == 0 && !acc_hmcr.empty()) {
      double sh = 0.0, sp = 0.0;
      for (double v : acc_hmcr) sh += v;
      for (double v : acc_par) sp += v;
      mu_hmcr = sh / acc_hmcr.size();
      mu_par = sp / acc_par.size();
      acc_hmcr.clear();
      acc_par.clear();
    }

    best_worst(ib, iw);
    out.best_trace.push_back(fv[ib]);
  }

  int ib, iw;
  best_worst(ib, iw);
  out.theta = hm[ib];
  out.value = fv[ib];
  return out;
}

}  // namespace lref::sghs
