#include "suffstat/qam_example.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suffstat/error.hpp"
#include "suffstat/rng.hpp"

namespace suffstat {

namespace {

void validate(const qam_config& cfg) {
  if (cfg.k < 1) fail("SHAPE_MISMATCH", "sensor count must be at least 1");
  if (cfg.constellation.empty())
    fail("SHAPE_MISMATCH", "constellation must be nonempty");
  if (!std::isfinite(cfg.noise_var) || cfg.noise_var <= 0.0 ||
      !std::isfinite(cfg.fading_var) || cfg.fading_var <= 0.0)
    fail("NONFINITE_INPUT", "variances must be finite and positive");
  double total = 0.0;
  for (const auto& p : cfg.constellation) {
    if (!std::isfinite(p.radius) || p.radius < 0.0 || !std::isfinite(p.phase))
      fail("NONFINITE_INPUT", "constellation point");
    if (p.prob < 0.0) fail("NEGATIVE_PROB", "constellation probability");
    total += p.prob;
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail("NORMALIZATION", "constellation probabilities sum to " +
                              std::to_string(total));
}

// The per-point likelihood ratio term depends on the data only through the
// total energy: each x_i | s_m is CN(0, r_m^2 fading_var + noise_var), so
// log term_m = log pi_m + k log(s2/g_m) + energy (1/s2 - 1/g_m).
double lr_from_energy(const qam_config& cfg, double energy) {
  const double s2 = cfg.noise_var;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(cfg.constellation.size());
  for (std::size_t m = 0; m < cfg.constellation.size(); ++m) {
    const auto& pt = cfg.constellation[m];
    const double g = pt.radius * pt.radius * cfg.fading_var + s2;
    logs[m] = (pt.prob > 0.0 ? std::log(pt.prob)
                             : -std::numeric_limits<double>::infinity()) +
              static_cast<double>(cfg.k) * std::log(s2 / g) +
              energy * (1.0 / s2 - 1.0 / g);
    best = std::max(best, logs[m]);
  }
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - best);
  return std::exp(best) * sum;
}

}  // namespace

double qam_lr(const qam_config& cfg,
              const std::vector<std::complex<double>>& x) {
  validate(cfg);
  if (x.size() != static_cast<std::size_t>(cfg.k))
    fail("LENGTH_MISMATCH",
         "expected " + std::to_string(cfg.k) + " observations");
  double energy = 0.0;
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail("NONFINITE_INPUT", "observation");
    energy += std::norm(v);
  }
  return lr_from_energy(cfg, energy);
}

std::vector<roc_row> qam_roc_compare(const qam_config& cfg, long trials,
                                     const std::vector<double>& thresholds) {
  validate(cfg);
  if (trials < 1) fail("SHAPE_MISMATCH", "trial count must be at least 1");
  for (double t : thresholds)
    if (!std::isfinite(t)) fail("NONFINITE_INPUT", "threshold");

  std::vector<roc_row> table(thresholds.size());
  for (std::size_t r = 0; r < thresholds.size(); ++r)
    table[r].threshold = thresholds[r];

  std::vector<std::complex<double>> h0(static_cast<std::size_t>(cfg.k));
  std::vector<std::complex<double>> h1(static_cast<std::size_t>(cfg.k));
  for (long trial = 0; trial < trials; ++trial) {
    rng_stream g(cfg.seed, static_cast<std::uint64_t>(trial));
    for (auto& v : h0) v = g.cnormal(cfg.noise_var);

    double pick = g.uniform01();
    std::size_t m = 0;
    for (; m + 1 < cfg.constellation.size(); ++m) {
      pick -= cfg.constellation[m].prob;
      if (pick <= 0.0) break;
    }
    const std::complex<double> s =
        std::polar(cfg.constellation[m].radius, cfg.constellation[m].phase);
    for (auto& v : h1) v = g.cnormal(cfg.fading_var) * s + g.cnormal(cfg.noise_var);

    // Full route sees the complex samples; the reduced route is handed the
    // magnitudes alone and rebuilds the energy from them.
    auto energy_full = [](const std::vector<std::complex<double>>& xs) {
      double e = 0.0;
      for (const auto& v : xs) e += std::norm(v);
      return e;
    };
    auto energy_mag = [](const std::vector<std::complex<double>>& xs) {
      double e = 0.0;
      for (const auto& v : xs) {
        const double mag = std::abs(v);
        e += mag * mag;
      }
      return e;
    };
    const double lr_full_h0 = lr_from_energy(cfg, energy_full(h0));
    const double lr_full_h1 = lr_from_energy(cfg, energy_full(h1));
    const double lr_mag_h0 = lr_from_energy(cfg, energy_mag(h0));
    const double lr_mag_h1 = lr_from_energy(cfg, energy_mag(h1));

    for (std::size_t r = 0; r < thresholds.size(); ++r) {
      const double tau = thresholds[r];
      table[r].pfa_full += lr_full_h0 > tau ? 1.0 : 0.0;
      table[r].pd_full += lr_full_h1 > tau ? 1.0 : 0.0;
      table[r].pfa_mag += lr_mag_h0 > tau ? 1.0 : 0.0;
      table[r].pd_mag += lr_mag_h1 > tau ? 1.0 : 0.0;
    }
  }
  for (auto& row : table) {
    row.pfa_full /= static_cast<double>(trials);
    row.pd_full /= static_cast<double>(trials);
    row.pfa_mag /= static_cast<double>(trials);
    row.pd_mag /= static_cast<double>(trials);
  }
  return table;
}

}  // namespace suffstat
