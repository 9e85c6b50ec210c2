#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace suffstat {

struct qam_point {
  double radius = 1.0;
  double phase = 0.0;   // irrelevant to the LR; kept for the simulator
  double prob = 1.0;
};

// k sensors observe x_i = h_i * S + N_i under H1 (h_i ~ CN(0, fading_var)
// i.i.d., S drawn from the constellation) and x_i = N_i under H0 with
// N_i ~ CN(0, noise_var). Marginalizing h_i makes x_i | S circularly
// symmetric, so the LR depends on the magnitudes only.
struct qam_config {
  int k = 1;
  std::vector<qam_point> constellation = {{1.0, 0.0, 1.0}};
  double noise_var = 1.0;
  double fading_var = 1.0;
  std::uint64_t seed = 0;
};

// Exact likelihood ratio p(x|H1)/p(x|H0), evaluated in the log domain.
// NONFINITE_INPUT on non-finite observations; LENGTH_MISMATCH unless
// x.size() == k.
double qam_lr(const qam_config& cfg, const std::vector<std::complex<double>>& x);

struct roc_row {
  double threshold = 0.0;
  double pfa_full = 0.0;   // thresholding the LR of the complex data
  double pd_full = 0.0;
  double pfa_mag = 0.0;    // thresholding the LR recomputed from magnitudes
  double pd_mag = 0.0;
};

// Paired simulation with common random numbers: per trial, both hypotheses
// are simulated on the trial's substream and both LR routes see the same
// observations. The full and magnitude columns must agree row by row.
std::vector<roc_row> qam_roc_compare(const qam_config& cfg, long trials,
                                     const std::vector<double>& thresholds);

}  // namespace suffstat
