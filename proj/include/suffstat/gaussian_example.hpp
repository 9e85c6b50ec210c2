#pragma once

#include <cstdint>
#include <span>

namespace suffstat {

// Linear-Gaussian network: theta ~ N(prior_mean, prior_var), Z | theta ~
// N(theta, rho), X_i = Z + U_i and Y_i = Z + V_i with U_i, V_i ~ N(0, 1-rho)
// all independent. Marginally X_i | theta ~ N(theta, 1) with correlation rho
// between X_i and Y_i through the shared Z.
struct gaussian_config {
  int n = 1;
  double rho = 0.5;          // in (0, 1)
  double prior_mean = 0.0;
  double prior_var = 1.0;    // > 0
  std::uint64_t seed = 0;
};

struct posterior_moments {
  double mean = 0.0;
  double var = 0.0;
};

enum class gaussian_route { full, reduced };

// Exact posterior of theta. full conditions on all 2n observations via
// sequential updates of the (theta, Z) state; reduced conditions only on the
// pair of sums (a 2x2 solve). LENGTH_MISMATCH if the sample vectors are not
// length n; NONFINITE_INPUT on non-finite data or invalid config.
posterior_moments gaussian_posterior(const gaussian_config& cfg,
                                     std::span<const double> x,
                                     std::span<const double> y,
                                     gaussian_route route);

struct gaussian_mc_result {
  double mse_full = 0.0;
  double mse_reduced = 0.0;
  double gap = 0.0;          // mse_full - mse_reduced
  double gap_se = 0.0;       // standard error of the paired per-trial gap
  long trials = 0;
};

// Seeded paired simulation; trial i uses substream i, so both routes see the
// same draws and the reported gap is a paired comparison.
gaussian_mc_result gaussian_mc_mse(const gaussian_config& cfg, long trials);

}  // namespace suffstat
