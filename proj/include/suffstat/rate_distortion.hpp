#pragma once

#include <string>
#include <vector>

#include "suffstat/source_coding.hpp"
#include "suffstat/statistic.hpp"

namespace suffstat {

struct rd_point {
  double target_d = 0.0;
  double achieved_d = 0.0;
  double rate_bits = 0.0;
  double slope = 0.0;        // Lagrange multiplier (nats per distortion unit)
  int iterations = 0;
  bool converged = false;    // NO_CONVERGENCE stays a flag, never an exception
};

struct rd_curve {
  double d_min = 0.0;        // distortion floor at unbounded rate
  double d_max = 0.0;        // distortion of the best zero-rate reproduction
  std::vector<rd_point> points;
};

// Remote rate-distortion with side information at encoder and decoder:
// R(D) = min I(X;U|Y) subject to E d(Z, f(U,Y)) <= D, solved per y on the
// modified distortion d_y(x, zhat) = E[d(Z, zhat) | x, y] by alternating
// minimization at a common slope, bisected to meet each target D.
// Grid points below d_min - tol raise PRECONDITION_FAILED; points at or above
// d_max return rate 0.
rd_curve conditional_remote_rd(const source_model& m,
                               const std::vector<double>& d_grid, double tol);

struct rd_equality_report {
  rd_curve full;
  rd_curve reduced;          // same targets on the aggregated (T(X), Y, Z) model
  double max_gap_bits = 0.0;
};

// PRECONDITION_FAILED unless Z - (T(X), Y) - X holds at the threshold.
rd_equality_report rd_equality_check(const source_model& m, const statistic& t,
                                     const std::vector<double>& d_grid,
                                     double tol,
                                     double threshold_bits = 1e-9);

}  // namespace suffstat
