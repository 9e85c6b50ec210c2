#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suffstat/family.hpp"

namespace suffstat {

// Density 2^n on { theta < x_i < theta+1, theta < y_i < x_i } and 0 outside.
// The candidate theta list must leave a nonempty common observation zone
// (max theta < min theta + 1).
struct triangle_config {
  int n = 2;
  std::vector<double> theta_values = {0.0, 1.0 / 6.0};
  std::uint64_t seed = 0;
};

struct triangle_report {
  long probes_equal_max = 0;   // shared y, equal max: ratio must be constant
  long probes_diff_max = 0;    // shared y, max straddling a support edge
  long probes_equal_min = 0;   // shared x, equal min-y (swapped direction)
  long probes_diff_min = 0;
  long mismatches = 0;
  bool pass = false;
  std::vector<std::string> notes;  // first few mismatch descriptions
};

// Seeded probe sampling inside the common support; verifies that the ratio
// p(x,y|theta)/p(x',y|theta) is constant across the candidate thetas exactly
// when max_i x_i agrees (and symmetrically min_i y_i with x shared).
// EMPTY_COMMON_SUPPORT when the theta list admits no common zone.
triangle_report triangle_ratio_check(const triangle_config& cfg,
                                     long num_probes);

// Center-indicator discretization on grid_points cells per coordinate of
// (0, max theta + 1): each theta slice is uniform over its alive (x, y)
// cells; samples are n i.i.d. coordinate pairs, so the axes are n-fold
// products. Used by the minimal-conditional-statistic checks and shipped as
// a model file.
param_family triangle_grid_family(int grid_points, int n,
                                  const std::vector<double>& theta_values);

}  // namespace suffstat
