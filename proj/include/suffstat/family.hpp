#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "suffstat/joint.hpp"

namespace suffstat {

// Parametric family: prior over a finite parameter plus one conditional
// observation tensor per parameter value. The prior feeds the CMI-based
// checks; the ratio-based constructions read only the conditional slices.
struct param_family {
  alphabet theta;
  std::vector<double> prior;        // length theta.size()
  std::vector<alphabet> obs_axes;
  std::vector<double> cond;         // [theta][obs...] row-major, slices sum to 1

  std::size_t obs_cells() const;
  std::span<const double> slice(std::size_t theta_index) const;

  // p(theta, obs...) = prior x cond, theta axis first.
  joint_dist joint() const;

  // All observation axes flattened to one product axis (no-op for one axis).
  joint_dist joint_flat_obs(const std::string& obs_name = "obs") const;
  alphabet flat_obs_alphabet(const std::string& obs_name = "obs") const;
};

// Validates and assembles a family. NEGATIVE_PROB, NORMALIZATION (drift beyond
// 1e-9; smaller drift renormalized), SHAPE_MISMATCH, DUPLICATE_SYMBOL.
param_family build_family(alphabet theta, std::vector<double> prior,
                          std::vector<alphabet> obs_axes,
                          std::vector<double> cond);

}  // namespace suffstat
