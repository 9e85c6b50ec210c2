#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "suffstat/alphabet.hpp"
#include "suffstat/statistic.hpp"

namespace suffstat {

// Cells below this are treated as exact zeros in information sums and support
// comparisons.
inline constexpr double kZeroMass = 1e-15;
// Input normalization drift up to this is silently renormalized; beyond it the
// input is rejected.
inline constexpr double kNormSlack = 1e-9;
// Dense-tensor guard: product of axis sizes may not exceed this.
inline constexpr std::size_t kMaxCells = 10'000'000;

// Dense joint distribution over an ordered list of axes, row-major with the
// last axis fastest. Immutable after construction; all methods are pure.
class joint_dist {
 public:
  joint_dist() = default;

  // Validates shape, nonnegativity and normalization per the module contract.
  static joint_dist from_cells(std::vector<alphabet> axes,
                               std::vector<double> cells);

  const std::vector<alphabet>& axes() const { return axes_; }
  const alphabet& axis(std::size_t i) const { return axes_[i]; }
  std::size_t axis_index(const std::string& name) const;  // UNKNOWN_AXIS
  bool has_axis(const std::string& name) const;

  std::size_t num_cells() const { return p_.size(); }
  const std::vector<double>& cells() const { return p_; }
  double cell(const std::vector<std::size_t>& idx) const;

  std::vector<std::size_t> shape() const;
  std::vector<std::size_t> strides() const;

  // Sums out every axis not listed; axis order of the result follows this
  // distribution, not the keep list. EMPTY_AXIS_SET, UNKNOWN_AXIS.
  joint_dist marginal(const std::vector<std::string>& keep) const;

  // Renormalized slice over the remaining axes. ZERO_EVENT if P(axis=value)=0.
  joint_dist condition(const std::string& axis_name,
                       const std::string& symbol) const;

  // Appends a deterministic axis carrying t applied to an existing axis.
  joint_dist attach(const std::string& axis_name, const statistic& t,
                    const std::string& new_axis_name) const;

  // Replaces an axis by the statistic's class alphabet, summing merged
  // symbols. Mass is preserved exactly. DOMAIN_MISMATCH if t does not act on
  // the axis symbols.
  joint_dist push_forward(const std::string& axis_name, const statistic& t,
                          const std::string& new_axis_name) const;

  // Replaces a group of axes by one product axis (symbols joined with '|',
  // first listed axis slowest), placed at the first listed axis's position.
  joint_dist flatten(const std::vector<std::string>& axis_names,
                     const std::string& new_axis_name) const;

 private:
  std::vector<alphabet> axes_;
  std::vector<double> p_;
};

}  // namespace suffstat
