#include "suffstat/family.hpp"

#include <cmath>

namespace suffstat {

std::size_t param_family::obs_cells() const {
  std::size_t n = 1;
  for (const auto& a : obs_axes) n *= a.size();
  return n;
}

std::span<const double> param_family::slice(std::size_t theta_index) const {
  const std::size_t n = obs_cells();
  return {cond.data() + theta_index * n, n};
}

joint_dist param_family::joint() const {
  std::vector<alphabet> axes;
  axes.push_back(theta);
  for (const auto& a : obs_axes) axes.push_back(a);

  std::vector<double> cells(cond.size());
  const std::size_t n = obs_cells();
  for (std::size_t t = 0; t < theta.size(); ++t)
    for (std::size_t i = 0; i < n; ++i)
      cells[t * n + i] = prior[t] * cond[t * n + i];
  return joint_dist::from_cells(std::move(axes), std::move(cells));
}

joint_dist param_family::joint_flat_obs(const std::string& obs_name) const {
  joint_dist j = joint();
  if (obs_axes.size() == 1) {
    std::vector<std::string> names{obs_axes[0].name};
    return j.flatten(names, obs_name);
  }
  std::vector<std::string> names;
  for (const auto& a : obs_axes) names.push_back(a.name);
  return j.flatten(names, obs_name);
}

alphabet param_family::flat_obs_alphabet(const std::string& obs_name) const {
  std::vector<std::string> symbols = obs_axes[0].symbols;
  for (std::size_t k = 1; k < obs_axes.size(); ++k) {
    std::vector<std::string> next;
    next.reserve(symbols.size() * obs_axes[k].size());
    for (const auto& s : symbols)
      for (const auto& u : obs_axes[k].symbols)
        next.push_back(join_symbols(s, u));
    symbols = std::move(next);
  }
  return alphabet(obs_name, std::move(symbols));
}

param_family build_family(alphabet theta, std::vector<double> prior,
                          std::vector<alphabet> obs_axes,
                          std::vector<double> cond) {
  if (obs_axes.empty())
    fail("SHAPE_MISMATCH", "family needs at least one observation axis");
  for (std::size_t i = 0; i < obs_axes.size(); ++i) {
    if (obs_axes[i].name == theta.name)
      fail("SHAPE_MISMATCH", "observation axis reuses the parameter name");
    for (std::size_t j = i + 1; j < obs_axes.size(); ++j)
      if (obs_axes[i].name == obs_axes[j].name)
        fail("SHAPE_MISMATCH",
             "duplicate observation axis '" + obs_axes[i].name + "'");
  }

  std::size_t n = 1;
  for (const auto& a : obs_axes) {
    if (n > kMaxCells / a.size())
      fail("CARD_TOO_LARGE", "axis product exceeds the dense-tensor cap");
    n *= a.size();
  }
  if (theta.size() != 0 && n > kMaxCells / theta.size())
    fail("CARD_TOO_LARGE", "axis product exceeds the dense-tensor cap");

  if (prior.size() != theta.size())
    fail("SHAPE_MISMATCH", "prior length does not match parameter alphabet");
  if (cond.size() != n * theta.size())
    fail("SHAPE_MISMATCH", "conditional table has " +
                               std::to_string(cond.size()) + " cells, expected " +
                               std::to_string(n * theta.size()));

  auto check_block = [](std::vector<double>& block, std::size_t off,
                        std::size_t len, const std::string& what) {
    double sum = 0.0;
    for (std::size_t i = off; i < off + len; ++i) {
      double& v = block[i];
      if (!std::isfinite(v)) fail("NONFINITE_INPUT", what + " has a non-finite entry");
      if (v < 0.0) {
        if (v < -1e-12) fail("NEGATIVE_PROB", what + " has a negative entry");
        v = 0.0;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kNormSlack)
      fail("NORMALIZATION", what + " sums to " + std::to_string(sum));
    if (sum != 1.0)
      for (std::size_t i = off; i < off + len; ++i) block[i] /= sum;
  };

  check_block(prior, 0, prior.size(), "prior");
  for (std::size_t t = 0; t < theta.size(); ++t)
    check_block(cond, t * n, n,
                "conditional slice for " + theta.symbols[t]);

  param_family f;
  f.theta = std::move(theta);
  f.prior = std::move(prior);
  f.obs_axes = std::move(obs_axes);
  f.cond = std::move(cond);
  return f;
}

}  // namespace suffstat
