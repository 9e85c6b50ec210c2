#include "suffstat/joint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace suffstat {

namespace {

std::vector<std::size_t> shape_of(const std::vector<alphabet>& axes) {
  std::vector<std::size_t> s(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) s[i] = axes[i].size();
  return s;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> st(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;)
    st[i - 1] = st[i] * shape[i];
  return st;
}

std::size_t checked_cell_count(const std::vector<alphabet>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.size() != 0 && n > kMaxCells / a.size())
      fail("CARD_TOO_LARGE", "axis product exceeds the dense-tensor cap");
    n *= a.size();
  }
  return n;
}

}  // namespace

joint_dist joint_dist::from_cells(std::vector<alphabet> axes,
                                  std::vector<double> cells) {
  if (axes.empty()) fail("SHAPE_MISMATCH", "joint needs at least one axis");
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (axes[i].name == axes[j].name)
        fail("SHAPE_MISMATCH", "duplicate axis name '" + axes[i].name + "'");

  const std::size_t want = checked_cell_count(axes);
  if (cells.size() != want)
    fail("SHAPE_MISMATCH", "cell count " + std::to_string(cells.size()) +
                               " does not match axis product " +
                               std::to_string(want));

  double sum = 0.0;
  for (double& v : cells) {
    if (!std::isfinite(v)) fail("NONFINITE_INPUT", "non-finite probability cell");
    if (v < 0.0) {
      // Arithmetic residue is forgiven; real negative mass is not.
      if (v < -1e-12) fail("NEGATIVE_PROB", "negative probability cell");
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormSlack)
    fail("NORMALIZATION",
         "cells sum to " + std::to_string(sum) + ", expected 1");
  if (sum != 1.0)
    for (double& v : cells) v /= sum;

  joint_dist d;
  d.axes_ = std::move(axes);
  d.p_ = std::move(cells);
  return d;
}

std::size_t joint_dist::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].name == name) return i;
  fail("UNKNOWN_AXIS", "no axis named '" + name + "'");
}

bool joint_dist::has_axis(const std::string& name) const {
  for (const auto& a : axes_)
    if (a.name == name) return true;
  return false;
}

std::vector<std::size_t> joint_dist::shape() const { return shape_of(axes_); }

std::vector<std::size_t> joint_dist::strides() const {
  return strides_of(shape_of(axes_));
}

double joint_dist::cell(const std::vector<std::size_t>& idx) const {
  if (idx.size() != axes_.size())
    fail("SHAPE_MISMATCH", "index rank does not match axis count");
  const auto st = strides();
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) flat += idx[i] * st[i];
  return p_[flat];
}

joint_dist joint_dist::marginal(const std::vector<std::string>& keep) const {
  if (keep.empty()) fail("EMPTY_AXIS_SET", "marginal needs at least one axis");
  std::vector<bool> keep_mask(axes_.size(), false);
  for (const auto& name : keep) keep_mask[axis_index(name)] = true;

  std::vector<alphabet> new_axes;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (keep_mask[i]) new_axes.push_back(axes_[i]);
  if (new_axes.size() == axes_.size()) {
    joint_dist d;
    d.axes_ = axes_;
    d.p_ = p_;
    return d;
  }

  const auto shape = shape_of(axes_);
  const auto new_shape = shape_of(new_axes);
  const auto new_strides = strides_of(new_shape);
  std::vector<std::size_t> reduced_stride(axes_.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (keep_mask[i]) reduced_stride[i] = new_strides[k++];

  std::vector<double> out(
      std::accumulate(new_shape.begin(), new_shape.end(), std::size_t{1},
                      std::multiplies<>()),
      0.0);
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i)
      target += idx[i] * reduced_stride[i];
    out[target] += p_[flat];
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  joint_dist d;
  d.axes_ = std::move(new_axes);
  d.p_ = std::move(out);
  return d;
}

joint_dist joint_dist::condition(const std::string& axis_name,
                                 const std::string& symbol) const {
  const std::size_t ax = axis_index(axis_name);
  const std::size_t v = axes_[ax].index_of(symbol);
  const auto shape = shape_of(axes_);

  std::vector<alphabet> new_axes;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (i != ax) new_axes.push_back(axes_[i]);
  if (new_axes.empty())
    fail("SHAPE_MISMATCH", "conditioning would remove the last axis");

  std::vector<double> out;
  out.reserve(p_.size() / shape[ax]);
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    if (idx[ax] == v) out.push_back(p_[flat]);
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  const double mass = std::accumulate(out.begin(), out.end(), 0.0);
  if (mass <= kZeroMass)
    fail("ZERO_EVENT", "conditioning on zero-probability value '" + symbol +
                           "' of axis '" + axis_name + "'");
  for (double& x : out) x /= mass;

  joint_dist d;
  d.axes_ = std::move(new_axes);
  d.p_ = std::move(out);
  return d;
}

joint_dist joint_dist::attach(const std::string& axis_name, const statistic& t,
                              const std::string& new_axis_name) const {
  const std::size_t ax = axis_index(axis_name);
  if (t.domain().symbols != axes_[ax].symbols)
    fail("DOMAIN_MISMATCH", "statistic domain does not match axis '" +
                                axis_name + "'");

  std::vector<alphabet> new_axes = axes_;
  new_axes.push_back(t.class_alphabet(new_axis_name));
  checked_cell_count(new_axes);

  const auto shape = shape_of(axes_);
  const std::size_t nc = static_cast<std::size_t>(t.num_classes());
  std::vector<double> out(p_.size() * nc, 0.0);
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    out[flat * nc + static_cast<std::size_t>(t.label(idx[ax]))] = p_[flat];
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  joint_dist d;
  d.axes_ = std::move(new_axes);
  d.p_ = std::move(out);
  return d;
}

joint_dist joint_dist::push_forward(const std::string& axis_name,
                                    const statistic& t,
                                    const std::string& new_axis_name) const {
  const std::size_t ax = axis_index(axis_name);
  if (t.domain().symbols != axes_[ax].symbols)
    fail("DOMAIN_MISMATCH", "statistic domain does not match axis '" +
                                axis_name + "'");

  std::vector<alphabet> new_axes = axes_;
  new_axes[ax] = t.class_alphabet(new_axis_name);

  const auto shape = shape_of(axes_);
  auto new_shape = shape;
  new_shape[ax] = static_cast<std::size_t>(t.num_classes());
  const auto new_strides = strides_of(new_shape);

  std::vector<double> out(
      std::accumulate(new_shape.begin(), new_shape.end(), std::size_t{1},
                      std::multiplies<>()),
      0.0);
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      const std::size_t coord =
          (i == ax) ? static_cast<std::size_t>(t.label(idx[i])) : idx[i];
      target += coord * new_strides[i];
    }
    out[target] += p_[flat];
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  joint_dist d;
  d.axes_ = std::move(new_axes);
  d.p_ = std::move(out);
  return d;
}

joint_dist joint_dist::flatten(const std::vector<std::string>& axis_names,
                               const std::string& new_axis_name) const {
  if (axis_names.empty()) fail("EMPTY_AXIS_SET", "flatten needs axes");
  std::vector<std::size_t> group;
  for (const auto& n : axis_names) group.push_back(axis_index(n));
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j)
      if (group[i] == group[j])
        fail("AXIS_OVERLAP", "axis listed twice in flatten");

  if (group.size() == 1) {
    joint_dist d;
    d.axes_ = axes_;
    d.axes_[group[0]].name = new_axis_name;
    d.p_ = p_;
    return d;
  }

  // Product symbols in the listed order, first axis slowest.
  std::vector<std::string> symbols;
  {
    symbols = axes_[group[0]].symbols;
    for (std::size_t g = 1; g < group.size(); ++g) {
      std::vector<std::string> next;
      next.reserve(symbols.size() * axes_[group[g]].size());
      for (const auto& s : symbols)
        for (const auto& u : axes_[group[g]].symbols)
          next.push_back(join_symbols(s, u));
      symbols = std::move(next);
    }
  }
  alphabet flat_axis(new_axis_name, std::move(symbols));

  std::vector<bool> in_group(axes_.size(), false);
  for (std::size_t g : group) in_group[g] = true;

  std::vector<alphabet> new_axes;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (i == group[0])
      new_axes.push_back(flat_axis);
    else if (!in_group[i])
      new_axes.push_back(axes_[i]);
  }

  // Position of each old axis in the new layout, with the group mapping to
  // sub-strides of the flat axis.
  const auto shape = shape_of(axes_);
  const auto new_shape = shape_of(new_axes);
  const auto new_strides = strides_of(new_shape);

  std::size_t flat_pos = 0;
  for (std::size_t i = 0; i < group[0]; ++i)
    if (!in_group[i]) ++flat_pos;

  std::vector<std::size_t> target_stride(axes_.size(), 0);
  {
    // Within the flat axis, listed order, last listed fastest.
    std::size_t sub = 1;
    for (std::size_t g = group.size(); g-- > 0;) {
      target_stride[group[g]] = sub * new_strides[flat_pos];
      sub *= shape[group[g]];
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      if (in_group[i]) continue;
      if (k == flat_pos) ++k;
      target_stride[i] = new_strides[k++];
    }
  }

  std::vector<double> out(p_.size(), 0.0);
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i)
      target += idx[i] * target_stride[i];
    out[target] = p_[flat];
    for (std::size_t i = axes_.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  joint_dist d;
  d.axes_ = std::move(new_axes);
  d.p_ = std::move(out);
  return d;
}

}  // namespace suffstat
