#include "suffstat/sufficiency.hpp"

#include <algorithm>
#include <cmath>

namespace suffstat {

namespace {

std::string fresh_name(const joint_dist& d, std::string base) {
  while (d.has_axis(base)) base += "_";
  return base;
}

bool any_mass(std::span<const double> v) {
  for (double x : v)
    if (x > kZeroMass) return true;
  return false;
}

// Identical support and a single proportionality constant, compared by
// cross-multiplication so no division is involved.
bool proportional(std::span<const double> a, std::span<const double> b) {
  std::size_t anchor = a.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const bool za = a[k] <= kZeroMass;
    const bool zb = b[k] <= kZeroMass;
    if (za != zb) return false;
    if (!za && anchor == a.size()) anchor = k;
  }
  if (anchor == a.size()) return true;  // both all-zero
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= kZeroMass) continue;
    const double lhs = a[k] * b[anchor];
    const double rhs = b[k] * a[anchor];
    if (std::abs(lhs - rhs) > kRatioRelTol * std::max(lhs, rhs)) return false;
  }
  return true;
}

}  // namespace

markov_verdict is_sufficient(const param_family& fam, const statistic& t,
                             double threshold_bits) {
  if (fam.obs_axes.size() == 1 &&
      t.domain().symbols == fam.obs_axes[0].symbols) {
    joint_dist j = fam.joint();
    const std::string tname = fresh_name(j, "T");
    j = j.attach(fam.obs_axes[0].name, t, tname);
    return check_markov(j, {fam.theta.name}, {tname},
                        {fam.obs_axes[0].name}, threshold_bits);
  }

  const alphabet flat = fam.flat_obs_alphabet("obs");
  if (t.domain().symbols != flat.symbols)
    fail("DOMAIN_MISMATCH",
         "statistic domain does not match the observation product");
  joint_dist j = fam.joint_flat_obs(fresh_name(fam.joint(), "obs"));
  const std::string obs_name = j.axis(1).name;
  const std::string tname = fresh_name(j, "T");
  j = j.attach(obs_name, t, tname);
  return check_markov(j, {fam.theta.name}, {tname}, {obs_name},
                      threshold_bits);
}

markov_verdict is_conditionally_sufficient(const param_family& fam,
                                           const statistic& t,
                                           const std::string& x_axis,
                                           const std::string& y_axis,
                                           double threshold_bits) {
  joint_dist j = fam.joint();
  const std::string tname = fresh_name(j, "T");
  j = j.attach(x_axis, t, tname);
  return check_markov(j, {fam.theta.name}, {tname, y_axis}, {x_axis},
                      threshold_bits);
}

std::vector<int> group_proportional_rows(
    const std::vector<std::vector<double>>& rows) {
  std::vector<int> labels(rows.size(), -1);
  std::vector<std::size_t> reps;  // first member of each class
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!any_mass(rows[i])) continue;  // null class, resolved below
    int assigned = -1;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if (proportional(rows[i], rows[reps[c]])) {
        assigned = static_cast<int>(c);
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(reps.size());
      reps.push_back(i);
    }
    labels[i] = assigned;
  }
  const int null_class = static_cast<int>(reps.size());
  for (int& l : labels)
    if (l < 0) l = null_class;
  return labels;
}

statistic minimal_sufficient(const param_family& fam) {
  const std::size_t n = fam.obs_cells();
  std::vector<std::vector<double>> rows(n,
                                        std::vector<double>(fam.theta.size()));
  for (std::size_t t = 0; t < fam.theta.size(); ++t) {
    const auto s = fam.slice(t);
    for (std::size_t i = 0; i < n; ++i) rows[i][t] = s[i];
  }
  const std::vector<int> labels = group_proportional_rows(rows);
  alphabet domain = fam.obs_axes.size() == 1 ? fam.obs_axes[0]
                                             : fam.flat_obs_alphabet("obs");
  return statistic::from_labels(std::move(domain), labels);
}

namespace {

// Layout helper: cond cell index for (theta, x, y) honoring the declared
// observation-axis order.
struct xy_view {
  std::size_t nx, ny, nt;
  std::size_t stride_x, stride_y;

  xy_view(const param_family& fam, const std::string& x_axis,
          const std::string& y_axis) {
    if (fam.obs_axes.size() != 2)
      fail("SHAPE_MISMATCH",
           "conditional-sufficiency operations need exactly two observation "
           "axes");
    const bool x_first = fam.obs_axes[0].name == x_axis;
    const std::string& first = fam.obs_axes[0].name;
    const std::string& second = fam.obs_axes[1].name;
    if ((x_first && second != y_axis) ||
        (!x_first && (first != y_axis || second != x_axis)))
      fail("UNKNOWN_AXIS", "axes '" + x_axis + "', '" + y_axis +
                               "' do not name the observation axes");
    const std::size_t n0 = fam.obs_axes[0].size();
    const std::size_t n1 = fam.obs_axes[1].size();
    nx = x_first ? n0 : n1;
    ny = x_first ? n1 : n0;
    nt = fam.theta.size();
    stride_x = x_first ? n1 : 1;
    stride_y = x_first ? 1 : n0;
  }

  double at(const param_family& fam, std::size_t t, std::size_t x,
            std::size_t y) const {
    return fam.cond[t * nx * ny + x * stride_x + y * stride_y];
  }
};

// Per-y compatibility for the conditional minimal statistic: a y where either
// point carries no mass at any theta imposes no constraint.
bool conditionally_compatible(const param_family& fam, const xy_view& v,
                              std::size_t xa, std::size_t xb) {
  std::vector<double> va(v.nt), vb(v.nt);
  for (std::size_t y = 0; y < v.ny; ++y) {
    for (std::size_t t = 0; t < v.nt; ++t) {
      va[t] = v.at(fam, t, xa, y);
      vb[t] = v.at(fam, t, xb, y);
    }
    if (!any_mass(va) || !any_mass(vb)) continue;
    if (!proportional(va, vb)) return false;
  }
  return true;
}

}  // namespace

statistic minimal_conditional_sufficient(const param_family& fam,
                                         const std::string& x_axis,
                                         const std::string& y_axis) {
  const xy_view v(fam, x_axis, y_axis);

  std::vector<bool> alive(v.nx, false);
  for (std::size_t x = 0; x < v.nx; ++x)
    for (std::size_t t = 0; t < v.nt && !alive[x]; ++t)
      for (std::size_t y = 0; y < v.ny; ++y)
        if (v.at(fam, t, x, y) > kZeroMass) {
          alive[x] = true;
          break;
        }

  // Greedy in domain order; a candidate must match every member, because the
  // vacuous-y rule makes pairwise compatibility intransitive.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<int> labels(v.nx, -1);
  for (std::size_t x = 0; x < v.nx; ++x) {
    if (!alive[x]) continue;
    int assigned = -1;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      bool ok = true;
      for (std::size_t m : classes[c])
        if (!conditionally_compatible(fam, v, x, m)) {
          ok = false;
          break;
        }
      if (ok) {
        assigned = static_cast<int>(c);
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(assigned)].push_back(x);
    labels[x] = assigned;
  }
  const int null_class = static_cast<int>(classes.size());
  for (int& l : labels)
    if (l < 0) l = null_class;

  const alphabet& domain =
      fam.obs_axes[0].name == x_axis ? fam.obs_axes[0] : fam.obs_axes[1];
  return statistic::from_labels(domain, labels);
}

bool conditional_ratio_test(const param_family& fam, const statistic& t,
                            const std::string& x_axis,
                            const std::string& y_axis) {
  const xy_view v(fam, x_axis, y_axis);
  const alphabet& domain =
      fam.obs_axes[0].name == x_axis ? fam.obs_axes[0] : fam.obs_axes[1];
  if (t.domain().symbols != domain.symbols)
    fail("DOMAIN_MISMATCH", "statistic domain does not match axis '" +
                                x_axis + "'");
  for (std::size_t xa = 0; xa < v.nx; ++xa)
    for (std::size_t xb = xa + 1; xb < v.nx; ++xb) {
      if (t.label(xa) != t.label(xb)) continue;
      if (!conditionally_compatible(fam, v, xa, xb)) return false;
    }
  return true;
}

joint_dist hci_model::joint() const {
  std::vector<alphabet> axes;
  axes.push_back(family.theta);
  axes.push_back(w);
  for (const auto& a : family.obs_axes) axes.push_back(a);

  const std::size_t nt = family.theta.size();
  const std::size_t nw = w.size();
  const std::size_t nobs = family.obs_cells();
  std::vector<double> cells(nt * nw * nobs);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t iw = 0; iw < nw; ++iw)
      for (std::size_t o = 0; o < nobs; ++o)
        cells[(t * nw + iw) * nobs + o] = family.prior[t] *
                                          p_w_given_theta[t * nw + iw] *
                                          p_obs_given_w[iw * nobs + o];
  return joint_dist::from_cells(std::move(axes), std::move(cells));
}

hci_model make_hci(param_family fam, alphabet w,
                   std::vector<double> p_w_given_theta,
                   std::vector<double> p_obs_given_w) {
  const std::size_t nt = fam.theta.size();
  const std::size_t nw = w.size();
  const std::size_t nobs = fam.obs_cells();
  if (p_w_given_theta.size() != nt * nw)
    fail("SHAPE_MISMATCH", "p(w|theta) shape mismatch");
  if (p_obs_given_w.size() != nw * nobs)
    fail("SHAPE_MISMATCH", "p(obs|w) shape mismatch");

  auto check_rows = [](const std::vector<double>& m, std::size_t rows,
                       std::size_t cols, const std::string& what) {
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double v = m[r * cols + c];
        if (!std::isfinite(v)) fail("NONFINITE_INPUT", what);
        if (v < 0.0) fail("NEGATIVE_PROB", what + " has a negative entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        fail("NORMALIZATION", what + " row " + std::to_string(r) +
                                  " sums to " + std::to_string(sum));
    }
  };
  check_rows(p_w_given_theta, nt, nw, "p(w|theta)");
  check_rows(p_obs_given_w, nw, nobs, "p(obs|w)");

  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t o = 0; o < nobs; ++o) {
      double composed = 0.0;
      for (std::size_t iw = 0; iw < nw; ++iw)
        composed += p_w_given_theta[t * nw + iw] * p_obs_given_w[iw * nobs + o];
      if (std::abs(composed - fam.cond[t * nobs + o]) > 1e-9)
        fail("COMPOSITION_MISMATCH",
             "channels do not reproduce the family conditional");
    }

  hci_model h;
  h.family = std::move(fam);
  h.w = std::move(w);
  h.p_w_given_theta = std::move(p_w_given_theta);
  h.p_obs_given_w = std::move(p_obs_given_w);
  return h;
}

std::pair<markov_verdict, markov_verdict> verify_hci(const hci_model& h,
                                                     double threshold_bits) {
  if (h.family.obs_axes.size() != 2)
    fail("SHAPE_MISMATCH", "verify_hci needs exactly two observation axes");
  const joint_dist j = h.joint();
  std::vector<std::string> obs_names;
  for (const auto& a : h.family.obs_axes) obs_names.push_back(a.name);

  markov_verdict chain_theta = check_markov(
      j, {h.family.theta.name}, {h.w.name}, obs_names, threshold_bits);
  markov_verdict chain_obs = check_markov(j, {obs_names[0]}, {h.w.name},
                                          {obs_names[1]}, threshold_bits);
  return {chain_theta, chain_obs};
}

theorem1_report theorem1_check(const hci_model& h, const statistic& tw,
                               const statistic& tx, const statistic& ty,
                               double threshold_bits) {
  if (h.family.obs_axes.size() != 2)
    fail("SHAPE_MISMATCH", "theorem1_check needs exactly two observation axes");
  const std::string& xn = h.family.obs_axes[0].name;
  const std::string& yn = h.family.obs_axes[1].name;
  const std::string& thn = h.family.theta.name;
  const std::string& wn = h.w.name;

  joint_dist j = h.joint();
  const std::string twn = fresh_name(j, "TW");
  j = j.attach(wn, tw, twn);
  const std::string txn = fresh_name(j, "TX");
  j = j.attach(xn, tx, txn);
  const std::string tyn = fresh_name(j, "TY");
  j = j.attach(yn, ty, tyn);

  theorem1_report r;
  r.tw_sufficient_for_w = check_markov(j, {thn}, {twn}, {wn}, threshold_bits);
  r.induced_independence = check_markov(j, {xn}, {twn}, {yn}, threshold_bits);
  r.tx_local = check_markov(j, {twn}, {txn}, {xn}, threshold_bits);
  r.ty_local = check_markov(j, {twn}, {tyn}, {yn}, threshold_bits);
  r.conclusion = check_markov(j, {thn}, {txn, tyn}, {xn, yn}, threshold_bits);
  return r;
}

theorem2_report theorem2_check(const param_family& fam, const statistic& tx,
                               const statistic& ty, const std::string& x_axis,
                               const std::string& y_axis,
                               double threshold_bits) {
  const xy_view v(fam, x_axis, y_axis);
  theorem2_report r;

  {
    joint_dist m = fam.joint().marginal({fam.theta.name, y_axis});
    const std::string tyn = fresh_name(m, "TY");
    m = m.attach(y_axis, ty, tyn);
    r.ty_precondition =
        check_markov(m, {fam.theta.name}, {tyn}, {y_axis}, threshold_bits);
    if (!r.ty_precondition.holds)
      fail("PRECONDITION_FAILED",
           "ty is not locally sufficient for the Y marginal (cmi = " +
               std::to_string(r.ty_precondition.cmi_bits) + " bits)");
  }

  {
    joint_dist j = fam.joint();
    const std::string txn = fresh_name(j, "TX");
    j = j.attach(x_axis, tx, txn);
    const std::string tyn = fresh_name(j, "TY");
    j = j.attach(y_axis, ty, tyn);
    r.direct = check_markov(j, {fam.theta.name}, {txn, tyn}, {x_axis, y_axis},
                            threshold_bits);
  }

  // Factorization p(x,y|theta) = g(tx,ty,theta) h(x,y) holds iff inside every
  // (tx-class, ty-class) block the theta-vectors of all carried cells are
  // proportional with one support pattern.
  r.factorization = true;
  for (int a = 0; a < tx.num_classes() && r.factorization; ++a)
    for (int b = 0; b < ty.num_classes() && r.factorization; ++b) {
      std::vector<std::vector<double>> block;
      for (std::size_t x = 0; x < v.nx; ++x) {
        if (tx.label(x) != a) continue;
        for (std::size_t y = 0; y < v.ny; ++y) {
          if (ty.label(y) != b) continue;
          std::vector<double> row(v.nt);
          for (std::size_t t = 0; t < v.nt; ++t) row[t] = v.at(fam, t, x, y);
          block.push_back(std::move(row));
        }
      }
      if (block.empty()) continue;
      const std::vector<int> labels = group_proportional_rows(block);
      int carried_classes = 0;
      for (std::size_t i = 0; i < block.size(); ++i)
        if (any_mass(block[i]))
          carried_classes = std::max(carried_classes, labels[i] + 1);
      if (carried_classes > 1) r.factorization = false;
    }

  r.agree = r.direct.holds == r.factorization;
  return r;
}

}  // namespace suffstat
