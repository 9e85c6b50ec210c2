#include "suffstat/info.hpp"

#include <cmath>

#include "suffstat/error.hpp"

namespace suffstat {

namespace {

constexpr double kLog2 = 0.6931471805599453;  // ln 2

double log2_clamped(double x) { return std::log(x) / kLog2; }

// Per-axis routing for grouped sums: which group an axis belongs to and its
// stride inside that group's dense table.
struct routing {
  std::size_t na = 1, nb = 1, nc = 1;
  std::vector<int> group;                 // 0=A, 1=B, 2=C, 3=summed out
  std::vector<std::size_t> group_stride;
};

routing route_axes(const joint_dist& dist, const std::vector<std::string>& a,
                   const std::vector<std::string>& b,
                   const std::vector<std::string>& c) {
  routing r;
  r.group.assign(dist.axes().size(), 3);
  r.group_stride.assign(dist.axes().size(), 0);

  auto mark = [&](const std::vector<std::string>& names, int g) {
    for (const auto& n : names) {
      const std::size_t i = dist.axis_index(n);
      if (r.group[i] != 3)
        fail("AXIS_OVERLAP", "axis '" + n + "' appears in two groups");
      r.group[i] = g;
    }
  };
  mark(a, 0);
  mark(b, 1);
  mark(c, 2);

  // Row-major strides within each group, following the dist's axis order.
  std::size_t* sizes[3] = {&r.na, &r.nb, &r.nc};
  for (std::size_t i = dist.axes().size(); i-- > 0;) {
    const int g = r.group[i];
    if (g == 3) continue;
    r.group_stride[i] = *sizes[g];
    *sizes[g] *= dist.axis(i).size();
  }
  return r;
}

// Symbols of one group at a flattened group index, joined with '|'.
std::string group_symbol(const joint_dist& dist, const routing& r, int g,
                         std::size_t flat) {
  std::string out;
  for (std::size_t i = 0; i < dist.axes().size(); ++i) {
    if (r.group[i] != g) continue;
    const std::size_t coord = flat / r.group_stride[i] % dist.axis(i).size();
    if (!out.empty()) out += "|";
    out += dist.axis(i).symbols[coord];
  }
  return out;
}

struct cmi_tables {
  routing r;
  std::vector<double> pabc, pac, pbc, pc;
};

cmi_tables accumulate(const joint_dist& dist, const std::vector<std::string>& a,
                      const std::vector<std::string>& b,
                      const std::vector<std::string>& c) {
  if (a.empty() || b.empty())
    fail("EMPTY_AXIS_SET", "mutual information needs two nonempty groups");

  cmi_tables t;
  t.r = route_axes(dist, a, b, c);
  const auto& r = t.r;
  t.pabc.assign(r.na * r.nb * r.nc, 0.0);

  const auto shape = dist.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  const auto& cells = dist.cells();
  for (std::size_t flat = 0; flat < cells.size(); ++flat) {
    if (cells[flat] > 0.0) {
      std::size_t ia = 0, ib = 0, ic = 0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        switch (r.group[i]) {
          case 0: ia += idx[i] * r.group_stride[i]; break;
          case 1: ib += idx[i] * r.group_stride[i]; break;
          case 2: ic += idx[i] * r.group_stride[i]; break;
          default: break;
        }
      }
      t.pabc[(ia * r.nb + ib) * r.nc + ic] += cells[flat];
    }
    for (std::size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }

  t.pac.assign(r.na * r.nc, 0.0);
  t.pbc.assign(r.nb * r.nc, 0.0);
  t.pc.assign(r.nc, 0.0);
  for (std::size_t ia = 0; ia < r.na; ++ia)
    for (std::size_t ib = 0; ib < r.nb; ++ib)
      for (std::size_t ic = 0; ic < r.nc; ++ic) {
        const double p = t.pabc[(ia * r.nb + ib) * r.nc + ic];
        if (p <= kZeroMass) continue;
        t.pac[ia * r.nc + ic] += p;
        t.pbc[ib * r.nc + ic] += p;
        t.pc[ic] += p;
      }
  return t;
}

}  // namespace

double entropy_bits(const joint_dist& dist,
                    const std::vector<std::string>& axes) {
  const joint_dist m = dist.marginal(axes);
  double h = 0.0;
  for (double p : m.cells())
    if (p > kZeroMass) h -= p * log2_clamped(p);
  return h;
}

double cmi_bits(const joint_dist& dist, const std::vector<std::string>& a,
                const std::vector<std::string>& b,
                const std::vector<std::string>& c) {
  const cmi_tables t = accumulate(dist, a, b, c);
  const auto& r = t.r;
  double total = 0.0;
  for (std::size_t ia = 0; ia < r.na; ++ia)
    for (std::size_t ib = 0; ib < r.nb; ++ib)
      for (std::size_t ic = 0; ic < r.nc; ++ic) {
        const double p = t.pabc[(ia * r.nb + ib) * r.nc + ic];
        if (p <= kZeroMass) continue;
        total += p * log2_clamped(p * t.pc[ic] /
                                  (t.pac[ia * r.nc + ic] *
                                   t.pbc[ib * r.nc + ic]));
      }
  return total < 0.0 ? 0.0 : total;
}

markov_verdict check_markov(const joint_dist& dist,
                            const std::vector<std::string>& a,
                            const std::vector<std::string>& b,
                            const std::vector<std::string>& c,
                            double threshold_bits) {
  // Chain a - b - c holds iff I(a; c | b) vanishes.
  const cmi_tables t = accumulate(dist, a, c, b);
  const auto& r = t.r;
  double total = 0.0;
  double best = -1.0;
  std::size_t best_ia = 0, best_ib = 0, best_ic = 0;
  for (std::size_t ia = 0; ia < r.na; ++ia)
    for (std::size_t ib = 0; ib < r.nb; ++ib)
      for (std::size_t ic = 0; ic < r.nc; ++ic) {
        const double p = t.pabc[(ia * r.nb + ib) * r.nc + ic];
        if (p <= kZeroMass) continue;
        const double term = p * log2_clamped(p * t.pc[ic] /
                                             (t.pac[ia * r.nc + ic] *
                                              t.pbc[ib * r.nc + ic]));
        total += term;
        if (term > best) {
          best = term;
          best_ia = ia;
          best_ib = ib;
          best_ic = ic;
        }
      }

  markov_verdict v;
  v.cmi_bits = total < 0.0 ? 0.0 : total;
  v.threshold_bits = threshold_bits;
  v.holds = v.cmi_bits <= threshold_bits;
  if (!v.holds && best >= 0.0) {
    // accumulate() was called with groups (A, C, B) of the chain, so the
    // table's "b" slot holds the chain's C and vice versa.
    v.witness = markov_witness{group_symbol(dist, r, 0, best_ia),
                               group_symbol(dist, r, 2, best_ic),
                               group_symbol(dist, r, 1, best_ib), best};
  }
  return v;
}

}  // namespace suffstat
