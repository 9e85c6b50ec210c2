#include "suffstat/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suffstat/info.hpp"

namespace suffstat {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr int kInnerCap = 5000;

// Everything the alternating minimization needs, precomputed once: for each
// side-information value y with mass, the conditional source p(x|y) over the
// x values alive under that y, and the distortion seen through the target
// variable, dbar[x][zhat] = sum_z p(z|x,y) d(z,zhat).
struct prepared {
  std::size_t nzh = 0;
  std::vector<double> py;                         // per alive y
  std::vector<std::vector<double>> px_given_y;    // [y][x], alive x only
  std::vector<std::vector<double>> dbar;          // [y][x * nzh + zhat]
  double d_min = 0.0, d_max = 0.0;
};

prepared prepare(const source_model& m) {
  const joint_dist& j = m.joint;
  const std::size_t ix = j.axis_index(m.x_axis);
  const std::size_t iy = j.axis_index(m.y_axis);
  const std::size_t iz = j.axis_index(m.z_axis);
  if (j.axes().size() != 3)
    fail("SHAPE_MISMATCH", "source model joint must have exactly the axes x, y, z");
  const std::size_t nx = j.axis(ix).size();
  const std::size_t ny = j.axis(iy).size();
  const std::size_t nz = j.axis(iz).size();
  const std::size_t nzh = m.reproduction.size();
  if (m.distortion.size() != nz * nzh)
    fail("SHAPE_MISMATCH", "distortion table must be |Z| x |Zhat|");
  for (double d : m.distortion)
    if (!std::isfinite(d) || d < 0.0)
      fail("NONFINITE_INPUT", "distortion entries must be finite and nonnegative");

  // p(x,y,z) gathered into [y][x][z] regardless of declared axis order.
  std::vector<std::size_t> stride(3);
  stride[2] = 1;
  stride[1] = j.axis(2).size();
  stride[0] = j.axis(1).size() * j.axis(2).size();
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) {
    std::size_t idx[3];
    idx[ix] = x;
    idx[iy] = y;
    idx[iz] = z;
    return j.cells()[idx[0] * stride[0] + idx[1] * stride[1] + idx[2] * stride[2]];
  };

  prepared p;
  p.nzh = nzh;
  for (std::size_t y = 0; y < ny; ++y) {
    double py = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) py += at(x, y, z);
    if (py <= kZeroMass) continue;

    std::vector<double> pxy_row, drow;
    double d_max_y = std::numeric_limits<double>::infinity();
    std::vector<double> mean_d(nzh, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      double pxy = 0.0;
      for (std::size_t z = 0; z < nz; ++z) pxy += at(x, y, z);
      if (pxy <= kZeroMass) continue;
      pxy_row.push_back(pxy / py);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t zh = 0; zh < nzh; ++zh) {
        double d = 0.0;
        for (std::size_t z = 0; z < nz; ++z)
          d += at(x, y, z) / pxy * m.distortion[z * nzh + zh];
        drow.push_back(d);
        best = std::min(best, d);
        mean_d[zh] += pxy / py * d;
      }
      p.d_min += pxy * best;
    }
    for (std::size_t zh = 0; zh < nzh; ++zh) d_max_y = std::min(d_max_y, mean_d[zh]);
    p.d_max += py * d_max_y;

    p.py.push_back(py);
    p.px_given_y.push_back(std::move(pxy_row));
    p.dbar.push_back(std::move(drow));
  }
  if (p.py.empty()) fail("ZERO_EVENT", "source model carries no mass");
  return p;
}

struct slope_eval {
  double rate_bits = 0.0;
  double distortion = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Per-y alternating minimization at a common slope s (nats per unit
// distortion), aggregated with weights p(y).
slope_eval run_slope(const prepared& p, double s, double tol) {
  slope_eval out;
  for (std::size_t yi = 0; yi < p.py.size(); ++yi) {
    const auto& px = p.px_given_y[yi];
    const auto& d = p.dbar[yi];
    const std::size_t nx = px.size();
    const std::size_t nzh = p.nzh;

    std::vector<double> q(nzh, 1.0 / static_cast<double>(nzh));
    std::vector<double> w(nx * nzh, 0.0);
    double rate = 0.0, dist = 0.0;
    double last_rate = std::numeric_limits<double>::infinity();
    int iter = 0;
    bool ok = false;
    for (; iter < kInnerCap; ++iter) {
      rate = 0.0;
      dist = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        double shift = std::numeric_limits<double>::infinity();
        for (std::size_t zh = 0; zh < nzh; ++zh)
          if (q[zh] > 0.0) shift = std::min(shift, d[x * nzh + zh]);
        double norm = 0.0;
        for (std::size_t zh = 0; zh < nzh; ++zh) {
          const double v =
              q[zh] > 0.0 ? q[zh] * std::exp(-s * (d[x * nzh + zh] - shift)) : 0.0;
          w[x * nzh + zh] = v;
          norm += v;
        }
        for (std::size_t zh = 0; zh < nzh; ++zh) {
          const double v = w[x * nzh + zh] / norm;
          w[x * nzh + zh] = v;
          if (v > 0.0 && q[zh] > 0.0)
            rate += px[x] * v * std::log(v / q[zh]) / kLn2;
          dist += px[x] * v * d[x * nzh + zh];
        }
      }
      if (std::abs(last_rate - rate) < tol) {
        ok = true;
        break;
      }
      last_rate = rate;
      for (std::size_t zh = 0; zh < nzh; ++zh) {
        double m = 0.0;
        for (std::size_t x = 0; x < nx; ++x) m += px[x] * w[x * nzh + zh];
        q[zh] = m;
      }
    }
    out.rate_bits += p.py[yi] * std::max(rate, 0.0);
    out.distortion += p.py[yi] * dist;
    out.iterations = std::max(out.iterations, iter);
    out.converged = out.converged && ok;
  }
  return out;
}

}  // namespace

rd_curve conditional_remote_rd(const source_model& m,
                               const std::vector<double>& d_grid, double tol) {
  if (tol <= 0.0) fail("SHAPE_MISMATCH", "tolerance must be positive");
  const prepared p = prepare(m);

  rd_curve curve;
  curve.d_min = p.d_min;
  curve.d_max = p.d_max;
  for (double target : d_grid) {
    if (!std::isfinite(target)) fail("NONFINITE_INPUT", "distortion target");
    if (target < p.d_min - 1e-12)
      fail("PRECONDITION_FAILED",
           "distortion target " + std::to_string(target) +
               " lies below the attainable minimum " + std::to_string(p.d_min));

    rd_point pt;
    pt.target_d = target;
    if (target >= p.d_max - 1e-12) {
      pt.achieved_d = p.d_max;
      pt.rate_bits = 0.0;
      pt.slope = 0.0;
      pt.converged = true;
      curve.points.push_back(pt);
      continue;
    }

    // D(s) is nonincreasing in s; grow the bracket then bisect.
    double lo = 0.0, hi = 1.0;
    slope_eval ev = run_slope(p, hi, tol);
    int grow = 0;
    while (ev.distortion > target && grow < 120) {
      lo = hi;
      hi *= 2.0;
      ev = run_slope(p, hi, tol);
      ++grow;
    }
    bool bracketed = ev.distortion <= target;
    for (int b = 0; b < 80 && bracketed; ++b) {
      const double mid = 0.5 * (lo + hi);
      const slope_eval em = run_slope(p, mid, tol);
      if (em.distortion > target)
        lo = mid;
      else {
        hi = mid;
        ev = em;
      }
    }
    pt.achieved_d = ev.distortion;
    pt.rate_bits = ev.rate_bits;
    pt.slope = hi;
    pt.iterations = ev.iterations;
    pt.converged = ev.converged && bracketed;
    curve.points.push_back(pt);
  }
  return curve;
}

rd_equality_report rd_equality_check(const source_model& m, const statistic& t,
                                     const std::vector<double>& d_grid,
                                     double tol, double threshold_bits) {
  {
    joint_dist j = m.joint;
    std::string tn = m.x_axis + "_t";
    while (j.has_axis(tn)) tn += "_";
    j = j.attach(m.x_axis, t, tn);
    const markov_verdict v =
        check_markov(j, {m.z_axis}, {tn, m.y_axis}, {m.x_axis}, threshold_bits);
    if (!v.holds)
      fail("PRECONDITION_FAILED",
           "t is not conditionally sufficient for the target (cmi = " +
               std::to_string(v.cmi_bits) + " bits)");
  }

  source_model reduced = m;
  std::string tx_name = m.x_axis + "_t";
  while (tx_name == m.y_axis || tx_name == m.z_axis) tx_name += "_";
  reduced.joint = m.joint.push_forward(m.x_axis, t, tx_name);
  reduced.x_axis = tx_name;

  rd_equality_report rep;
  rep.full = conditional_remote_rd(m, d_grid, tol);
  rep.reduced = conditional_remote_rd(reduced, d_grid, tol);
  for (std::size_t i = 0; i < rep.full.points.size(); ++i)
    rep.max_gap_bits =
        std::max(rep.max_gap_bits, std::abs(rep.full.points[i].rate_bits -
                                            rep.reduced.points[i].rate_bits));
  return rep;
}

}  // namespace suffstat
