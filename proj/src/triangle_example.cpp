#include "suffstat/triangle_example.hpp"

#include <algorithm>
#include <cmath>

#include "suffstat/error.hpp"
#include "suffstat/rng.hpp"

namespace suffstat {

namespace {

// Support pattern of one sample set under each candidate theta: inside means
// theta < y_i < x_i < theta + 1 for every i. The density is the constant 2^n
// on the inside, so two probes have a theta-constant ratio exactly when their
// patterns agree.
std::vector<bool> pattern(const std::vector<double>& thetas,
                          const std::vector<double>& x,
                          const std::vector<double>& y) {
  std::vector<bool> in(thetas.size(), true);
  for (std::size_t t = 0; t < thetas.size(); ++t)
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(thetas[t] < y[i] && y[i] < x[i] && x[i] < thetas[t] + 1.0)) {
        in[t] = false;
        break;
      }
  return in;
}

double draw_open(rng_stream& g, double lo, double hi) {
  // Strictly interior draw; the 1e-12 edge band is excluded by construction.
  const double margin = std::max(1e-12, (hi - lo) * 1e-6);
  return lo + margin + g.uniform01() * (hi - lo - 2.0 * margin);
}

}  // namespace

triangle_report triangle_ratio_check(const triangle_config& cfg,
                                     long num_probes) {
  if (cfg.n < 1) fail("SHAPE_MISMATCH", "sample count must be at least 1");
  if (num_probes < 1) fail("SHAPE_MISMATCH", "probe count must be at least 1");
  std::vector<double> thetas = cfg.theta_values;
  std::sort(thetas.begin(), thetas.end());
  if (thetas.size() < 2 ||
      std::adjacent_find(thetas.begin(), thetas.end()) != thetas.end())
    fail("SHAPE_MISMATCH", "need at least two distinct theta values");
  for (double t : thetas)
    if (!std::isfinite(t)) fail("NONFINITE_INPUT", "theta value");

  // Common observation zone across all candidates.
  const double lo = thetas.back();
  const double hi = thetas.front() + 1.0;
  if (hi - lo <= 1e-9)
    fail("EMPTY_COMMON_SUPPORT", "candidate thetas leave no common zone");
  // Consecutive pair with the largest theta; its support edge at
  // second_last + 1 is what the crossing probes straddle.
  const double edge = thetas[thetas.size() - 2] + 1.0;
  const double ceiling = thetas.back() + 1.0;

  const std::size_t n = static_cast<std::size_t>(cfg.n);
  triangle_report rep;
  std::vector<double> x(n), y(n), xa(n), ya(n);
  for (long probe = 0; probe < num_probes; ++probe) {
    rng_stream g(cfg.seed, static_cast<std::uint64_t>(probe));
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = draw_open(g, lo, hi);
      y[i] = draw_open(g, lo, x[i]);
    }
    const std::size_t imax =
        static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
    const std::size_t imin =
        static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());

    bool expect_constant = false;
    bool swapped = false;  // true when the probes share x and vary y
    switch (probe % 4) {
      case 0: {  // same max, other coordinates resampled below it
        xa = x;
        ya = y;
        for (std::size_t i = 0; i < n; ++i)
          if (i != imax) xa[i] = draw_open(g, y[i], x[imax]);
        rep.probes_equal_max += 1;
        expect_constant = true;
        break;
      }
      case 1: {  // max pushed across the support edge of the smaller thetas
        xa = x;
        ya = y;
        xa[imax] = draw_open(g, edge, ceiling);
        rep.probes_diff_max += 1;
        expect_constant = false;
        break;
      }
      case 2: {  // same min-y, other y coordinates resampled above it
        xa = x;
        ya = y;
        for (std::size_t i = 0; i < n; ++i)
          if (i != imin) ya[i] = draw_open(g, y[imin], x[i]);
        rep.probes_equal_min += 1;
        expect_constant = true;
        swapped = true;
        break;
      }
      default: {  // min-y pulled below the largest theta
        xa = x;
        ya = y;
        ya[imin] = draw_open(g, thetas[thetas.size() - 2], thetas.back());
        rep.probes_diff_min += 1;
        expect_constant = false;
        swapped = true;
        break;
      }
    }

    const std::vector<bool> base = pattern(thetas, x, y);
    const std::vector<bool> alt =
        swapped ? pattern(thetas, x, ya) : pattern(thetas, xa, y);
    const bool constant = base == alt;
    if (constant != expect_constant) {
      rep.mismatches += 1;
      if (rep.notes.size() < 8)
        rep.notes.push_back("probe " + std::to_string(probe) + ": expected " +
                            (expect_constant ? "constant" : "non-constant") +
                            " ratio, got the opposite");
    }
  }
  rep.pass = rep.mismatches == 0;
  return rep;
}

param_family triangle_grid_family(int grid_points, int n,
                                  const std::vector<double>& theta_values) {
  if (grid_points < 2) fail("SHAPE_MISMATCH", "need at least two grid points");
  if (n < 1) fail("SHAPE_MISMATCH", "sample count must be at least 1");
  if (theta_values.empty()) fail("SHAPE_MISMATCH", "need at least one theta");
  std::vector<double> thetas = theta_values;
  std::sort(thetas.begin(), thetas.end());
  if (std::adjacent_find(thetas.begin(), thetas.end()) != thetas.end())
    fail("SHAPE_MISMATCH", "theta values must be distinct");

  const std::size_t gp = static_cast<std::size_t>(grid_points);
  const double top = thetas.back() + 1.0;
  std::vector<double> centers(gp);
  for (std::size_t k = 0; k < gp; ++k)
    centers[k] = (2.0 * static_cast<double>(k) + 1.0) * top /
                 (2.0 * static_cast<double>(gp));

  // Alive single-sample cells per theta.
  const std::size_t pairs = gp * gp;  // (x, y) grid pairs, x-major
  std::vector<std::vector<char>> alive(thetas.size(),
                                       std::vector<char>(pairs, 0));
  std::vector<std::size_t> alive_count(thetas.size(), 0);
  for (std::size_t t = 0; t < thetas.size(); ++t)
    for (std::size_t xi = 0; xi < gp; ++xi)
      for (std::size_t yi = 0; yi < gp; ++yi) {
        const bool in = thetas[t] < centers[yi] && centers[yi] < centers[xi] &&
                        centers[xi] < thetas[t] + 1.0;
        alive[t][xi * gp + yi] = in ? 1 : 0;
        alive_count[t] += in ? 1 : 0;
      }
  for (std::size_t t = 0; t < thetas.size(); ++t)
    if (alive_count[t] == 0)
      fail("ZERO_EVENT", "theta " + std::to_string(thetas[t]) +
                             " admits no grid cell");

  // Axes: n-fold tuples of grid symbols, first coordinate slowest.
  const std::size_t nn = static_cast<std::size_t>(n);
  std::size_t tuple_count = 1;
  for (std::size_t i = 0; i < nn; ++i) tuple_count *= gp;
  auto tuple_symbols = [&]() {
    std::vector<std::string> out(tuple_count);
    for (std::size_t v = 0; v < tuple_count; ++v) {
      std::string s;
      std::size_t rem = v;
      std::size_t div = tuple_count / gp;
      for (std::size_t i = 0; i < nn; ++i) {
        if (i) s += '|';
        s += 'g' + std::to_string(rem / div);
        rem %= div;
        div /= gp;
      }
      out[v] = s;
    }
    return out;
  };

  std::vector<std::string> theta_symbols(thetas.size());
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    std::string s = std::to_string(thetas[t]);
    theta_symbols[t] = "theta=" + s;
  }

  std::vector<double> cond(thetas.size() * tuple_count * tuple_count, 0.0);
  std::vector<std::size_t> xd(nn), yd(nn);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const double cell = 1.0 / static_cast<double>(alive_count[t]);
    for (std::size_t xv = 0; xv < tuple_count; ++xv) {
      std::size_t rem = xv;
      for (std::size_t i = nn; i-- > 0;) {
        xd[i] = rem % gp;
        rem /= gp;
      }
      for (std::size_t yv = 0; yv < tuple_count; ++yv) {
        rem = yv;
        for (std::size_t i = nn; i-- > 0;) {
          yd[i] = rem % gp;
          rem /= gp;
        }
        double p = 1.0;
        for (std::size_t i = 0; i < nn && p > 0.0; ++i)
          p = alive[t][xd[i] * gp + yd[i]] ? p * cell : 0.0;
        cond[t * tuple_count * tuple_count + xv * tuple_count + yv] = p;
      }
    }
  }
  return build_family(
      alphabet{"theta", theta_symbols},
      std::vector<double>(thetas.size(), 1.0 / static_cast<double>(thetas.size())),
      {alphabet{"x", tuple_symbols()}, alphabet{"y", tuple_symbols()}},
      std::move(cond));
}

}  // namespace suffstat
