#include "suffstat/source_coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suffstat/info.hpp"
#include "suffstat/rng.hpp"
#include "suffstat/sufficiency.hpp"

namespace suffstat {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// p(x,y) rearranged x-major with marginals, independent of axis order in the
// incoming joint.
struct xy_tables {
  std::size_t nx = 0, ny = 0;
  std::vector<double> pxy;  // [x * ny + y]
  std::vector<double> px, py;
  alphabet x_alphabet, y_alphabet;
};

xy_tables make_tables(const joint_dist& j, const std::string& x_axis,
                      const std::string& y_axis) {
  const joint_dist m = j.marginal({x_axis, y_axis});
  const std::size_t ix = m.axis_index(x_axis);
  const std::size_t iy = m.axis_index(y_axis);

  xy_tables t;
  t.x_alphabet = m.axis(ix);
  t.y_alphabet = m.axis(iy);
  t.nx = t.x_alphabet.size();
  t.ny = t.y_alphabet.size();
  t.pxy.assign(t.nx * t.ny, 0.0);
  const auto& cells = m.cells();
  for (std::size_t x = 0; x < t.nx; ++x)
    for (std::size_t y = 0; y < t.ny; ++y)
      t.pxy[x * t.ny + y] = ix < iy ? cells[x * t.ny + y] : cells[y * t.nx + x];

  t.px.assign(t.nx, 0.0);
  t.py.assign(t.ny, 0.0);
  for (std::size_t x = 0; x < t.nx; ++x)
    for (std::size_t y = 0; y < t.ny; ++y) {
      t.px[x] += t.pxy[x * t.ny + y];
      t.py[y] += t.pxy[x * t.ny + y];
    }
  return t;
}

rate_point evaluate(const xy_tables& t, const std::vector<double>& channel,
                    std::size_t nu) {
  std::vector<double> pu(nu, 0.0);
  std::vector<double> pxu(t.nx * nu, 0.0);
  for (std::size_t y = 0; y < t.ny; ++y)
    for (std::size_t u = 0; u < nu; ++u) {
      const double w = channel[y * nu + u];
      if (w <= 0.0) continue;
      pu[u] += t.py[y] * w;
      for (std::size_t x = 0; x < t.nx; ++x)
        pxu[x * nu + u] += t.pxy[x * t.ny + y] * w;
    }

  double h_x_given_u = 0.0;
  for (std::size_t u = 0; u < nu; ++u) {
    if (pu[u] <= kZeroMass) continue;
    for (std::size_t x = 0; x < t.nx; ++x) {
      const double p = pxu[x * nu + u];
      if (p <= kZeroMass) continue;
      h_x_given_u -= p * std::log(p / pu[u]) / kLn2;
    }
  }

  double i_y_u = 0.0;
  for (std::size_t y = 0; y < t.ny; ++y) {
    if (t.py[y] <= kZeroMass) continue;
    for (std::size_t u = 0; u < nu; ++u) {
      const double w = channel[y * nu + u];
      const double p = t.py[y] * w;
      if (p <= kZeroMass || pu[u] <= kZeroMass) continue;
      i_y_u += p * std::log(w / pu[u]) / kLn2;
    }
  }

  rate_point pt;
  pt.r1_bits = h_x_given_u < 0.0 ? 0.0 : h_x_given_u;
  pt.r2_bits = i_y_u < 0.0 ? 0.0 : i_y_u;
  pt.channel = channel;
  return pt;
}

// Weighted objective lambda*H(X|U) + (1-lambda)*I(Y;U) for one channel.
double objective(const xy_tables& t, const std::vector<double>& channel,
                 std::size_t nu, double lambda) {
  const rate_point p = evaluate(t, channel, nu);
  return lambda * p.r1_bits + (1.0 - lambda) * p.r2_bits;
}

// Self-consistent minimization of the weighted objective: with
// beta = lambda/(1-lambda), the stationarity condition is
// p(u|y) proportional to p(u) exp(-beta KL(p(x|y) || p(x|u))).
void descend(const xy_tables& t, std::size_t nu, double lambda,
             std::vector<double>& channel) {
  if (lambda >= 1.0) return;  // deterministic maps own that endpoint
  const double beta = lambda / (1.0 - lambda);

  std::vector<double> pu(nu), pxgu(t.nx * nu), logw(nu);
  double last = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    std::fill(pu.begin(), pu.end(), 0.0);
    std::fill(pxgu.begin(), pxgu.end(), 0.0);
    for (std::size_t y = 0; y < t.ny; ++y)
      for (std::size_t u = 0; u < nu; ++u) {
        const double w = t.py[y] * channel[y * nu + u];
        pu[u] += w;
        for (std::size_t x = 0; x < t.nx; ++x)
          pxgu[x * nu + u] += t.pxy[x * t.ny + y] * channel[y * nu + u];
      }
    for (std::size_t u = 0; u < nu; ++u) {
      if (pu[u] > kZeroMass) {
        for (std::size_t x = 0; x < t.nx; ++x) pxgu[x * nu + u] /= pu[u];
      } else {
        for (std::size_t x = 0; x < t.nx; ++x) pxgu[x * nu + u] = t.px[x];
      }
    }

    for (std::size_t y = 0; y < t.ny; ++y) {
      if (t.py[y] <= kZeroMass) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < nu; ++u) {
        double kl = 0.0;
        for (std::size_t x = 0; x < t.nx; ++x) {
          const double pxy = t.pxy[x * t.ny + y] / t.py[y];
          if (pxy <= kZeroMass) continue;
          const double q = pxgu[x * nu + u];
          if (q <= kZeroMass) {
            kl = std::numeric_limits<double>::infinity();
            break;
          }
          kl += pxy * std::log(pxy / q);
        }
        logw[u] = std::isinf(kl) ? -1e300
                                 : (pu[u] > kZeroMass ? std::log(pu[u]) : -1e300) -
                                       beta * kl;
        best = std::max(best, logw[u]);
      }
      double norm = 0.0;
      for (std::size_t u = 0; u < nu; ++u) {
        logw[u] = std::exp(logw[u] - best);
        norm += logw[u];
      }
      for (std::size_t u = 0; u < nu; ++u) channel[y * nu + u] = logw[u] / norm;
    }

    const double j = objective(t, channel, nu, lambda);
    if (std::abs(last - j) < 1e-13) break;
    last = j;
  }
}

void pareto_filter(std::vector<rate_point>& pts) {
  std::sort(pts.begin(), pts.end(), [](const rate_point& a, const rate_point& b) {
    if (a.r1_bits != b.r1_bits) return a.r1_bits < b.r1_bits;
    return a.r2_bits < b.r2_bits;
  });
  std::vector<rate_point> kept;
  for (auto& p : pts) {
    if (!kept.empty() && p.r2_bits >= kept.back().r2_bits - 1e-12) continue;
    if (!kept.empty() && p.r1_bits - kept.back().r1_bits <= 1e-12)
      kept.back() = std::move(p);
    else
      kept.push_back(std::move(p));
  }
  pts = std::move(kept);
}

}  // namespace

rate_point evaluate_channel(const joint_dist& pxy, const std::string& x_axis,
                            const std::string& y_axis,
                            const std::vector<double>& channel, int u_card) {
  const xy_tables t = make_tables(pxy, x_axis, y_axis);
  if (u_card < 1 || channel.size() != t.ny * static_cast<std::size_t>(u_card))
    fail("SHAPE_MISMATCH", "channel shape does not match |Y| x u_card");
  return evaluate(t, channel, static_cast<std::size_t>(u_card));
}

rate_frontier ak_frontier(const joint_dist& pxy, const std::string& x_axis,
                          const std::string& y_axis, int u_card, int budget,
                          std::uint64_t seed) {
  const xy_tables t = make_tables(pxy, x_axis, y_axis);
  if (u_card < 1) fail("SHAPE_MISMATCH", "u_card must be at least 1");
  if (static_cast<std::size_t>(u_card) > t.ny + 2)
    fail("CARD_TOO_LARGE", "u_card " + std::to_string(u_card) +
                               " exceeds |Y| + 2 = " + std::to_string(t.ny + 2));
  const std::size_t nu = static_cast<std::size_t>(u_card);

  std::vector<rate_point> candidates;
  auto add_map = [&](const std::vector<int>& labels) {
    std::vector<double> ch(t.ny * nu, 0.0);
    for (std::size_t y = 0; y < t.ny; ++y)
      ch[y * nu + static_cast<std::size_t>(labels[y])] = 1.0;
    candidates.push_back(evaluate(t, ch, nu));
  };

  // Deterministic maps, enumerated as restricted growth strings so label
  // permutations are visited once. Capped; the random restarts cover models
  // too large to enumerate.
  {
    long visited = 0;
    const long cap = 100000;
    std::vector<int> labels(t.ny, 0);
    std::vector<int> maxes(t.ny, 0);
    for (;;) {
      add_map(labels);
      if (++visited >= cap) break;
      std::size_t i = t.ny;
      while (i > 1) {
        --i;
        if (labels[i] < std::min(u_card - 1, maxes[i - 1] + 1)) break;
        i = i == 1 ? 0 : i;  // position 0 is pinned at label 0
      }
      if (i == 0 || i >= t.ny) break;
      ++labels[i];
      maxes[i] = std::max(labels[i], maxes[i - 1]);
      for (std::size_t k = i + 1; k < t.ny; ++k) {
        labels[k] = 0;
        maxes[k] = maxes[k - 1];
      }
    }
  }

  // Random-restart descent over the lambda sweep.
  const int lambda_steps = 21;  // 0, 0.05, ..., 1
  for (int r = 0; r < budget; ++r) {
    const double lambda = (r % lambda_steps) * 0.05;
    rng_stream g(seed, static_cast<std::uint64_t>(r) + 1);
    std::vector<double> ch(t.ny * nu);
    for (std::size_t y = 0; y < t.ny; ++y) {
      double norm = 0.0;
      for (std::size_t u = 0; u < nu; ++u) {
        ch[y * nu + u] = -std::log(g.uniform01());
        norm += ch[y * nu + u];
      }
      for (std::size_t u = 0; u < nu; ++u) ch[y * nu + u] /= norm;
    }
    descend(t, nu, lambda, ch);
    candidates.push_back(evaluate(t, ch, nu));
  }

  pareto_filter(candidates);
  rate_frontier f;
  f.points = std::move(candidates);
  f.u_card = u_card;
  return f;
}

double corner_point(const joint_dist& pxy, const std::string& x_axis,
                    const std::string& y_axis) {
  const xy_tables t = make_tables(pxy, x_axis, y_axis);
  // Columns p(.|y) are proportional iff the joint columns are; zero-mass y
  // fall into the null class and carry no entropy.
  std::vector<std::vector<double>> columns(t.ny, std::vector<double>(t.nx));
  for (std::size_t y = 0; y < t.ny; ++y)
    for (std::size_t x = 0; x < t.nx; ++x)
      columns[y][x] = t.pxy[x * t.ny + y];
  const std::vector<int> labels = group_proportional_rows(columns);

  int num_classes = 0;
  for (int l : labels) num_classes = std::max(num_classes, l + 1);
  std::vector<double> mass(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t y = 0; y < t.ny; ++y)
    mass[static_cast<std::size_t>(labels[y])] += t.py[y];

  double h = 0.0;
  for (double m : mass)
    if (m > kZeroMass) h -= m * std::log(m) / kLn2;
  return h;
}

theorem6_report theorem6_compare(const joint_dist& pxy,
                                 const std::string& x_axis,
                                 const std::string& y_axis, const statistic& t,
                                 int u_card, int budget, std::uint64_t seed,
                                 double threshold_bits) {
  {
    joint_dist m = pxy.marginal({x_axis, y_axis});
    std::string tn = y_axis + "_t";
    while (m.has_axis(tn)) tn += "_";
    m = m.attach(y_axis, t, tn);
    const markov_verdict v =
        check_markov(m, {x_axis}, {tn}, {y_axis}, threshold_bits);
    if (!v.holds)
      fail("PRECONDITION_FAILED",
           "t is not sufficient for X (cmi = " + std::to_string(v.cmi_bits) +
               " bits)");
  }

  theorem6_report rep;
  rep.full = ak_frontier(pxy, x_axis, y_axis, u_card, budget, seed);

  joint_dist reduced = pxy.marginal({x_axis, y_axis});
  std::string ty_name = y_axis + "_t";
  while (ty_name == x_axis) ty_name += "_";
  reduced = reduced.push_forward(y_axis, t, ty_name);
  const int reduced_card =
      std::min<int>(u_card, static_cast<int>(t.num_classes()) + 2);
  rep.reduced =
      ak_frontier(reduced, x_axis, ty_name, reduced_card, budget, seed);

  // Containment direction: lift each reduced channel through t and re-evaluate
  // on the full model; the joint of (X, U) and the law of (T(Y), U) are
  // preserved, so the point must reappear exactly.
  const xy_tables full_tables = make_tables(pxy, x_axis, y_axis);
  std::vector<rate_point> lifted;
  for (const auto& q : rep.reduced.points) {
    const std::size_t nu = static_cast<std::size_t>(rep.reduced.u_card);
    std::vector<double> ch(full_tables.ny * nu, 0.0);
    for (std::size_t y = 0; y < full_tables.ny; ++y)
      for (std::size_t u = 0; u < nu; ++u)
        ch[y * nu + u] = q.channel[static_cast<std::size_t>(t.label(y)) * nu + u];
    rate_point ev = evaluate(full_tables, ch, nu);
    rep.lift_gap_bits =
        std::max({rep.lift_gap_bits, std::abs(ev.r1_bits - q.r1_bits),
                  std::abs(ev.r2_bits - q.r2_bits)});
    lifted.push_back(std::move(ev));
  }

  auto coverage = [](const std::vector<rate_point>& outer,
                     const std::vector<const std::vector<rate_point>*>& covers) {
    double worst = 0.0;
    for (const auto& a : outer) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto* set : covers)
        for (const auto& b : *set)
          best = std::min(best, std::max({0.0, b.r1_bits - a.r1_bits,
                                          b.r2_bits - a.r2_bits}));
      worst = std::max(worst, best);
    }
    return worst;
  };
  rep.reduced_covered_by_full_bits =
      coverage(rep.reduced.points, {&rep.full.points, &lifted});
  rep.full_covered_by_reduced_bits =
      coverage(rep.full.points, {&rep.reduced.points});
  return rep;
}

}  // namespace suffstat
