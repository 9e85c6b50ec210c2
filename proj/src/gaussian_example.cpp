#include "suffstat/gaussian_example.hpp"

#include <cmath>
#include <vector>

#include "suffstat/error.hpp"
#include "suffstat/rng.hpp"

namespace suffstat {

namespace {

void validate(const gaussian_config& cfg) {
  if (!(cfg.n >= 1)) fail("NONFINITE_INPUT", "sample count must be at least 1");
  if (!std::isfinite(cfg.rho) || cfg.rho < 0.0 || cfg.rho >= 1.0)
    fail("NONFINITE_INPUT", "rho must lie in [0, 1)");
  if (!std::isfinite(cfg.prior_mean) || !std::isfinite(cfg.prior_var) ||
      cfg.prior_var <= 0.0)
    fail("NONFINITE_INPUT", "prior moments must be finite with positive variance");
}

// One scalar observation o = z + noise, noise variance r, applied to the
// (theta, z) state by the usual gain update.
void observe(double o, double r, double m[2], double p[3]) {
  // p stores the symmetric covariance as (p_tt, p_tz, p_zz).
  const double s = p[2] + r;
  const double kt = p[1] / s;
  const double kz = p[2] / s;
  const double innov = o - m[1];
  m[0] += kt * innov;
  m[1] += kz * innov;
  const double ptt = p[0] - kt * p[1];
  const double ptz = p[1] - kt * p[2];
  const double pzz = p[2] - kz * p[2];
  p[0] = ptt;
  p[1] = ptz;
  p[2] = pzz;
}

posterior_moments full_route(const gaussian_config& cfg,
                             std::span<const double> x,
                             std::span<const double> y) {
  double m[2] = {cfg.prior_mean, cfg.prior_mean};
  double p[3] = {cfg.prior_var, cfg.prior_var, cfg.prior_var + cfg.rho};
  const double r = 1.0 - cfg.rho;
  for (double v : x) observe(v, r, m, p);
  for (double v : y) observe(v, r, m, p);
  return {m[0], p[0]};
}

posterior_moments reduced_route(const gaussian_config& cfg,
                                std::span<const double> x,
                                std::span<const double> y) {
  const double n = static_cast<double>(cfg.n);
  double sx = 0.0, sy = 0.0;
  for (double v : x) sx += v;
  for (double v : y) sy += v;

  // Joint covariance of (sum x, sum y) and their covariance with theta.
  const double vz = cfg.prior_var + cfg.rho;  // marginal variance of Z
  const double a = n * n * vz + n * (1.0 - cfg.rho);
  const double b = n * n * vz;
  const double c = n * cfg.prior_var;  // cov(theta, sum)

  const double det = a * a - b * b;
  const double i00 = a / det, i01 = -b / det;
  const double dx = sx - n * cfg.prior_mean;
  const double dy = sy - n * cfg.prior_mean;
  const double gx = c * i00 + c * i01;  // row of C_{theta,s} S^{-1}
  posterior_moments out;
  out.mean = cfg.prior_mean + gx * dx + gx * dy;
  out.var = cfg.prior_var - gx * c - gx * c;
  return out;
}

}  // namespace

posterior_moments gaussian_posterior(const gaussian_config& cfg,
                                     std::span<const double> x,
                                     std::span<const double> y,
                                     gaussian_route route) {
  validate(cfg);
  if (x.size() != static_cast<std::size_t>(cfg.n) || y.size() != x.size())
    fail("LENGTH_MISMATCH", "expected " + std::to_string(cfg.n) +
                                " samples on each branch");
  for (double v : x)
    if (!std::isfinite(v)) fail("NONFINITE_INPUT", "x sample");
  for (double v : y)
    if (!std::isfinite(v)) fail("NONFINITE_INPUT", "y sample");
  return route == gaussian_route::full ? full_route(cfg, x, y)
                                       : reduced_route(cfg, x, y);
}

gaussian_mc_result gaussian_mc_mse(const gaussian_config& cfg, long trials) {
  validate(cfg);
  if (trials < 1) fail("NONFINITE_INPUT", "trial count must be positive");

  std::vector<double> x(static_cast<std::size_t>(cfg.n));
  std::vector<double> y(static_cast<std::size_t>(cfg.n));
  double sum_f = 0.0, sum_r = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  for (long t = 0; t < trials; ++t) {
    rng_stream g(cfg.seed, static_cast<std::uint64_t>(t));
    const double theta = g.normal(cfg.prior_mean, cfg.prior_var);
    const double z = g.normal(theta, cfg.rho);
    for (auto& v : x) v = g.normal(z, 1.0 - cfg.rho);
    for (auto& v : y) v = g.normal(z, 1.0 - cfg.rho);

    const posterior_moments f = full_route(cfg, x, y);
    const posterior_moments r = reduced_route(cfg, x, y);
    const double ef = (f.mean - theta) * (f.mean - theta);
    const double er = (r.mean - theta) * (r.mean - theta);
    sum_f += ef;
    sum_r += er;
    sum_d += ef - er;
    sum_d2 += (ef - er) * (ef - er);
  }

  gaussian_mc_result out;
  out.trials = trials;
  out.mse_full = sum_f / static_cast<double>(trials);
  out.mse_reduced = sum_r / static_cast<double>(trials);
  out.gap = sum_d / static_cast<double>(trials);
  const double var_d =
      std::max(0.0, sum_d2 / static_cast<double>(trials) - out.gap * out.gap);
  out.gap_se = std::sqrt(var_d / static_cast<double>(trials));
  return out;
}

}  // namespace suffstat
