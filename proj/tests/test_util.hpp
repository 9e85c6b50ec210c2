#pragma once

// Shared fixtures for the test binaries: small families with known structure,
// set-partition enumeration and seeded random models.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "suffstat/error.hpp"
#include "suffstat/family.hpp"
#include "suffstat/joint.hpp"
#include "suffstat/rng.hpp"
#include "suffstat/statistic.hpp"
#include "suffstat/sufficiency.hpp"

namespace tt {

inline std::string repo_path(const std::string& rel) {
  return std::string(SUFFSTAT_SOURCE_DIR) + "/" + rel;
}

// Runs f and reports the model_error code it threw, "" if it returned.
template <class F>
std::string thrown_code(F&& f) {
  try {
    f();
  } catch (const suffstat::model_error& e) {
    return e.code();
  }
  return "";
}

inline double h2(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

// Two iid Bernoulli bits per sample; success 0.2 under theta=0 and 0.8 under
// theta=1. The bit count is sufficient, the parity is not.
inline suffstat::param_family two_bit_bernoulli() {
  const double p0 = 0.2, p1 = 0.8;
  std::vector<double> cond;
  for (double p : {p0, p1})
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2)
        cond.push_back((b1 ? p : 1 - p) * (b2 ? p : 1 - p));
  return suffstat::build_family(
      suffstat::alphabet{"theta", {"0", "1"}}, {0.5, 0.5},
      {suffstat::alphabet{"x", {"00", "01", "10", "11"}}}, cond);
}

// Hidden switch: theta flips into w with probability 0.1, then each node sees
// n iid bits with success 0.25 (w=0) or 0.75 (w=1). X and Y are dependent
// given theta but independent given w.
inline suffstat::hci_model hidden_switch(int samples_per_node) {
  const double flip = 0.1;
  const double q0 = 0.25, q1 = 0.75;
  const int n = samples_per_node;
  const std::size_t tuples = static_cast<std::size_t>(1) << n;

  std::vector<std::string> symbols(tuples);
  for (std::size_t v = 0; v < tuples; ++v) {
    std::string s;
    for (int i = n - 1; i >= 0; --i) s += ((v >> i) & 1) ? '1' : '0';
    symbols[v] = s;
  }
  auto tuple_prob = [&](std::size_t v, double q) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= ((v >> i) & 1) ? q : 1 - q;
    return p;
  };

  std::vector<double> p_w = {1 - flip, flip, flip, 1 - flip};
  std::vector<double> p_obs;
  for (double q : {q0, q1})
    for (std::size_t xv = 0; xv < tuples; ++xv)
      for (std::size_t yv = 0; yv < tuples; ++yv)
        p_obs.push_back(tuple_prob(xv, q) * tuple_prob(yv, q));

  std::vector<double> cond(2 * tuples * tuples, 0.0);
  for (int t = 0; t < 2; ++t)
    for (std::size_t c = 0; c < tuples * tuples; ++c)
      cond[t * tuples * tuples + c] =
          p_w[t * 2 + 0] * p_obs[c] + p_w[t * 2 + 1] * p_obs[tuples * tuples + c];
  suffstat::param_family fam = suffstat::build_family(
      suffstat::alphabet{"theta", {"0", "1"}}, {0.5, 0.5},
      {suffstat::alphabet{"x", symbols}, suffstat::alphabet{"y", symbols}},
      cond);
  return suffstat::make_hci(std::move(fam), suffstat::alphabet{"w", {"0", "1"}},
                            p_w, p_obs);
}

inline suffstat::statistic count_stat(const suffstat::alphabet& bits) {
  std::vector<int> labels;
  for (const auto& s : bits.symbols)
    labels.push_back(static_cast<int>(std::count(s.begin(), s.end(), '1')));
  return suffstat::statistic::from_labels(bits, labels);
}

inline suffstat::statistic parity_stat(const suffstat::alphabet& bits) {
  std::vector<int> labels;
  for (const auto& s : bits.symbols)
    labels.push_back(static_cast<int>(std::count(s.begin(), s.end(), '1')) % 2);
  return suffstat::statistic::from_labels(bits, labels);
}

// Four-symbol X with opposing likelihood ramps plus an independent fair bit Y.
// Every pair of x symbols has a distinct likelihood ratio, so only the
// identity partition of X is sufficient, with or without Y on the side.
inline suffstat::param_family opposing_ramps() {
  const std::vector<double> p0 = {0.4, 0.3, 0.2, 0.1};
  std::vector<double> cond;
  for (int t = 0; t < 2; ++t)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 2; ++y) cond.push_back((t ? p0[3 - x] : p0[x]) * 0.5);
  return suffstat::build_family(
      suffstat::alphabet{"theta", {"0", "1"}}, {0.5, 0.5},
      {suffstat::alphabet{"x", {"a0", "a1", "a2", "a3"}},
       suffstat::alphabet{"y", {"0", "1"}}},
      cond);
}

// All set partitions of the domain, as canonical statistics, enumerated via
// restricted growth strings.
inline std::vector<suffstat::statistic> all_partitions(
    const suffstat::alphabet& domain) {
  const std::size_t n = domain.size();
  std::vector<suffstat::statistic> out;
  std::vector<int> labels(n, 0), maxes(n, 0);
  for (;;) {
    out.push_back(suffstat::statistic::from_labels(domain, labels));
    std::size_t i = n;
    while (i > 1) {
      --i;
      if (labels[i] <= maxes[i - 1]) break;
      i = i == 1 ? 0 : i;
    }
    if (i == 0 || i >= n) break;
    ++labels[i];
    maxes[i] = std::max(maxes[i - 1], labels[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      labels[j] = 0;
      maxes[j] = maxes[i];
    }
  }
  return out;
}

inline std::vector<double> random_simplex(suffstat::rng_stream& g,
                                          std::size_t k) {
  std::vector<double> v(k);
  double sum = 0.0;
  for (double& x : v) {
    x = g.uniform01() + 1e-3;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline suffstat::joint_dist random_joint(suffstat::rng_stream& g,
                                         std::vector<suffstat::alphabet> axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return suffstat::joint_dist::from_cells(std::move(axes),
                                          random_simplex(g, n));
}

inline suffstat::alphabet numbered(const std::string& name, std::size_t n) {
  std::vector<std::string> syms(n);
  for (std::size_t i = 0; i < n; ++i) syms[i] = std::to_string(i);
  return suffstat::alphabet{name, syms};
}

}  // namespace tt

#ifdef SUFFSTAT_TOOL_PATH

#include <cstdio>
#include <sys/wait.h>

namespace tt {

struct tool_result {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI binary, capturing stdout; stderr is dropped.
inline tool_result run_tool(const std::string& args) {
  const std::string cmd =
      std::string(SUFFSTAT_TOOL_PATH) + " " + args + " 2>/dev/null";
  tool_result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = ::pclose(p);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

}  // namespace tt

#endif
