#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suffstat/joint.hpp"
#include "suffstat/statistic.hpp"

namespace suffstat {

// Joint source with designated roles. z_axis is empty for the frontier and
// corner-point operations; the distortion table is indexed (z, reproduction)
// row-major and defaults the reproduction alphabet to the z alphabet.
struct source_model {
  joint_dist joint;
  std::string x_axis;
  std::string y_axis;
  std::string z_axis;
  alphabet reproduction;
  std::vector<double> distortion;
};

struct rate_point {
  double r1_bits = 0.0;              // H(X|U)
  double r2_bits = 0.0;              // I(Y;U)
  std::vector<double> channel;       // p(u|y), ny x nu row-major
};

struct rate_frontier {
  std::vector<rate_point> points;    // r1 ascending, r2 strictly descending
  int u_card = 0;
};

// Pareto frontier of (H(X|U), I(Y;U)) over channels p(u|y) with X - Y - U:
// deterministic maps enumerated as partitions of Y into at most u_card blocks
// plus budget random restarts of a weighted alternating minimization swept
// over lambda in {0, 0.05, ..., 1}. CARD_TOO_LARGE if u_card > |Y| + 2.
rate_frontier ak_frontier(const joint_dist& pxy, const std::string& x_axis,
                          const std::string& y_axis, int u_card, int budget,
                          std::uint64_t seed);

// Recomputes (H(X|U), I(Y;U)) for a stored channel; tests use it to confirm
// every frontier point is achievable as reported.
rate_point evaluate_channel(const joint_dist& pxy, const std::string& x_axis,
                            const std::string& y_axis,
                            const std::vector<double>& channel, int u_card);

// Entropy of the coarsest partition of Y whose classes have proportional
// p(x|y) columns: the minimal helper rate at full data rate for X.
double corner_point(const joint_dist& pxy, const std::string& x_axis,
                    const std::string& y_axis);

struct theorem6_report {
  rate_frontier full;                  // frontier of (X, Y)
  rate_frontier reduced;               // frontier of (X, T(Y))
  // Every reduced point, lifted through t, re-evaluated on the full model:
  // worst coordinate discrepancy (the containment direction, no search).
  double lift_gap_bits = 0.0;
  // One-sided search gaps: how far points of one set stick out of the other.
  double reduced_covered_by_full_bits = 0.0;
  double full_covered_by_reduced_bits = 0.0;
};

// PRECONDITION_FAILED unless X - T(Y) - Y holds at the threshold.
theorem6_report theorem6_compare(const joint_dist& pxy,
                                 const std::string& x_axis,
                                 const std::string& y_axis, const statistic& t,
                                 int u_card, int budget, std::uint64_t seed,
                                 double threshold_bits = 1e-9);

}  // namespace suffstat
