#pragma once

#include <string>
#include <utility>
#include <vector>

#include "suffstat/family.hpp"
#include "suffstat/info.hpp"
#include "suffstat/statistic.hpp"

namespace suffstat {

// Proportionality constants are compared with this relative tolerance.
inline constexpr double kRatioRelTol = 1e-9;

// theta - T(obs) - obs. t acts on the full observation product (on the single
// observation axis when there is only one). DOMAIN_MISMATCH otherwise.
markov_verdict is_sufficient(const param_family& fam, const statistic& t,
                             double threshold_bits = kCmiThresholdBits);

// theta - (T(X), Y) - X, i.e. I(theta; X | T(X), Y) against the threshold.
markov_verdict is_conditionally_sufficient(const param_family& fam,
                                           const statistic& t,
                                           const std::string& x_axis,
                                           const std::string& y_axis,
                                           double threshold_bits = kCmiThresholdBits);

// Groups rows by identical support plus a single proportionality constant
// (relative tolerance kRatioRelTol); all-zero rows form one designated null
// class ordered last, then labels are canonicalized. Prior-free helper shared
// by the minimal-statistic constructions and the corner point.
std::vector<int> group_proportional_rows(
    const std::vector<std::vector<double>>& rows);

// Coarsest sufficient partition of the observation product: points share a
// class iff their likelihood vectors (p(obs|theta))_theta are proportional
// with matching support. Ignores the prior.
statistic minimal_sufficient(const param_family& fam);

// Coarsest conditionally sufficient partition of x_axis: x and x' share a
// class iff for every y with mass on both sides the theta-vectors p(x,y|.)
// and p(x',y|.) are proportional with matching support (a y where either side
// is identically zero imposes no constraint). Points with zero mass
// everywhere form the null class. Classes are grown in domain order and a
// candidate must be compatible with every member. Ignores the prior.
statistic minimal_conditional_sufficient(const param_family& fam,
                                         const std::string& x_axis,
                                         const std::string& y_axis);

// Ratio evidence that t is conditionally sufficient: for all x, x' with
// t(x) = t(x') and all y, the theta-vectors are proportional with matching
// support. Independent of the CMI criterion; tests compare the two verdicts
// in both directions.
bool conditional_ratio_test(const param_family& fam, const statistic& t,
                            const std::string& x_axis,
                            const std::string& y_axis);

// Hidden-variable model: theta -> W -> (obs...), with the observation axes
// conditionally independent of theta given W by construction.
struct hci_model {
  param_family family;
  alphabet w;
  std::vector<double> p_w_given_theta;  // theta.size() x w.size(), row-stochastic
  std::vector<double> p_obs_given_w;    // w.size() x obs_cells, row-stochastic

  // p(theta, w, obs...) with axes (theta, w, obs...).
  joint_dist joint() const;
};

// Validates stochasticity (1e-12) and that the channels compose back to
// family.cond within 1e-9; COMPOSITION_MISMATCH otherwise.
hci_model make_hci(param_family fam, alphabet w,
                   std::vector<double> p_w_given_theta,
                   std::vector<double> p_obs_given_w);

// Verdicts for theta - W - obs and X - W - Y (the latter requires exactly two
// observation axes).
std::pair<markov_verdict, markov_verdict> verify_hci(
    const hci_model& h, double threshold_bits = kCmiThresholdBits);

struct theorem1_report {
  markov_verdict tw_sufficient_for_w;   // theta - T(W) - W
  markov_verdict induced_independence;  // X - T(W) - Y
  markov_verdict tx_local;              // T(W) - Tx(X) - X
  markov_verdict ty_local;              // T(W) - Ty(Y) - Y
  markov_verdict conclusion;            // theta - (Tx(X), Ty(Y)) - (X, Y)

  bool premises_hold() const {
    return tw_sufficient_for_w.holds && induced_independence.holds &&
           tx_local.holds && ty_local.holds;
  }
};

// Requires exactly two observation axes; tw on W, tx on X, ty on Y.
theorem1_report theorem1_check(const hci_model& h, const statistic& tw,
                               const statistic& tx, const statistic& ty,
                               double threshold_bits = kCmiThresholdBits);

struct theorem2_report {
  markov_verdict ty_precondition;  // theta - Ty(Y) - Y on the Y marginal
  markov_verdict direct;           // (a) theta - (Tx,Ty) - (X,Y)
  bool factorization = false;      // (b) blockwise proportionality of p(x,y|theta)
  bool agree = false;              // (a) and (b) reached the same verdict
};

// PRECONDITION_FAILED unless ty is locally sufficient for the Y marginal.
theorem2_report theorem2_check(const param_family& fam, const statistic& tx,
                               const statistic& ty, const std::string& x_axis,
                               const std::string& y_axis,
                               double threshold_bits = kCmiThresholdBits);

}  // namespace suffstat
