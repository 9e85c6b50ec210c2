#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suffstat/joint.hpp"

namespace suffstat {

// Default decision threshold for Markov-chain verdicts, in bits.
inline constexpr double kCmiThresholdBits = 1e-9;

// Shannon entropy of the marginal on the listed axes, base 2, 0 log 0 := 0.
double entropy_bits(const joint_dist& dist, const std::vector<std::string>& axes);

// I(A;B|C) by direct summation over the joint, in bits. C may be empty (plain
// mutual information). Negative rounding residue is clamped to 0 at reporting.
// AXIS_OVERLAP if the groups are not pairwise disjoint.
double cmi_bits(const joint_dist& dist, const std::vector<std::string>& a,
                const std::vector<std::string>& b,
                const std::vector<std::string>& c);

struct markov_witness {
  std::string a, b, c;   // grouped symbols, components joined with '|'
  double contribution;   // this cell's share of the CMI sum, bits
};

struct markov_verdict {
  double cmi_bits = 0.0;
  double threshold_bits = kCmiThresholdBits;
  bool holds = false;
  // Largest-contribution cell; present exactly when the verdict fails.
  std::optional<markov_witness> witness;
};

// Verdict for the chain A - B - C, i.e. cmi = I(A;C|B).
markov_verdict check_markov(const joint_dist& dist,
                            const std::vector<std::string>& a,
                            const std::vector<std::string>& b,
                            const std::vector<std::string>& c,
                            double threshold_bits = kCmiThresholdBits);

}  // namespace suffstat
