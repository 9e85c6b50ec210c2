#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "suffstat/alphabet.hpp"

namespace suffstat {

// A statistic is a total map from a sample alphabet onto class indices, stored
// in canonical form: classes are numbered 0..k-1 by first occurrence in domain
// order, so two maps inducing the same partition compare equal.
class statistic {
 public:
  statistic() = default;

  // Renumbers arbitrary labels into canonical form.
  static statistic from_labels(alphabet domain, const std::vector<int>& raw);

  // raw maps every domain symbol to an output label. MISSING_SYMBOL otherwise.
  static statistic canonicalize(alphabet domain,
                                const std::map<std::string, std::string>& raw);

  static statistic identity(alphabet domain);
  static statistic constant(alphabet domain);

  const alphabet& domain() const { return domain_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t domain_index) const { return labels_[domain_index]; }
  int num_classes() const { return num_classes_; }

  std::string class_symbol(int c) const { return "c" + std::to_string(c); }
  alphabet class_alphabet(const std::string& axis_name) const;

  // Same partition of the same symbols (axis names are informational).
  bool same_partition(const statistic& other) const {
    return domain_.symbols == other.domain_.symbols && labels_ == other.labels_;
  }

 private:
  alphabet domain_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

// Statistic on the product alphabet whose classes are ordered pairs of the
// component classes, canonicalized. SAME_DOMAIN if tx and ty share an axis.
statistic product(const statistic& tx, const statistic& ty);

// True iff t is a function of u (u's partition refines t's). DOMAIN_MISMATCH
// unless both act on the same symbols.
bool is_coarsening(const statistic& t, const statistic& u);

// Same comparison restricted to a subset of domain points (used where null
// points are only identified up to sets of measure zero).
bool is_coarsening_on(const statistic& t, const statistic& u,
                      const std::vector<bool>& include);

}  // namespace suffstat
