#include "suffstat/statistic.hpp"

#include <unordered_map>

#include "suffstat/error.hpp"

namespace suffstat {

statistic statistic::from_labels(alphabet domain, const std::vector<int>& raw) {
  if (raw.size() != domain.size())
    fail("SHAPE_MISMATCH", "label count does not match domain size");

  statistic t;
  std::unordered_map<int, int> renumber;
  t.labels_.reserve(raw.size());
  for (int v : raw) {
    auto [it, fresh] = renumber.emplace(v, static_cast<int>(renumber.size()));
    (void)fresh;
    t.labels_.push_back(it->second);
  }
  t.num_classes_ = static_cast<int>(renumber.size());
  t.domain_ = std::move(domain);
  return t;
}

statistic statistic::canonicalize(alphabet domain,
                                  const std::map<std::string, std::string>& raw) {
  std::vector<int> labels;
  labels.reserve(domain.size());
  std::unordered_map<std::string, int> seen;
  for (const auto& sym : domain.symbols) {
    auto it = raw.find(sym);
    if (it == raw.end())
      fail("MISSING_SYMBOL", "statistic map misses symbol '" + sym + "'");
    auto [cls, fresh] = seen.emplace(it->second, static_cast<int>(seen.size()));
    (void)fresh;
    labels.push_back(cls->second);
  }
  return from_labels(std::move(domain), labels);
}

statistic statistic::identity(alphabet domain) {
  std::vector<int> labels(domain.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = static_cast<int>(i);
  return from_labels(std::move(domain), labels);
}

statistic statistic::constant(alphabet domain) {
  return from_labels(std::move(domain), std::vector<int>(domain.size(), 0));
}

alphabet statistic::class_alphabet(const std::string& axis_name) const {
  std::vector<std::string> symbols;
  symbols.reserve(static_cast<std::size_t>(num_classes_));
  for (int c = 0; c < num_classes_; ++c) symbols.push_back(class_symbol(c));
  return alphabet(axis_name, std::move(symbols));
}

statistic product(const statistic& tx, const statistic& ty) {
  if (tx.domain().symbols == ty.domain().symbols)
    fail("SAME_DOMAIN", "product needs statistics on distinct axes");

  std::vector<std::string> symbols;
  symbols.reserve(tx.domain().size() * ty.domain().size());
  std::vector<int> labels;
  labels.reserve(symbols.capacity());
  for (std::size_t i = 0; i < tx.domain().size(); ++i)
    for (std::size_t j = 0; j < ty.domain().size(); ++j) {
      symbols.push_back(
          join_symbols(tx.domain().symbols[i], ty.domain().symbols[j]));
      labels.push_back(tx.label(i) * ty.num_classes() + ty.label(j));
    }
  alphabet dom(tx.domain().name + "|" + ty.domain().name, std::move(symbols));
  return statistic::from_labels(std::move(dom), labels);
}

bool is_coarsening(const statistic& t, const statistic& u) {
  if (t.domain().symbols != u.domain().symbols)
    fail("DOMAIN_MISMATCH", "coarsening compares statistics on one domain");
  return is_coarsening_on(t, u,
                          std::vector<bool>(t.domain().size(), true));
}

bool is_coarsening_on(const statistic& t, const statistic& u,
                      const std::vector<bool>& include) {
  if (t.domain().symbols != u.domain().symbols)
    fail("DOMAIN_MISMATCH", "coarsening compares statistics on one domain");
  // t is a function of u: u-classes never split across t-classes.
  std::unordered_map<int, int> image;
  for (std::size_t i = 0; i < include.size(); ++i) {
    if (!include[i]) continue;
    auto [it, fresh] = image.emplace(u.label(i), t.label(i));
    if (!fresh && it->second != t.label(i)) return false;
  }
  return true;
}

}  // namespace suffstat
