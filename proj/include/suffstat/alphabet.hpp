#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "suffstat/error.hpp"

namespace suffstat {

// Ordered finite symbol set. Symbol order is load-bearing: tensors are laid out
// in it and canonical statistics number classes by first occurrence in it.
struct alphabet {
  std::string name;
  std::vector<std::string> symbols;

  alphabet() = default;
  alphabet(std::string name_, std::vector<std::string> symbols_)
      : name(std::move(name_)), symbols(std::move(symbols_)) {
    if (symbols.empty())
      fail("SHAPE_MISMATCH", "alphabet '" + name + "' has no symbols");
    for (std::size_t i = 0; i < symbols.size(); ++i)
      for (std::size_t j = i + 1; j < symbols.size(); ++j)
        if (symbols[i] == symbols[j])
          fail("DUPLICATE_SYMBOL",
               "alphabet '" + name + "' repeats symbol '" + symbols[i] + "'");
  }

  std::size_t size() const { return symbols.size(); }

  std::size_t index_of(const std::string& symbol) const {
    auto it = std::find(symbols.begin(), symbols.end(), symbol);
    if (it == symbols.end())
      fail("MISSING_SYMBOL",
           "symbol '" + symbol + "' not in alphabet '" + name + "'");
    return static_cast<std::size_t>(it - symbols.begin());
  }

  bool contains(const std::string& symbol) const {
    return std::find(symbols.begin(), symbols.end(), symbol) != symbols.end();
  }

  bool operator==(const alphabet&) const = default;
};

// Statistics and flattening agree on this: product symbols are the component
// symbols joined with '|', left axis varying slowest.
inline std::string join_symbols(const std::string& a, const std::string& b) {
  return a + "|" + b;
}

}  // namespace suffstat
