#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace suffstat {

// Every validation and precondition failure carries a stable machine-readable
// code next to the human-readable message; the CLI keys its exit codes off it.
class model_error : public std::runtime_error {
 public:
  model_error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw model_error(code, what);
}

}  // namespace suffstat
