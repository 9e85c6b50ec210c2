#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace suffstat {

// Philox4x32-10 counter-based generator (constants from the Random123 paper).
// Pure function of (counter, key); streams never share state, so paired
// simulations can replay identical draws by reusing substream indices.
struct philox4x32 {
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  static constexpr std::uint32_t kMultA = 0xD2511F53u;
  static constexpr std::uint32_t kMultB = 0xCD9E8D57u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);
};

// One substream: key = seed, counter = (draw index, substream index). Draws
// are buffered four 32-bit words at a time.
class rng_stream {
 public:
  rng_stream(std::uint64_t seed, std::uint64_t substream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform01();                       // (0, 1], 53-bit resolution
  double normal();                          // standard normal, Box-Muller
  double normal(double mean, double var);
  std::complex<double> cnormal(double total_var);  // circularly symmetric

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;

  void refill();
};

}  // namespace suffstat
