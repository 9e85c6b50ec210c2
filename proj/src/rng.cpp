#include "suffstat/rng.hpp"

#include <cmath>

namespace suffstat {

namespace {

// 32x32 -> 64 multiply split into high and low words.
inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32::block(
    std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMultA, counter[0], hi0, lo0);
    mulhilo(kMultB, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return counter;
}

rng_stream::rng_stream(std::uint64_t seed, std::uint64_t substream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      substream_(substream) {}

void rng_stream::refill() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32),
      static_cast<std::uint32_t>(substream_),
      static_cast<std::uint32_t>(substream_ >> 32)};
  buffer_ = philox4x32::block(counter, key_);
  ++block_index_;
  buffered_ = 4;
}

std::uint32_t rng_stream::next_u32() {
  if (buffered_ == 0) refill();
  return buffer_[4 - buffered_--];
}

std::uint64_t rng_stream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double rng_stream::uniform01() {
  // (0, 1]: zero is excluded so logs of uniforms stay finite.
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
}

double rng_stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform01()));
  const double phi = 2.0 * M_PI * uniform01();
  spare_normal_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

double rng_stream::normal(double mean, double var) {
  return mean + std::sqrt(var) * normal();
}

std::complex<double> rng_stream::cnormal(double total_var) {
  const double s = std::sqrt(total_var / 2.0);
  return {s * normal(), s * normal()};
}

}  // namespace suffstat
