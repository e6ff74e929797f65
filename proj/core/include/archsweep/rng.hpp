#pragma once

#include <cstdint>
#include <string_view>

namespace archsweep {

// splitmix64 step: advances state by the golden-ratio increment and returns
// the mixed value.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

// One-shot mix: the first output of a splitmix64 stream seeded with x.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// FNV-1a 64-bit over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept { return splitmix64_next(state_); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() noexcept;

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) noexcept;

  // Standard normal via Box-Muller; the paired value is cached, so draws
  // consume the underlying stream in deterministic twos.
  double next_gaussian() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace archsweep
