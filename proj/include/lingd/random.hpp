#pragma once

// Reproducible randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard library distributions are not (their algorithms are
// implementation-defined), so uniform, normal and Laplace variates are drawn
// here from raw engine output. Independent streams are derived from a master
// seed with SplitMix64, keyed either by an integer index or by a label.

#include <cstdint>
#include <random>
#include <string_view>

namespace lingd {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `index` of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seed for the stream named `label` (FNV-1a hashed) of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Laplace with location 0 and the given scale (inverse CDF).
  double laplace(double scale);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lingd
