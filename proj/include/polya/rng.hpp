#pragma once

#include <cstdint>
#include <random>

namespace polya {

/// Seedable random source used everywhere in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so every
/// variate below is derived from raw engine output by hand; the same seed
/// reproduces the same draws on any conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for sub-task `stream` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double normal();

  /// log of a Gamma(shape, 1) variate. Working in log space keeps draws with
  /// shape << 1 from underflowing to zero.
  double log_gamma_variate(double shape);

  double gamma_variate(double shape);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace polya
