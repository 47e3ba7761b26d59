#include "polya/rng.hpp"

#include <cmath>

#include "polya/error.hpp"

namespace polya {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidInput("Rng::below: n must be positive");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r <= limit) return r % n;
  }
}

double Rng::normal() {
  // Marsaglia polar method; the second variate is discarded so the stream
  // position depends only on the number of calls.
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double Rng::log_gamma_variate(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma variate: shape must be positive");
  }
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
    double u = 0.0;
    do { u = uniform(); } while (u == 0.0);
    return log_gamma_variate(shape + 1.0) + std::log(u) / shape;
  }
  // Marsaglia & Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = 0.0;
    do { u = uniform(); } while (u == 0.0);
    if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

double Rng::gamma_variate(double shape) { return std::exp(log_gamma_variate(shape)); }

}  // namespace polya
