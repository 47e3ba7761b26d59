#include "polya/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polya/error.hpp"
#include "polya/format.hpp"

namespace polya {

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  std::vector<double> logs(alpha.size());
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    logs[i] = rng.log_gamma_variate(alpha[i]);
    hi = std::max(hi, logs[i]);
  }
  double norm = 0.0;
  for (double& l : logs) {
    l = std::exp(l - hi);
    norm += l;
  }
  for (double& l : logs) l /= norm;
  return logs;
}

CountVector sample_polya(const PolyaParams& params, Count n_elements, Rng& rng) {
  if (n_elements < 0) throw InvalidInput("sample_polya: negative n_elements");
  const std::size_t k = params.dim();
  std::vector<Count> counts(k, 0);
  if (k == 1) {
    counts[0] = n_elements;
    return CountVector(std::move(counts));
  }
  if (n_elements == 0) return CountVector(std::move(counts));

  const auto rho = sample_dirichlet(params.alpha(), rng);
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += rho[i];
    cdf[i] = acc;
  }
  for (Count e = 0; e < n_elements; ++e) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= k) idx = k - 1;
    ++counts[idx];
  }
  return CountVector(std::move(counts));
}

PolyaParams sample_alpha_uniform(std::size_t k, double upper, Rng& rng) {
  if (k == 0) throw InvalidInput("sample_alpha_uniform: K must be >= 1");
  if (!(upper > 0.0)) throw InvalidInput("sample_alpha_uniform: upper must be positive");
  std::vector<double> alpha(k);
  for (double& a : alpha) {
    do { a = rng.uniform() * upper; } while (a == 0.0);
  }
  return PolyaParams(std::move(alpha));
}

std::vector<long long> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  std::vector<long long> out;
  if (parts.size() == 1) {
    out.push_back(parse_int(parts[0]));
  } else if (parts.size() == 3) {
    const long long a = parse_int(parts[0]);
    const long long b = parse_int(parts[1]);
    const long long step = parse_int(parts[2]);
    if (step <= 0 || b < a) throw InvalidInput("range '" + spec + "': need a <= b and step > 0");
    for (long long v = a; v <= b; v += step) out.push_back(v);
  } else {
    throw InvalidInput("range '" + spec + "': expected a or a:b:step");
  }
  return out;
}

}  // namespace polya
