#include "polya/kernels.hpp"

#include <cmath>
#include <vector>

#include "polya/error.hpp"

namespace polya {

namespace {

void require_positive(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(who) + ": x must be > 0");
}

}  // namespace

double digamma_diff_sum(double x, const Histogram& hist) {
  require_positive(x, "digamma_diff_sum");
  double acc = 0.0;
  double run = 0.0;
  Count l = 0;
  for (const auto& bin : hist) {
    for (; l < bin.value; ++l) run += 1.0 / (x + static_cast<double>(l));
    acc += static_cast<double>(bin.freq) * run;
  }
  return acc;
}

double trigamma_diff_sum(double x, const Histogram& hist) {
  require_positive(x, "trigamma_diff_sum");
  double acc = 0.0;
  double run = 0.0;
  Count l = 0;
  for (const auto& bin : hist) {
    for (; l < bin.value; ++l) {
      const double d = x + static_cast<double>(l);
      run -= 1.0 / (d * d);
    }
    acc += static_cast<double>(bin.freq) * run;
  }
  return acc;
}

RecurrenceSums recurrence_sums(double x, const Histogram& hist) {
  require_positive(x, "recurrence_sums");
  RecurrenceSums out;
  double dg = 0.0;
  double tg = 0.0;
  Count l = 0;
  for (const auto& bin : hist) {
    for (; l < bin.value; ++l) {
      const double inv = 1.0 / (x + static_cast<double>(l));
      dg += inv;
      tg -= inv * inv;
    }
    out.digamma += static_cast<double>(bin.freq) * dg;
    out.trigamma += static_cast<double>(bin.freq) * tg;
  }
  return out;
}

double log_rising_sum(double x, const Histogram& hist) {
  require_positive(x, "log_rising_sum");
  double acc = 0.0;
  double run = 0.0;
  Count l = 0;
  for (const auto& bin : hist) {
    for (; l < bin.value; ++l) run += std::log(x + static_cast<double>(l));
    acc += static_cast<double>(bin.freq) * run;
  }
  return acc;
}

double polya_log_likelihood(const PolyaParams& params, const CountHistograms& hist) {
  if (params.dim() != hist.dim()) throw InvalidInput("polya_log_likelihood: dimension mismatch");
  if (hist.n_samples == 0) return 0.0;
  std::vector<double> per_dim(params.dim());
  for (std::size_t i = 0; i < params.dim(); ++i) {
    per_dim[i] = log_rising_sum(params[i], hist.per_dim[i]);
  }
  return order_free_sum(per_dim) - log_rising_sum(params.alpha_sum(), hist.lengths);
}

double polya_log_likelihood(const PolyaParams& params, const SampleSet& samples) {
  if (params.dim() != samples.dim()) {
    throw InvalidInput("polya_log_likelihood: dimension mismatch");
  }
  if (samples.empty()) return 0.0;
  return polya_log_likelihood(params, build_histograms(samples));
}

}  // namespace polya
