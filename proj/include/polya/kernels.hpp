#pragma once

#include "polya/counts.hpp"

namespace polya {

// Recurrence kernels over a sparse histogram. Each walks l = 1..extent once,
// keeping a running sum of 1/(x + l - 1) (or its square) and adding
// freq * running_sum whenever l reaches a stored value m. No special-function
// calls are made.

/// sum_m hist[m] * (digamma(x + m) - digamma(x)). Throws DomainError if x <= 0.
double digamma_diff_sum(double x, const Histogram& hist);

/// sum_m hist[m] * (trigamma(x + m) - trigamma(x)); always <= 0.
double trigamma_diff_sum(double x, const Histogram& hist);

struct RecurrenceSums {
  double digamma = 0.0;
  double trigamma = 0.0;
};

/// Both sums in one pass, as the Newton step needs them together.
RecurrenceSums recurrence_sums(double x, const Histogram& hist);

/// sum_m hist[m] * (lgamma(x + m) - lgamma(x)), accumulated as log rising
/// factorials sum_{l<m} log(x + l).
double log_rising_sum(double x, const Histogram& hist);

/// Polya log-likelihood log L(alpha | D) from precomputed histograms.
double polya_log_likelihood(const PolyaParams& params, const CountHistograms& hist);

/// Polya log-likelihood of a sample set; zero samples give 0.
double polya_log_likelihood(const PolyaParams& params, const SampleSet& samples);

}  // namespace polya
