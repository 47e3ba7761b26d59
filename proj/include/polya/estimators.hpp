#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polya/counts.hpp"

namespace polya {

struct EstimatorConfig {
  double tolerance = 1e-6;  // on max_i |alpha_i^new - alpha_i^old|
  int max_iterations = 1000;
  double alpha_floor = 1e-10;
  double alpha_cap = 1e6;

  /// Throws InvalidInput unless 0 < tolerance < 1, max_iterations >= 1 and
  /// 0 < alpha_floor < alpha_cap.
  void validate() const;
};

struct EstimateResult {
  PolyaParams params;
  int iterations = 0;
  bool converged = false;
  double final_log_likelihood = 0.0;
  /// Dimensions whose Newton curvature was exactly zero and were left alone
  /// for a sweep (GN only).
  std::size_t flat_curvature_skips = 0;
  /// Dimension updates taken where the objective was not locally concave, so
  /// alpha_i was halved or doubled along the gradient instead (GN only).
  std::size_t nonconcave_steps = 0;
};

struct MomentsEstimate {
  PolyaParams params;
  /// True when no dimension gave a usable variance and the symmetric 1/K
  /// fallback was returned.
  bool degenerate = false;
};

/// Called after each full sweep with the 1-based sweep index and the current
/// alpha. Used by tests to watch the likelihood trajectory.
using SweepObserver = std::function<void(int sweep, std::span<const double> alpha)>;

/// Moments method: mean and unbiased variance per dimension, log-averaged
/// precision over the first K-1 dimensions. Unequal totals use the mean total.
/// Requires N >= 2 and at least one sample with positive total.
MomentsEstimate estimate_moments(const SampleSet& samples, const EstimatorConfig& cfg = {});

/// One fixed-point sweep over all dimensions (alpha_sum refreshed first).
/// Returns max |delta alpha_i|.
double fpi_sweep(std::vector<double>& alpha, const CountHistograms& hist,
                 const EstimatorConfig& cfg);

/// One Gibbs-Newton sweep: a single Newton step per dimension against the
/// alpha_sum computed at the start of the sweep. Returns max |delta alpha_i|.
/// `flat_skips`, when given, is incremented for every zero-curvature skip and
/// `nonconcave` for every non-concave dimension (see EstimateResult).
double gn_sweep(std::vector<double>& alpha, const CountHistograms& hist,
                const EstimatorConfig& cfg, std::size_t* flat_skips = nullptr,
                std::size_t* nonconcave = nullptr);

/// Minka's fixed-point iteration, initialised by the Moments method.
EstimateResult estimate_minka_fpi(const SampleSet& samples, const EstimatorConfig& cfg = {},
                                  const SweepObserver& observer = {});

/// Gibbs-Newton estimator, initialised by the Moments method.
EstimateResult estimate_gn(const SampleSet& samples, const EstimatorConfig& cfg = {},
                           const SweepObserver& observer = {});

/// Warm-started variants over prebuilt histograms; used by the topic-model
/// samplers, which already hold a current alpha.
EstimateResult estimate_minka_fpi(const CountHistograms& hist, std::vector<double> initial,
                                  const EstimatorConfig& cfg = {},
                                  const SweepObserver& observer = {});
EstimateResult estimate_gn(const CountHistograms& hist, std::vector<double> initial,
                           const EstimatorConfig& cfg = {}, const SweepObserver& observer = {});

enum class Method { moments, fpi, gn };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Dispatch by method. Moments reports zero iterations and converged unless
/// it fell back to the symmetric estimate.
EstimateResult estimate(Method method, const SampleSet& samples, const EstimatorConfig& cfg = {});

}  // namespace polya
