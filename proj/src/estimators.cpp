#include "polya/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "polya/error.hpp"
#include "polya/kernels.hpp"

namespace polya {

void EstimatorConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidInput("tolerance must lie in (0, 1)");
  if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (!(alpha_floor > 0.0) || !(alpha_floor < alpha_cap) || !std::isfinite(alpha_cap)) {
    throw InvalidInput("need 0 < alpha_floor < alpha_cap < inf");
  }
}

namespace {

double clamp_alpha(double a, const EstimatorConfig& cfg) {
  if (std::isnan(a)) return cfg.alpha_floor;
  return std::clamp(a, cfg.alpha_floor, cfg.alpha_cap);
}

}  // namespace

MomentsEstimate estimate_moments(const SampleSet& samples, const EstimatorConfig& cfg) {
  const std::size_t n = samples.size();
  const std::size_t k = samples.dim();
  if (n < 2) throw InvalidInput("estimate_moments: need at least 2 samples");

  std::vector<double> mean(k, 0.0);
  double mean_total = 0.0;
  for (const auto& s : samples.samples()) {
    for (std::size_t i = 0; i < k; ++i) mean[i] += static_cast<double>(s[i]);
    mean_total += static_cast<double>(s.total());
  }
  if (mean_total <= 0.0) throw InvalidInput("estimate_moments: every sample has total 0");
  for (double& m : mean) m /= static_cast<double>(n);
  mean_total /= static_cast<double>(n);

  std::vector<double> var(k, 0.0);
  for (const auto& s : samples.samples()) {
    for (std::size_t i = 0; i < k; ++i) {
      const double d = static_cast<double>(s[i]) - mean[i];
      var[i] += d * d;
    }
  }
  for (double& v : var) v /= static_cast<double>(n - 1);

  // Precision from the first K-1 dimensions, log-averaged; dimensions whose
  // ratio is not a positive finite number are skipped.
  const double total = mean_total;
  double log_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double e = mean[i];
    const double num = total * (e * (total - e) - var[i]);
    const double den = total * (var[i] - e) + e * e;
    const double ratio = num / den;
    if (den != 0.0 && std::isfinite(ratio) && ratio > 0.0) {
      log_sum += std::log(ratio);
      ++used;
    }
  }

  if (used == 0) {
    return {PolyaParams(std::vector<double>(k, clamp_alpha(1.0 / static_cast<double>(k), cfg))),
            true};
  }
  const double precision = std::exp(log_sum / static_cast<double>(used));
  std::vector<double> alpha(k);
  for (std::size_t i = 0; i < k; ++i) alpha[i] = clamp_alpha(precision * mean[i] / total, cfg);
  return {PolyaParams(std::move(alpha)), false};
}

double fpi_sweep(std::vector<double>& alpha, const CountHistograms& hist,
                 const EstimatorConfig& cfg) {
  const double alpha_sum = order_free_sum(alpha);
  const double denominator = digamma_diff_sum(alpha_sum, hist.lengths);
  if (!(denominator > 0.0)) throw InvalidInput("fpi_sweep: every sample has total 0");
  double max_delta = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double numerator = digamma_diff_sum(alpha[i], hist.per_dim[i]);
    const double next = clamp_alpha(alpha[i] * numerator / denominator, cfg);
    max_delta = std::max(max_delta, std::abs(next - alpha[i]));
    alpha[i] = next;
  }
  return max_delta;
}

double gn_sweep(std::vector<double>& alpha, const CountHistograms& hist,
                const EstimatorConfig& cfg, std::size_t* flat_skips, std::size_t* nonconcave) {
  const double alpha_sum = order_free_sum(alpha);
  const RecurrenceSums totals = recurrence_sums(alpha_sum, hist.lengths);
  double max_delta = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const RecurrenceSums dim = recurrence_sums(alpha[i], hist.per_dim[i]);
    const double curvature = totals.trigamma - dim.trigamma;
    if (curvature == 0.0) {
      if (flat_skips) ++*flat_skips;
      continue;
    }
    double next;
    if (curvature > 0.0) {
      next = alpha[i] - (totals.digamma - dim.digamma) / curvature;
      if (next < 0.0) next = alpha[i] / 2.0;
    } else {
      // Not locally concave: a Newton step would head for a minimum. Move by
      // a factor of two along the gradient instead.
      const double gradient = dim.digamma - totals.digamma;
      next = gradient < 0.0 ? alpha[i] / 2.0 : gradient > 0.0 ? alpha[i] * 2.0 : alpha[i];
      if (nonconcave) ++*nonconcave;
    }
    next = clamp_alpha(next, cfg);
    max_delta = std::max(max_delta, std::abs(next - alpha[i]));
    alpha[i] = next;
  }
  return max_delta;
}

namespace {

template <class Sweep>
EstimateResult iterate(const CountHistograms& hist, std::vector<double> alpha,
                       const EstimatorConfig& cfg, const SweepObserver& observer, Sweep sweep) {
  cfg.validate();
  if (alpha.size() != hist.dim()) throw InvalidInput("estimator: initial alpha has wrong size");
  for (double& a : alpha) a = clamp_alpha(a, cfg);

  EstimateResult result{PolyaParams(alpha), 0, false, 0.0, 0, 0};
  while (result.iterations < cfg.max_iterations) {
    const double delta = sweep(alpha, result);
    ++result.iterations;
    if (observer) observer(result.iterations, alpha);
    if (delta < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.params = PolyaParams(std::move(alpha));
  result.final_log_likelihood = polya_log_likelihood(result.params, hist);
  return result;
}

}  // namespace

EstimateResult estimate_minka_fpi(const CountHistograms& hist, std::vector<double> initial,
                                  const EstimatorConfig& cfg, const SweepObserver& observer) {
  return iterate(hist, std::move(initial), cfg, observer,
                 [&](std::vector<double>& a, EstimateResult&) { return fpi_sweep(a, hist, cfg); });
}

EstimateResult estimate_gn(const CountHistograms& hist, std::vector<double> initial,
                           const EstimatorConfig& cfg, const SweepObserver& observer) {
  return iterate(hist, std::move(initial), cfg, observer,
                 [&](std::vector<double>& a, EstimateResult& r) {
                   return gn_sweep(a, hist, cfg, &r.flat_curvature_skips, &r.nonconcave_steps);
                 });
}

EstimateResult estimate_minka_fpi(const SampleSet& samples, const EstimatorConfig& cfg,
                                  const SweepObserver& observer) {
  cfg.validate();
  auto init = estimate_moments(samples, cfg);
  return estimate_minka_fpi(build_histograms(samples), init.params.values(), cfg, observer);
}

EstimateResult estimate_gn(const SampleSet& samples, const EstimatorConfig& cfg,
                           const SweepObserver& observer) {
  cfg.validate();
  auto init = estimate_moments(samples, cfg);
  return estimate_gn(build_histograms(samples), init.params.values(), cfg, observer);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::moments: return "moments";
    case Method::fpi: return "fpi";
    case Method::gn: return "gn";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "moments") return Method::moments;
  if (name == "fpi") return Method::fpi;
  if (name == "gn") return Method::gn;
  return std::nullopt;
}

EstimateResult estimate(Method method, const SampleSet& samples, const EstimatorConfig& cfg) {
  switch (method) {
    case Method::fpi: return estimate_minka_fpi(samples, cfg);
    case Method::gn: return estimate_gn(samples, cfg);
    case Method::moments: break;
  }
  cfg.validate();
  auto m = estimate_moments(samples, cfg);
  const double ll = polya_log_likelihood(m.params, samples);
  return EstimateResult{m.params, 0, !m.degenerate, ll, 0};
}

}  // namespace polya
