#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polya/corpus.hpp"
#include "polya/estimators.hpp"
#include "polya/rng.hpp"

namespace polya {

enum class Variant { lda, lda_gn };
std::string to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// How standard LDA re-estimates its hyperparameters (LDA-GN always learns
/// both alpha and beta asymmetrically).
enum class HyperMode { fixed, asymmetric_alpha_symmetric_beta, asymmetric_both };
std::optional<HyperMode> parse_hyper_mode(std::string_view name);

struct TrainConfig {
  int topics = 10;
  int iterations = 2000;
  /// Standard LDA: sweeps with frozen hyperparameters before the first
  /// fixed-point re-estimation, then one re-estimation every interval.
  int burn_in = 50;
  int hyper_update_interval = 20;
  /// LDA-GN: sweeps before the in-loop Newton updates start.
  int gn_burn_in = 10;
  std::uint64_t seed = 42;
  double alpha_init_total = 50.0;  // alpha_k = alpha_init_total / K
  double beta_init = 0.01;
  HyperMode hyper_mode = HyperMode::asymmetric_alpha_symmetric_beta;
  /// Upper bounds of the uniform priors over alpha_k and beta_v. They cancel
  /// from every conditional and act only as clamps.
  double alpha_prior_upper = 1e6;
  double beta_prior_upper = 1e6;
  /// Floor, cap and the inner tolerance for fixed-point re-estimation.
  EstimatorConfig estimator;
  /// 0: theta/phi from the final sample. S > 0: averaged over the last S sweeps.
  int average_last = 0;

  void validate() const;
};

/// Collapsed-sampler state. Counts are row-major: n_dk is M x K, n_kv is K x V.
class TopicModelState {
 public:
  static TopicModelState random_init(const Corpus& corpus, int topics, std::vector<double> alpha,
                                     std::vector<double> beta, Rng& rng);
  static TopicModelState from_assignments(const Corpus& corpus, int topics,
                                          std::vector<std::vector<int>> z,
                                          std::vector<double> alpha, std::vector<double> beta);

  int topics() const { return topics_; }
  std::size_t num_docs() const { return doc_len_.size(); }
  std::size_t vocab_size() const { return vocab_size_; }

  const std::vector<std::vector<int>>& z() const { return z_; }
  std::span<const std::int32_t> n_dk() const { return n_dk_; }
  std::span<const std::int32_t> n_kv() const { return n_kv_; }
  std::span<const std::int32_t> n_k() const { return n_k_; }
  std::span<const std::int32_t> doc_lengths() const { return doc_len_; }
  std::int32_t n_dk(std::size_t d, int k) const { return n_dk_[d * topics_ + k]; }
  std::int32_t n_kv(int k, std::size_t v) const { return n_kv_[k * vocab_size_ + v]; }

  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }
  double beta_sum() const { return beta_sum_; }
  void set_alpha(std::vector<double> alpha);
  void set_beta(std::vector<double> beta);

  /// Recounts from z and compares with the stored count arrays.
  bool counts_consistent(const Corpus& corpus) const;

  /// Unnormalised full conditional for token (d, t) with that token's own
  /// assignment excluded from the counts. Written into `weights` (size K).
  void conditional(const Corpus& corpus, std::size_t d, std::size_t t,
                   std::span<double> weights) const;

 private:
  friend void gibbs_sweep(TopicModelState&, const Corpus&, Rng&);
  TopicModelState() = default;
  void recount(const Corpus& corpus);

  int topics_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<std::vector<int>> z_;
  std::vector<std::int32_t> n_dk_;
  std::vector<std::int32_t> n_kv_;
  std::vector<std::int32_t> n_k_;
  std::vector<std::int32_t> doc_len_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  double beta_sum_ = 0.0;
};

/// One collapsed Gibbs pass over every token in document order.
void gibbs_sweep(TopicModelState& state, const Corpus& corpus, Rng& rng);

struct TrainedModel {
  Variant variant = Variant::lda;
  std::size_t topics = 0;
  std::size_t vocab_size = 0;
  std::size_t num_docs = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> theta;  // num_docs x topics
  std::vector<double> phi;    // topics x vocab_size
  Vocabulary vocabulary;

  double theta_at(std::size_t d, std::size_t k) const { return theta[d * topics + k]; }
  double phi_at(std::size_t k, std::size_t v) const { return phi[k * vocab_size + v]; }
};

/// theta and phi from the counts of a single state.
TrainedModel extract_model(const TopicModelState& state, const Vocabulary& vocab, Variant variant);

/// Observer invoked after every sweep (1-based iteration index).
using SweepCallback = std::function<void(int iteration, const TopicModelState& state)>;

/// Standard collapsed-Gibbs LDA with scheduled fixed-point hyperparameter
/// re-estimation.
TrainedModel train_lda(const Corpus& corpus, const TrainConfig& cfg,
                       const SweepCallback& on_sweep = {});

/// LDA-GN: one Gibbs-Newton step on every alpha_k and beta_v before each sweep.
TrainedModel train_lda_gn(const Corpus& corpus, const TrainConfig& cfg,
                          const SweepCallback& on_sweep = {});

TrainedModel train(Variant variant, const Corpus& corpus, const TrainConfig& cfg,
                   const SweepCallback& on_sweep = {});

}  // namespace polya
