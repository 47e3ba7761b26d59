#include "polya/lda.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "polya/error.hpp"
#include "polya/log.hpp"

namespace polya {

std::string to_string(Variant v) { return v == Variant::lda ? "lda" : "lda_gn"; }

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "lda") return Variant::lda;
  if (name == "lda-gn" || name == "lda_gn") return Variant::lda_gn;
  return std::nullopt;
}

std::optional<HyperMode> parse_hyper_mode(std::string_view name) {
  if (name == "fixed") return HyperMode::fixed;
  if (name == "asymmetric_alpha_symmetric_beta" || name == "recommended") {
    return HyperMode::asymmetric_alpha_symmetric_beta;
  }
  if (name == "asymmetric_both") return HyperMode::asymmetric_both;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (topics < 1) throw InvalidInput("train: need at least one topic");
  if (iterations < 1) throw InvalidInput("train: iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw InvalidInput("train: need 0 <= burn_in < iterations");
  if (hyper_update_interval < 1) throw InvalidInput("train: update interval must be >= 1");
  if (gn_burn_in < 0) throw InvalidInput("train: gn_burn_in must be >= 0");
  if (!(alpha_init_total > 0.0) || !(beta_init > 0.0)) {
    throw InvalidInput("train: initial hyperparameters must be positive");
  }
  if (!(alpha_prior_upper > 0.0) || !(beta_prior_upper > 0.0)) {
    throw InvalidInput("train: prior upper bounds must be positive");
  }
  if (alpha_init_total / topics > alpha_prior_upper || beta_init > beta_prior_upper) {
    throw InvalidInput("train: initial hyperparameters exceed the prior upper bounds");
  }
  if (average_last < 0 || average_last > iterations) {
    throw InvalidInput("train: average_last must lie in [0, iterations]");
  }
  estimator.validate();
}

// --- state -----------------------------------------------------------------

TopicModelState TopicModelState::random_init(const Corpus& corpus, int topics,
                                             std::vector<double> alpha, std::vector<double> beta,
                                             Rng& rng) {
  std::vector<std::vector<int>> z(corpus.num_docs());
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    z[d].resize(corpus.docs[d].size());
    for (int& k : z[d]) k = static_cast<int>(rng.below(static_cast<std::uint64_t>(topics)));
  }
  return from_assignments(corpus, topics, std::move(z), std::move(alpha), std::move(beta));
}

TopicModelState TopicModelState::from_assignments(const Corpus& corpus, int topics,
                                                  std::vector<std::vector<int>> z,
                                                  std::vector<double> alpha,
                                                  std::vector<double> beta) {
  if (topics < 1) throw InvalidInput("state: need at least one topic");
  if (z.size() != corpus.num_docs()) throw InvalidInput("state: z has wrong document count");
  TopicModelState s;
  s.topics_ = topics;
  s.vocab_size_ = corpus.vocabulary.size();
  for (std::size_t d = 0; d < z.size(); ++d) {
    if (z[d].size() != corpus.docs[d].size()) throw InvalidInput("state: z has wrong length");
    for (int k : z[d]) {
      if (k < 0 || k >= topics) throw InvalidInput("state: topic out of range");
    }
  }
  s.z_ = std::move(z);
  s.set_alpha(std::move(alpha));
  s.set_beta(std::move(beta));
  s.recount(corpus);
  return s;
}

void TopicModelState::recount(const Corpus& corpus) {
  const std::size_t m = corpus.num_docs();
  n_dk_.assign(m * topics_, 0);
  n_kv_.assign(static_cast<std::size_t>(topics_) * vocab_size_, 0);
  n_k_.assign(topics_, 0);
  doc_len_.assign(m, 0);
  for (std::size_t d = 0; d < m; ++d) {
    const auto& doc = corpus.docs[d];
    doc_len_[d] = static_cast<std::int32_t>(doc.size());
    for (std::size_t t = 0; t < doc.size(); ++t) {
      const int k = z_[d][t];
      const auto v = static_cast<std::size_t>(doc[t]);
      if (v >= vocab_size_) throw InvalidInput("state: term id outside vocabulary");
      ++n_dk_[d * topics_ + k];
      ++n_kv_[k * vocab_size_ + v];
      ++n_k_[k];
    }
  }
}

void TopicModelState::set_alpha(std::vector<double> alpha) {
  if (alpha.size() != static_cast<std::size_t>(topics_)) throw InvalidInput("state: alpha size");
  alpha_ = std::move(alpha);
}

void TopicModelState::set_beta(std::vector<double> beta) {
  if (beta.size() != vocab_size_) throw InvalidInput("state: beta size");
  beta_ = std::move(beta);
  beta_sum_ = order_free_sum(beta_);
}

bool TopicModelState::counts_consistent(const Corpus& corpus) const {
  TopicModelState fresh = *this;
  fresh.recount(corpus);
  if (fresh.n_dk_ != n_dk_ || fresh.n_kv_ != n_kv_ || fresh.n_k_ != n_k_) return false;
  // The three identities, checked directly.
  long long total = 0;
  for (std::size_t d = 0; d < num_docs(); ++d) {
    long long row = 0;
    for (int k = 0; k < topics_; ++k) row += n_dk(d, k);
    if (row != doc_len_[d]) return false;
    total += row;
  }
  long long topic_total = 0;
  for (int k = 0; k < topics_; ++k) {
    long long row = 0;
    for (std::size_t v = 0; v < vocab_size_; ++v) row += n_kv(k, v);
    if (row != n_k_[k]) return false;
    topic_total += n_k_[k];
  }
  return topic_total == total;
}

void TopicModelState::conditional(const Corpus& corpus, std::size_t d, std::size_t t,
                                  std::span<double> weights) const {
  const int own = z_[d][t];
  const auto v = static_cast<std::size_t>(corpus.docs[d][t]);
  for (int k = 0; k < topics_; ++k) {
    const int self = k == own ? 1 : 0;
    const double doc_part = n_dk_[d * topics_ + k] - self + alpha_[k];
    const double word_part = n_kv_[k * vocab_size_ + v] - self + beta_[v];
    const double topic_part = n_k_[k] - self + beta_sum_;
    weights[k] = doc_part * word_part / topic_part;
  }
}

namespace {

int draw_from(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto k = static_cast<int>(it - cumulative.begin());
  return std::min(k, static_cast<int>(cumulative.size()) - 1);
}

}  // namespace

void gibbs_sweep(TopicModelState& s, const Corpus& corpus, Rng& rng) {
  const int kk = s.topics_;
  const std::size_t vv = s.vocab_size_;
  std::vector<double> cumulative(kk);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& doc = corpus.docs[d];
    std::int32_t* doc_counts = &s.n_dk_[d * kk];
    for (std::size_t t = 0; t < doc.size(); ++t) {
      const auto v = static_cast<std::size_t>(doc[t]);
      int k = s.z_[d][t];
      --doc_counts[k];
      --s.n_kv_[k * vv + v];
      --s.n_k_[k];

      double acc = 0.0;
      for (int j = 0; j < kk; ++j) {
        acc += (doc_counts[j] + s.alpha_[j]) * (s.n_kv_[j * vv + v] + s.beta_[v]) /
               (s.n_k_[j] + s.beta_sum_);
        cumulative[j] = acc;
      }
      k = draw_from(cumulative, rng);

      s.z_[d][t] = k;
      ++doc_counts[k];
      ++s.n_kv_[k * vv + v];
      ++s.n_k_[k];
    }
  }
  assert(s.counts_consistent(corpus));
}

// --- training ----------------------------------------------------------------

TrainedModel extract_model(const TopicModelState& s, const Vocabulary& vocab, Variant variant) {
  TrainedModel m;
  m.variant = variant;
  m.topics = static_cast<std::size_t>(s.topics());
  m.vocab_size = s.vocab_size();
  m.num_docs = s.num_docs();
  m.alpha = s.alpha();
  m.beta = s.beta();
  m.vocabulary = vocab;
  const double alpha_sum = order_free_sum(m.alpha);
  m.theta.resize(m.num_docs * m.topics);
  for (std::size_t d = 0; d < m.num_docs; ++d) {
    const double denom = s.doc_lengths()[d] + alpha_sum;
    for (std::size_t k = 0; k < m.topics; ++k) {
      m.theta[d * m.topics + k] = (s.n_dk(d, static_cast<int>(k)) + m.alpha[k]) / denom;
    }
  }
  m.phi.resize(m.topics * m.vocab_size);
  for (std::size_t k = 0; k < m.topics; ++k) {
    const double denom = s.n_k()[k] + s.beta_sum();
    for (std::size_t v = 0; v < m.vocab_size; ++v) {
      m.phi[k * m.vocab_size + v] = (s.n_kv(static_cast<int>(k), v) + m.beta[v]) / denom;
    }
  }
  return m;
}

namespace {

void check_corpus(const Corpus& corpus) {
  if (corpus.docs.empty()) throw InvalidInput("train: corpus is empty");
  if (corpus.vocabulary.size() == 0) throw InvalidInput("train: empty vocabulary");
}

CountHistograms doc_topic_histograms(const TopicModelState& s) {
  return build_histograms(s.n_dk(), s.num_docs(), static_cast<std::size_t>(s.topics()),
                          s.doc_lengths());
}

CountHistograms topic_term_histograms(const TopicModelState& s) {
  return build_histograms(s.n_kv(), static_cast<std::size_t>(s.topics()), s.vocab_size(), s.n_k());
}

EstimatorConfig capped(EstimatorConfig cfg, double upper) {
  cfg.alpha_cap = std::min(cfg.alpha_cap, upper);
  return cfg;
}

void refit_fixed_point(TopicModelState& s, const TrainConfig& cfg) {
  const EstimatorConfig alpha_cfg = capped(cfg.estimator, cfg.alpha_prior_upper);
  const EstimatorConfig beta_cfg = capped(cfg.estimator, cfg.beta_prior_upper);
  try {
    auto fit = estimate_minka_fpi(doc_topic_histograms(s), s.alpha(), alpha_cfg);
    s.set_alpha(fit.params.values());
  } catch (const std::exception& e) {
    log::warn(std::string("alpha re-estimation failed, keeping previous values: ") + e.what());
  }
  try {
    auto fit = estimate_minka_fpi(topic_term_histograms(s), s.beta(), beta_cfg);
    std::vector<double> beta = fit.params.values();
    if (cfg.hyper_mode == HyperMode::asymmetric_alpha_symmetric_beta) {
      const double mean = fit.params.alpha_sum() / static_cast<double>(beta.size());
      std::fill(beta.begin(), beta.end(), mean);
    }
    s.set_beta(std::move(beta));
  } catch (const std::exception& e) {
    log::warn(std::string("beta re-estimation failed, keeping previous values: ") + e.what());
  }
}

void gn_update(TopicModelState& s, const TrainConfig& cfg) {
  const EstimatorConfig alpha_cfg = capped(cfg.estimator, cfg.alpha_prior_upper);
  const EstimatorConfig beta_cfg = capped(cfg.estimator, cfg.beta_prior_upper);
  try {
    std::vector<double> alpha = s.alpha();
    gn_sweep(alpha, doc_topic_histograms(s), alpha_cfg);
    s.set_alpha(std::move(alpha));
  } catch (const std::exception& e) {
    log::warn(std::string("alpha Newton step failed, keeping previous values: ") + e.what());
  }
  try {
    std::vector<double> beta = s.beta();
    gn_sweep(beta, topic_term_histograms(s), beta_cfg);
    s.set_beta(std::move(beta));
  } catch (const std::exception& e) {
    log::warn(std::string("beta Newton step failed, keeping previous values: ") + e.what());
  }
}

class Averager {
 public:
  Averager(int window, int iterations) : start_(iterations - window + 1), active_(window > 0) {}

  void offer(int iteration, const TopicModelState& s, const Vocabulary& vocab, Variant variant) {
    if (!active_ || iteration < start_) return;
    TrainedModel m = extract_model(s, vocab, variant);
    if (count_ == 0) {
      sum_ = std::move(m);
    } else {
      for (std::size_t i = 0; i < m.theta.size(); ++i) sum_.theta[i] += m.theta[i];
      for (std::size_t i = 0; i < m.phi.size(); ++i) sum_.phi[i] += m.phi[i];
      sum_.alpha = m.alpha;
      sum_.beta = m.beta;
    }
    ++count_;
  }

  TrainedModel finish(const TopicModelState& s, const Vocabulary& vocab, Variant variant) {
    if (!active_ || count_ == 0) return extract_model(s, vocab, variant);
    for (double& x : sum_.theta) x /= count_;
    for (double& x : sum_.phi) x /= count_;
    return std::move(sum_);
  }

 private:
  int start_;
  bool active_;
  int count_ = 0;
  TrainedModel sum_;
};

TopicModelState initial_state(const Corpus& corpus, const TrainConfig& cfg, Rng& rng) {
  const auto k = static_cast<std::size_t>(cfg.topics);
  return TopicModelState::random_init(
      corpus, cfg.topics, std::vector<double>(k, cfg.alpha_init_total / cfg.topics),
      std::vector<double>(corpus.vocabulary.size(), cfg.beta_init), rng);
}

}  // namespace

TrainedModel train_lda(const Corpus& corpus, const TrainConfig& cfg, const SweepCallback& on_sweep) {
  cfg.validate();
  check_corpus(corpus);
  Rng rng(cfg.seed);
  TopicModelState state = initial_state(corpus, cfg, rng);
  Averager avg(cfg.average_last, cfg.iterations);
  for (int it = 1; it <= cfg.iterations; ++it) {
    gibbs_sweep(state, corpus, rng);
    if (cfg.hyper_mode != HyperMode::fixed && it > cfg.burn_in &&
        (it - cfg.burn_in) % cfg.hyper_update_interval == 0) {
      refit_fixed_point(state, cfg);
    }
    if (on_sweep) on_sweep(it, state);
    avg.offer(it, state, corpus.vocabulary, Variant::lda);
  }
  return avg.finish(state, corpus.vocabulary, Variant::lda);
}

TrainedModel train_lda_gn(const Corpus& corpus, const TrainConfig& cfg,
                          const SweepCallback& on_sweep) {
  cfg.validate();
  check_corpus(corpus);
  Rng rng(cfg.seed);
  TopicModelState state = initial_state(corpus, cfg, rng);
  Averager avg(cfg.average_last, cfg.iterations);
  for (int it = 1; it <= cfg.iterations; ++it) {
    if (it > cfg.gn_burn_in) gn_update(state, cfg);
    gibbs_sweep(state, corpus, rng);
    if (on_sweep) on_sweep(it, state);
    avg.offer(it, state, corpus.vocabulary, Variant::lda_gn);
  }
  return avg.finish(state, corpus.vocabulary, Variant::lda_gn);
}

TrainedModel train(Variant variant, const Corpus& corpus, const TrainConfig& cfg,
                   const SweepCallback& on_sweep) {
  return variant == Variant::lda ? train_lda(corpus, cfg, on_sweep)
                                 : train_lda_gn(corpus, cfg, on_sweep);
}

}  // namespace polya
