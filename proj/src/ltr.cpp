#include <algorithm>
#include <cmath>

#include "polya/error.hpp"
#include "polya/eval.hpp"

namespace polya {

void LtrConfig::validate() const {
  if (particles < 1) throw InvalidInput("left-to-right: need at least one particle");
}

Rng document_stream(std::uint64_t seed, std::span<const TermId> doc) {
  std::uint64_t h = mix64(doc.size());
  for (TermId id : doc) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(id)));
  return Rng::stream(seed, h);
}

namespace {

int draw_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<int>(it - cumulative.begin()),
                  static_cast<int>(cumulative.size()) - 1);
}

void check_ids(const TrainedModel& model, std::span<const TermId> doc) {
  for (TermId id : doc) {
    if (id < 0 || static_cast<std::size_t>(id) >= model.vocab_size) {
      throw InvalidInput("left-to-right: token outside the model vocabulary");
    }
  }
}

// The per-position averages and the running log are kept in extended
// precision; perplexity exponentiates their mean, and a double exponent is
// too coarse to land on the exact value for a uniform model.
long double log_likelihood_ext(const TrainedModel& model, std::span<const TermId> doc,
                               int particles, Rng& rng) {
  if (particles < 1) throw InvalidInput("left-to-right: need at least one particle");
  const std::size_t kk = model.topics;
  check_ids(model, doc);
  const std::size_t n = doc.size();
  if (n == 0) return 0.0L;

  const double alpha_sum = order_free_sum(model.alpha);
  const auto rr = static_cast<std::size_t>(particles);
  std::vector<int> z(rr * n, 0);
  std::vector<int> counts(rr * kk, 0);
  std::vector<double> cumulative(kk);

  auto phi = [&](std::size_t k, TermId v) { return model.phi_at(k, static_cast<std::size_t>(v)); };

  long double log_l = 0.0L;
  for (std::size_t t = 0; t < n; ++t) {
    long double p_t = 0.0L;
    for (std::size_t r = 0; r < rr; ++r) {
      int* zr = &z[r * n];
      int* nr = &counts[r * kk];
      for (std::size_t u = 0; u < t; ++u) {
        --nr[zr[u]];
        double acc = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
          acc += (nr[k] + model.alpha[k]) * phi(k, doc[u]);
          cumulative[k] = acc;
        }
        zr[u] = draw_cumulative(cumulative, rng);
        ++nr[zr[u]];
      }
      const long double denom = static_cast<long double>(t) + alpha_sum;
      long double p = 0.0L;
      for (std::size_t k = 0; k < kk; ++k) {
        p += phi(k, doc[t]) * ((nr[k] + static_cast<long double>(model.alpha[k])) / denom);
      }
      p_t += p;
    }
    log_l += std::log(p_t / static_cast<long double>(rr));

    for (std::size_t r = 0; r < rr; ++r) {
      int* nr = &counts[r * kk];
      double acc = 0.0;
      for (std::size_t k = 0; k < kk; ++k) {
        acc += (nr[k] + model.alpha[k]) * phi(k, doc[t]);
        cumulative[k] = acc;
      }
      const int k = draw_cumulative(cumulative, rng);
      z[r * n + t] = k;
      ++nr[k];
    }
  }
  return log_l;
}

std::vector<long double> all_ext(const TrainedModel& model, const Corpus& test,
                                 const LtrConfig& cfg, Execution exec) {
  cfg.validate();
  // Exceptions must not escape an OpenMP region; validate up front instead.
  for (const auto& doc : test.docs) check_ids(model, doc);
  const std::size_t m = test.num_docs();
  std::vector<long double> out(m, 0.0L);
  auto one = [&](std::size_t j) {
    Rng rng = document_stream(cfg.seed, test.docs[j]);
    out[j] = log_likelihood_ext(model, test.docs[j], cfg.particles, rng);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t j = 0; j < m; ++j) one(j);
  } else {
    for (std::size_t j = 0; j < m; ++j) one(j);
  }
  return out;
}

}  // namespace

double left_to_right_log_likelihood(const TrainedModel& model, std::span<const TermId> doc,
                                    int particles, Rng& rng) {
  return static_cast<double>(log_likelihood_ext(model, doc, particles, rng));
}

std::vector<double> left_to_right_all(const TrainedModel& model, const Corpus& test,
                                      const LtrConfig& cfg, Execution exec) {
  const auto ext = all_ext(model, test, cfg, exec);
  return {ext.begin(), ext.end()};
}

double perplexity(const TrainedModel& model, const Corpus& test, const LtrConfig& cfg,
                  Execution exec) {
  const std::size_t tokens = test.num_tokens();
  if (tokens == 0) throw InvalidInput("perplexity: test set has no tokens");
  auto logs = all_ext(model, test, cfg, exec);
  // Sorted before adding so the total does not depend on document order.
  std::sort(logs.begin(), logs.end());
  long double total = 0.0L;
  for (long double l : logs) total += l;
  return static_cast<double>(std::exp(-total / static_cast<long double>(tokens)));
}

}  // namespace polya
