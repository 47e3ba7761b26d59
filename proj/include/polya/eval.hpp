#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polya/corpus.hpp"
#include "polya/lda.hpp"
#include "polya/rng.hpp"
#include "polya/synth.hpp"

namespace polya {

struct LtrConfig {
  int particles = 20;
  std::uint64_t seed = 42;
  void validate() const;
};

/// Left-To-Right estimate of log P(doc | model). Each particle keeps its own
/// assignments for the prefix; before scoring position t every particle
/// resamples positions < t, and after scoring it samples z_t. The topic-word
/// factor is read from phi. Throws InvalidInput on an out-of-vocabulary id.
double left_to_right_log_likelihood(const TrainedModel& model, std::span<const TermId> doc,
                                    int particles, Rng& rng);

/// Per-document RNG stream keyed on the document's content, so duplicated or
/// reordered documents reproduce the same estimate.
Rng document_stream(std::uint64_t seed, std::span<const TermId> doc);

/// Left-To-Right log-likelihood of every document, in corpus order.
std::vector<double> left_to_right_all(const TrainedModel& model, const Corpus& test,
                                      const LtrConfig& cfg, Execution exec = Execution::parallel);

/// exp(-sum_j l_j / sum_j N_j). Throws InvalidInput when the test set has no tokens.
double perplexity(const TrainedModel& model, const Corpus& test, const LtrConfig& cfg,
                  Execution exec = Execution::parallel);

// --- multi-corpus LDA ----------------------------------------------------------

struct MCLDAModel {
  std::size_t legit_topics = 0;  // K_n
  std::size_t spam_topics = 0;   // K_s
  std::size_t vocab_size = 0;
  std::vector<double> phi;    // (K_n + K_s) x V, legitimate topics first
  std::vector<double> alpha;  // K_n + K_s
  Vocabulary vocabulary;

  std::size_t topics() const { return legit_topics + spam_topics; }
  double phi_at(std::size_t k, std::size_t v) const { return phi[k * vocab_size + v]; }
  /// 0-based index of the first spam topic (= K_n).
  std::size_t first_spam_topic() const { return legit_topics; }
};

MCLDAModel mc_lda_merge(const TrainedModel& legitimate, const TrainedModel& spam);

/// Collapsed inference over the document with phi frozen; returns the spam
/// mass tau of the final-sample theta.
double mc_lda_score(const MCLDAModel& model, std::span<const TermId> doc, int inference_sweeps,
                    Rng& rng);

Label classify(double tau, double threshold);

struct Confusion {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct ClassificationReport {
  double threshold = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  Confusion confusion;
};

/// Metrics with spam as the positive class. Precision is 0 when nothing is
/// predicted spam, recall is 0 when there is no spam, F1 is 0 when
/// precision + recall is 0.
ClassificationReport make_report(double threshold, const Confusion& c);

inline const std::vector<double> kDefaultThresholds = {0.05, 0.1, 0.25, 0.3, 0.35, 0.4,
                                                     0.5,  0.6, 0.7,  0.8, 0.9};

struct ScoreConfig {
  int inference_sweeps = 50;
  std::uint64_t seed = 42;
};

/// tau for every document of a labeled test corpus (already encoded with the
/// model's vocabulary), in corpus order.
std::vector<double> mc_lda_score_all(const MCLDAModel& model, const Corpus& test,
                                     const ScoreConfig& cfg, Execution exec = Execution::parallel);

/// Evaluates cached scores at every threshold.
std::vector<ClassificationReport> evaluate_thresholds(std::span<const double> taus,
                                                      std::span<const Label> labels,
                                                      std::span<const double> thresholds);

/// Scores each test document once and sweeps the thresholds over the scores.
std::vector<ClassificationReport> threshold_sweep(const MCLDAModel& model, const Corpus& test,
                                                  std::span<const double> thresholds,
                                                  const ScoreConfig& cfg,
                                                  Execution exec = Execution::parallel);

inline constexpr const char* kClassifyCsvHeader = "threshold,accuracy,precision,recall,f1,tp,fp,tn,fn";
void write_reports_csv(std::ostream& out, const std::vector<ClassificationReport>& reports);

}  // namespace polya
