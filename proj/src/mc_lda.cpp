#include <algorithm>
#include <ostream>

#include "polya/error.hpp"
#include "polya/eval.hpp"
#include "polya/format.hpp"

namespace polya {

MCLDAModel mc_lda_merge(const TrainedModel& legitimate, const TrainedModel& spam) {
  if (!(legitimate.vocabulary == spam.vocabulary) || legitimate.vocab_size != spam.vocab_size) {
    throw InvalidInput("mc_lda_merge: models must share one vocabulary");
  }
  MCLDAModel m;
  m.legit_topics = legitimate.topics;
  m.spam_topics = spam.topics;
  m.vocab_size = legitimate.vocab_size;
  m.vocabulary = legitimate.vocabulary;
  m.phi = legitimate.phi;
  m.phi.insert(m.phi.end(), spam.phi.begin(), spam.phi.end());
  m.alpha = legitimate.alpha;
  m.alpha.insert(m.alpha.end(), spam.alpha.begin(), spam.alpha.end());
  return m;
}

double mc_lda_score(const MCLDAModel& model, std::span<const TermId> doc, int inference_sweeps,
                    Rng& rng) {
  if (doc.empty()) throw InvalidInput("mc_lda_score: empty document");
  if (inference_sweeps < 0) throw InvalidInput("mc_lda_score: negative sweep count");
  const std::size_t kk = model.topics();
  for (TermId id : doc) {
    if (id < 0 || static_cast<std::size_t>(id) >= model.vocab_size) {
      throw InvalidInput("mc_lda_score: token outside the model vocabulary");
    }
  }
  std::vector<int> z(doc.size());
  std::vector<int> counts(kk, 0);
  for (int& k : z) {
    k = static_cast<int>(rng.below(kk));
    ++counts[k];
  }
  std::vector<double> cumulative(kk);
  for (int sweep = 0; sweep < inference_sweeps; ++sweep) {
    for (std::size_t t = 0; t < doc.size(); ++t) {
      --counts[z[t]];
      double acc = 0.0;
      for (std::size_t k = 0; k < kk; ++k) {
        acc += (counts[k] + model.alpha[k]) * model.phi_at(k, static_cast<std::size_t>(doc[t]));
        cumulative[k] = acc;
      }
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      z[t] = std::min(static_cast<int>(it - cumulative.begin()), static_cast<int>(kk) - 1);
      ++counts[z[t]];
    }
  }
  const double denom = static_cast<double>(doc.size()) + order_free_sum(model.alpha);
  double tau = 0.0;
  for (std::size_t k = model.first_spam_topic(); k < kk; ++k) {
    tau += (counts[k] + model.alpha[k]) / denom;
  }
  return tau;
}

Label classify(double tau, double threshold) {
  return tau > threshold ? Label::spam : Label::legitimate;
}

ClassificationReport make_report(double threshold, const Confusion& c) {
  ClassificationReport r;
  r.threshold = threshold;
  r.confusion = c;
  const auto total = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
  r.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
  r.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  r.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  const double pr = r.precision + r.recall;
  r.f_measure = pr > 0 ? 2.0 * r.precision * r.recall / pr : 0.0;
  return r;
}

std::vector<double> mc_lda_score_all(const MCLDAModel& model, const Corpus& test,
                                     const ScoreConfig& cfg, Execution exec) {
  const std::size_t m = test.num_docs();
  for (const auto& doc : test.docs) {
    if (doc.empty()) throw InvalidInput("mc_lda_score: empty document");
    for (TermId id : doc) {
      if (id < 0 || static_cast<std::size_t>(id) >= model.vocab_size) {
        throw InvalidInput("mc_lda_score: token outside the model vocabulary");
      }
    }
  }
  std::vector<double> taus(m, 0.0);
  auto one = [&](std::size_t j) {
    Rng rng = document_stream(cfg.seed, test.docs[j]);
    taus[j] = mc_lda_score(model, test.docs[j], cfg.inference_sweeps, rng);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t j = 0; j < m; ++j) one(j);
  } else {
    for (std::size_t j = 0; j < m; ++j) one(j);
  }
  return taus;
}

std::vector<ClassificationReport> evaluate_thresholds(std::span<const double> taus,
                                                      std::span<const Label> labels,
                                                      std::span<const double> thresholds) {
  if (taus.size() != labels.size()) throw InvalidInput("evaluate_thresholds: size mismatch");
  std::vector<ClassificationReport> out;
  out.reserve(thresholds.size());
  for (double th : thresholds) {
    Confusion c;
    for (std::size_t j = 0; j < taus.size(); ++j) {
      const bool predicted = classify(taus[j], th) == Label::spam;
      const bool actual = labels[j] == Label::spam;
      if (predicted && actual) ++c.tp;
      else if (predicted) ++c.fp;
      else if (actual) ++c.fn;
      else ++c.tn;
    }
    out.push_back(make_report(th, c));
  }
  return out;
}

std::vector<ClassificationReport> threshold_sweep(const MCLDAModel& model, const Corpus& test,
                                                  std::span<const double> thresholds,
                                                  const ScoreConfig& cfg, Execution exec) {
  if (!test.labeled()) throw InvalidInput("threshold_sweep: test corpus has no labels");
  const auto taus = mc_lda_score_all(model, test, cfg, exec);
  return evaluate_thresholds(taus, test.labels, thresholds);
}

void write_reports_csv(std::ostream& out, const std::vector<ClassificationReport>& reports) {
  out << kClassifyCsvHeader << '\n';
  for (const auto& r : reports) {
    out << format_double(r.threshold) << ',' << format_double(r.accuracy) << ','
        << format_double(r.precision) << ',' << format_double(r.recall) << ','
        << format_double(r.f_measure) << ',' << r.confusion.tp << ',' << r.confusion.fp << ','
        << r.confusion.tn << ',' << r.confusion.fn << '\n';
  }
}

}  // namespace polya
