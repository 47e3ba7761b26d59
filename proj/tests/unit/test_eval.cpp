#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "polya/error.hpp"
#include "polya/eval.hpp"
#include "polya/lda.hpp"

using namespace polya;

namespace {

TrainedModel uniform_model(std::size_t topics, std::size_t vocab) {
  TrainedModel m;
  m.topics = topics;
  m.vocab_size = vocab;
  m.alpha.assign(topics, 0.3);
  m.beta.assign(vocab, 0.1);
  m.phi.assign(topics * vocab, 1.0 / static_cast<double>(vocab));
  std::vector<std::string> terms;
  for (std::size_t v = 0; v < vocab; ++v) terms.push_back("t" + std::to_string(v));
  m.vocabulary = Vocabulary(terms);
  return m;
}

Corpus random_docs(std::size_t vocab, int docs, int len, std::uint64_t seed) {
  Rng rng(seed);
  Corpus c;
  for (int d = 0; d < docs; ++d) {
    Document doc;
    for (int t = 0; t < len; ++t) doc.push_back(static_cast<TermId>(rng.below(vocab)));
    c.docs.push_back(std::move(doc));
  }
  return c;
}

TrainConfig small_train(int topics) {
  TrainConfig c;
  c.topics = topics;
  c.iterations = 80;
  c.burn_in = 20;
  c.hyper_update_interval = 10;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(LeftToRight, EmptyDocumentScoresZero) {
  Rng rng(1);
  EXPECT_EQ(left_to_right_log_likelihood(uniform_model(2, 5), {}, 4, rng), 0.0);
}

TEST(LeftToRight, LogLikelihoodIsNonPositive) {
  const Corpus c = fixture::two_cluster_corpus(1);
  const auto m = train_lda(c, small_train(2));
  for (double l : left_to_right_all(m, c, {10, 1})) EXPECT_LE(l, 0.0);
}

TEST(LeftToRight, RejectsBadInput) {
  Rng rng(1);
  const auto m = uniform_model(2, 5);
  const Document oov = {0, 5};
  EXPECT_THROW(left_to_right_log_likelihood(m, oov, 4, rng), InvalidInput);
  const Document neg = {-1};
  EXPECT_THROW(left_to_right_log_likelihood(m, neg, 4, rng), InvalidInput);
  const Document ok = {1};
  EXPECT_THROW(left_to_right_log_likelihood(m, ok, 0, rng), InvalidInput);
  EXPECT_THROW((LtrConfig{0, 1}.validate()), InvalidInput);
}

TEST(LeftToRight, UniformModelScoresExactly) {
  for (std::size_t v : {2u, 10u, 37u, 500u}) {
    for (std::size_t k : {1u, 3u}) {
      const auto m = uniform_model(k, v);
      Rng rng(2);
      const Document doc = {0, 1, 0, 1, 0};
      EXPECT_NEAR(left_to_right_log_likelihood(m, doc, 3, rng), -5.0 * std::log(static_cast<double>(v)),
                  1e-12);
      EXPECT_NEAR(perplexity(m, random_docs(v, 6, 9, v), {5, 1}), static_cast<double>(v),
                  1e-12 * static_cast<double>(v));
    }
  }
}

TEST(Perplexity, TrainedModelBeatsUniform) {
  const Corpus all = fixture::two_cluster_corpus(4, 60, 10, 30);
  const auto split = split_train_test(all, {0.8, 2});
  const auto m = train_lda(split.train, small_train(2));
  const double ppx = perplexity(m, split.test, {20, 1});
  EXPECT_GE(ppx, 1.0);
  // Each document uses 10 of the 20 terms.
  EXPECT_LT(ppx, 12.0);
}

TEST(Perplexity, DuplicatedAndReorderedDocumentsReproduce) {
  const Corpus c = fixture::two_cluster_corpus(6, 10);
  const auto m = train_lda(c, small_train(2));
  Corpus twice = c;
  twice.docs.insert(twice.docs.end(), c.docs.begin(), c.docs.end());
  Corpus reversed = c;
  std::reverse(reversed.docs.begin(), reversed.docs.end());
  const LtrConfig cfg{8, 77};
  const auto base = left_to_right_all(m, c, cfg);
  const auto dup = left_to_right_all(m, twice, cfg);
  const auto rev = left_to_right_all(m, reversed, cfg);
  for (std::size_t j = 0; j < base.size(); ++j) {
    EXPECT_EQ(dup[j], base[j]);
    EXPECT_EQ(dup[j + base.size()], base[j]);
    EXPECT_EQ(rev[base.size() - 1 - j], base[j]);
  }
  EXPECT_NEAR(perplexity(m, twice, cfg), perplexity(m, c, cfg), 1e-12);
}

TEST(Perplexity, SerialMatchesParallel) {
  const Corpus c = fixture::two_cluster_corpus(7, 30);
  const auto m = train_lda_gn(c, small_train(3));
  const LtrConfig cfg{6, 3};
  EXPECT_EQ(left_to_right_all(m, c, cfg, Execution::serial),
            left_to_right_all(m, c, cfg, Execution::parallel));
  EXPECT_EQ(perplexity(m, c, cfg, Execution::serial), perplexity(m, c, cfg, Execution::parallel));
}

TEST(Perplexity, EmptyTestSetThrows) {
  EXPECT_THROW(perplexity(uniform_model(2, 4), Corpus{}, {}), InvalidInput);
}

namespace {

TrainedModel fake_model(std::size_t topics, std::size_t vocab, double alpha, double fill) {
  TrainedModel m = uniform_model(topics, vocab);
  m.alpha.assign(topics, alpha);
  for (std::size_t i = 0; i < m.phi.size(); ++i) m.phi[i] = fill + static_cast<double>(i);
  return m;
}

}  // namespace

TEST(Merge, TopicIndexing) {
  const auto ham = fake_model(50, 7, 0.1, 0.0);
  const auto spam = fake_model(10, 7, 0.9, 1000.0);
  const auto m = mc_lda_merge(ham, spam);
  EXPECT_EQ(m.topics(), 60u);
  EXPECT_EQ(m.first_spam_topic(), 50u);
  EXPECT_EQ(m.alpha.size(), 60u);
  EXPECT_EQ(m.alpha[49], 0.1);
  EXPECT_EQ(m.alpha[50], 0.9);
  EXPECT_EQ(m.phi_at(49, 6), ham.phi_at(49, 6));
  EXPECT_EQ(m.phi_at(50, 0), spam.phi_at(0, 0));
  EXPECT_EQ(m.phi_at(59, 3), spam.phi_at(9, 3));
}

TEST(Merge, RequiresSharedVocabulary) {
  auto other = uniform_model(2, 5);
  other.vocabulary = Vocabulary({"q", "r", "s", "t", "u"});
  EXPECT_THROW(mc_lda_merge(uniform_model(2, 5), other), InvalidInput);
  EXPECT_THROW(mc_lda_merge(uniform_model(2, 5), uniform_model(2, 6)), InvalidInput);
}

TEST(Score, SelfMergeSplitsMassEvenly) {
  const Corpus c = fixture::two_cluster_corpus(3, 200);
  const auto lda = train_lda(c, small_train(2));
  const auto m = mc_lda_merge(lda, lda);
  // Each document tends to settle on one copy of its topic, so tau is close
  // to 0 or 1 per run; pool several seeds and compare within 4 standard errors.
  double sum = 0, sum2 = 0;
  std::size_t n = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (double t : mc_lda_score_all(m, c, {30, seed})) {
      EXPECT_GT(t, 0.0);
      EXPECT_LT(t, 1.0);
      sum += t;
      sum2 += t * t;
      ++n;
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double se = std::sqrt((sum2 / static_cast<double>(n) - mean * mean) / static_cast<double>(n));
  EXPECT_NEAR(mean, 0.5, 4.0 * se);
}

TEST(Score, SpamOnlySupportGivesLargeTau) {
  MCLDAModel m;
  m.legit_topics = 2;
  m.spam_topics = 1;
  m.vocab_size = 2;
  m.alpha = {0.4, 0.4, 0.2};
  // Term 0 is impossible under the legitimate topics.
  m.phi = {0.0, 1.0, 0.0, 1.0, 0.5, 0.5};
  const Document doc(12, 0);
  Rng rng(4);
  const double tau = mc_lda_score(m, doc, 3, rng);
  EXPECT_GE(tau, 12.0 / (12.0 + 1.0));
  EXPECT_DOUBLE_EQ(tau, (12.0 + 0.2) / 13.0);
}

TEST(Score, RejectsBadInput) {
  const auto m = mc_lda_merge(uniform_model(1, 3), uniform_model(1, 3));
  Rng rng(1);
  EXPECT_THROW(mc_lda_score(m, {}, 5, rng), InvalidInput);
  const Document oov = {3};
  EXPECT_THROW(mc_lda_score(m, oov, 5, rng), InvalidInput);
  const Document ok = {1};
  EXPECT_THROW(mc_lda_score(m, ok, -1, rng), InvalidInput);
}

TEST(Score, SerialMatchesParallel) {
  const Corpus c = fixture::two_cluster_corpus(3, 40);
  const auto lda = train_lda(c, small_train(2));
  const auto m = mc_lda_merge(lda, lda);
  EXPECT_EQ(mc_lda_score_all(m, c, {10, 2}, Execution::serial),
            mc_lda_score_all(m, c, {10, 2}, Execution::parallel));
}

TEST(Classify, ThresholdIsExclusive) {
  EXPECT_EQ(classify(0.6, 0.5), Label::spam);
  EXPECT_EQ(classify(0.5, 0.5), Label::legitimate);
  EXPECT_EQ(classify(0.1, 0.5), Label::legitimate);
}

TEST(Report, HandCounts) {
  const auto r = make_report(0.5, {3, 1, 4, 2});
  EXPECT_DOUBLE_EQ(r.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 0.6);
  EXPECT_DOUBLE_EQ(r.f_measure, 2 * 0.75 * 0.6 / 1.35);
}

TEST(Report, NothingPredictedSpam) {
  const auto r = make_report(0.9, {0, 0, 5, 0});
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f_measure, 0.0);
}

TEST(Thresholds, PerfectScorer) {
  const std::vector<double> taus = {0.0, 1.0, 0.0, 1.0, 1.0};
  const std::vector<Label> labels = {Label::legitimate, Label::spam, Label::legitimate, Label::spam,
                                     Label::spam};
  const auto reps = evaluate_thresholds(taus, labels, kDefaultThresholds);
  ASSERT_EQ(reps.size(), 11u);
  for (const auto& r : reps) {
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.f_measure, 1.0);
  }
}

TEST(Thresholds, AllHamTestSet) {
  const std::vector<double> taus = {0.2, 0.7, 0.95};
  const std::vector<Label> labels(3, Label::legitimate);
  for (const auto& r : evaluate_thresholds(taus, labels, kDefaultThresholds)) {
    EXPECT_EQ(r.recall, 0.0);
    EXPECT_EQ(r.f_measure, 0.0);
    EXPECT_EQ(r.confusion.tp, 0);
  }
}

TEST(Thresholds, MetricsFollowConfusionAndAreMonotone) {
  Rng rng(12);
  std::vector<double> taus;
  std::vector<Label> labels;
  for (int j = 0; j < 200; ++j) {
    const bool spam = rng.uniform() < 0.4;
    labels.push_back(spam ? Label::spam : Label::legitimate);
    taus.push_back(std::clamp(rng.uniform() * 0.6 + (spam ? 0.35 : 0.0), 0.0, 1.0));
  }
  const auto reps = evaluate_thresholds(taus, labels, kDefaultThresholds);
  long long prev_predicted = 201;
  for (const auto& r : reps) {
    const auto& c = r.confusion;
    ASSERT_EQ(c.tp + c.fp + c.tn + c.fn, 200);
    EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(c.tp + c.tn) / 200.0);
    if (c.tp + c.fp > 0) EXPECT_DOUBLE_EQ(r.precision, static_cast<double>(c.tp) / (c.tp + c.fp));
    EXPECT_DOUBLE_EQ(r.recall, static_cast<double>(c.tp) / (c.tp + c.fn));
    const long long predicted = c.tp + c.fp;
    EXPECT_LE(predicted, prev_predicted);
    prev_predicted = predicted;
  }
  EXPECT_THROW(evaluate_thresholds(taus, std::vector<Label>(3), kDefaultThresholds), InvalidInput);
}

TEST(Thresholds, SweepReusesOneScorePerDocument) {
  const auto raw = fixture::two_class_documents(3, 20, 20);
  const Corpus all = build_corpus(raw);
  TokenizedDocs ham_raw, spam_raw;
  for (std::size_t d = 0; d < raw.docs.size(); ++d) {
    (raw.labels[d] == Label::spam ? spam_raw : ham_raw).docs.push_back(raw.docs[d]);
  }
  const Corpus ham = encode_with_vocabulary(ham_raw, all.vocabulary);
  const Corpus spam = encode_with_vocabulary(spam_raw, all.vocabulary);
  const auto m = mc_lda_merge(train_lda(ham, small_train(3)), train_lda(spam, small_train(2)));
  const ScoreConfig cfg{20, 8};
  const auto sweep = threshold_sweep(m, all, kDefaultThresholds, cfg);
  const auto cached = evaluate_thresholds(mc_lda_score_all(m, all, cfg), all.labels, kDefaultThresholds);
  ASSERT_EQ(sweep.size(), cached.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) EXPECT_EQ(sweep[i].confusion, cached[i].confusion);
  EXPECT_GT(sweep[6].accuracy, 0.9);

  Corpus unlabeled = all;
  unlabeled.labels.clear();
  EXPECT_THROW(threshold_sweep(m, unlabeled, kDefaultThresholds, cfg), InvalidInput);
}

TEST(ReportsCsv, HeaderAndRows) {
  std::ostringstream out;
  write_reports_csv(out, {make_report(0.25, {1, 2, 3, 4})});
  EXPECT_EQ(out.str(), std::string(kClassifyCsvHeader) + "\n0.25,0.4,0.3333333333333333,0.2,0.25,1,2,3,4\n");
}
