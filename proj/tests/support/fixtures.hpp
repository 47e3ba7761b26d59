// Synthetic corpora shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "polya/corpus.hpp"
#include "polya/rng.hpp"
#include "polya/synth.hpp"

namespace fixture {

// Documents alternate between two disjoint vocabularies "a0".."a{h-1}" and
// "b0".."b{h-1}"; tokens are uniform within the half.
inline polya::Corpus two_cluster_corpus(std::uint64_t seed, int docs = 20, int half = 10,
                                        int doc_len = 30) {
  polya::Rng rng(seed);
  polya::TokenizedDocs raw;
  for (int d = 0; d < docs; ++d) {
    const char prefix = d % 2 == 0 ? 'a' : 'b';
    std::vector<std::string> doc;
    for (int t = 0; t < doc_len; ++t) {
      doc.push_back(prefix + std::to_string(rng.below(static_cast<std::uint64_t>(half))));
    }
    raw.docs.push_back(std::move(doc));
  }
  return polya::build_corpus(raw);
}

inline std::size_t categorical(const std::vector<double>& p, polya::Rng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (u < p[i]) return i;
    u -= p[i];
  }
  return p.size() - 1;
}

struct LdaSpec {
  int topics = 5;
  int vocab = 200;
  int docs = 300;
  int min_len = 50;
  int max_len = 100;
  double alpha = 0.1;
  // beta_v = head_beta for the first `head` terms, tail_beta for the rest.
  int head = 40;
  double head_beta = 2.0;
  double tail_beta = 0.02;
};

// Documents drawn from the LDA generative process with a known asymmetric beta.
inline polya::TokenizedDocs lda_documents(const LdaSpec& s, std::uint64_t seed) {
  polya::Rng rng(seed);
  std::vector<double> beta(static_cast<std::size_t>(s.vocab));
  for (int v = 0; v < s.vocab; ++v) beta[v] = v < s.head ? s.head_beta : s.tail_beta;
  std::vector<std::vector<double>> phi;
  for (int k = 0; k < s.topics; ++k) phi.push_back(polya::sample_dirichlet(beta, rng));
  const std::vector<double> alpha(static_cast<std::size_t>(s.topics), s.alpha);
  polya::TokenizedDocs raw;
  for (int d = 0; d < s.docs; ++d) {
    const auto theta = polya::sample_dirichlet(alpha, rng);
    const int n = s.min_len + static_cast<int>(rng.below(static_cast<std::uint64_t>(s.max_len - s.min_len + 1)));
    std::vector<std::string> doc;
    for (int t = 0; t < n; ++t) {
      const auto k = categorical(theta, rng);
      doc.push_back("w" + std::to_string(categorical(phi[k], rng)));
    }
    raw.docs.push_back(std::move(doc));
  }
  return raw;
}

// Labeled two-class documents: ham draws from "h*" terms, spam from "s*".
// Within a class, each document mixes a few class topics.
inline polya::TokenizedDocs two_class_documents(std::uint64_t seed, int ham_docs, int spam_docs,
                                                int terms_per_class = 40, int doc_len = 40) {
  polya::Rng rng(seed);
  polya::TokenizedDocs raw;
  auto make = [&](char prefix, int count, polya::Label label) {
    const std::vector<double> beta(static_cast<std::size_t>(terms_per_class), 0.1);
    std::vector<std::vector<double>> topics;
    for (int k = 0; k < 4; ++k) topics.push_back(polya::sample_dirichlet(beta, rng));
    const std::vector<double> alpha(topics.size(), 0.5);
    for (int d = 0; d < count; ++d) {
      const auto theta = polya::sample_dirichlet(alpha, rng);
      std::vector<std::string> doc;
      for (int t = 0; t < doc_len; ++t) {
        const auto k = categorical(theta, rng);
        doc.push_back(prefix + std::to_string(categorical(topics[k], rng)));
      }
      raw.docs.push_back(std::move(doc));
      raw.labels.push_back(label);
    }
  };
  make('h', ham_docs, polya::Label::legitimate);
  make('s', spam_docs, polya::Label::spam);
  return raw;
}

}  // namespace fixture
