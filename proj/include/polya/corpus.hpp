#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace polya {

using TermId = std::int32_t;
using Document = std::vector<TermId>;

enum class Label { legitimate = 0, spam = 1 };

using StopWords = std::unordered_set<std::string>;

/// Bundled English stop-word list.
const StopWords& default_stopwords();
StopWords read_stopwords(const std::string& path);

/// Lowercases ASCII, splits on every run of non-alphanumeric bytes, drops
/// empty tokens and stop words.
std::vector<std::string> tokenize(std::string_view text, const StopWords& stopwords);

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  /// Id of `term`, inserting it if unseen.
  TermId add(const std::string& term);
  std::optional<TermId> find(std::string_view term) const;

  const std::string& term(TermId id) const { return terms_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

struct Corpus {
  std::vector<Document> docs;
  Vocabulary vocabulary;
  std::vector<Label> labels;  // empty, or one per document

  std::size_t num_docs() const { return docs.size(); }
  std::size_t num_tokens() const;
  bool labeled() const { return !labels.empty(); }
};

struct LoadStats {
  std::size_t dropped_empty_docs = 0;
  std::size_t dropped_oov_tokens = 0;
};

/// Tokenized documents before id assignment.
struct TokenizedDocs {
  std::vector<std::vector<std::string>> docs;
  std::vector<Label> labels;
};

/// Reads any supported layout:
///  - a file: one document per line (blank lines skipped);
///  - a directory with `spam/` and/or `ham/` subdirectories: labeled corpus;
///  - any other directory: every `.txt` file is one document.
/// Files are visited in sorted path order.
TokenizedDocs read_documents(const std::string& path, const StopWords& stopwords);

/// Builds the vocabulary in first-occurrence order. Documents left empty by
/// filtering are dropped. Throws InvalidInput if nothing remains.
Corpus build_corpus(const TokenizedDocs& raw, LoadStats* stats = nullptr);

/// Encodes against a fixed vocabulary: unknown tokens dropped and counted,
/// emptied documents dropped.
Corpus encode_with_vocabulary(const TokenizedDocs& raw, const Vocabulary& vocab,
                              LoadStats* stats = nullptr);

/// read_documents + build_corpus. An empty stopwords_path means the bundled
/// list. Throws DataError for unreadable paths and an empty corpus.
Corpus load_corpus(const std::string& path, const std::string& stopwords_path = {},
                   LoadStats* stats = nullptr);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
};

struct SplitResult {
  Corpus train;
  Corpus test;
  std::size_t dropped_oov_tokens = 0;
  std::size_t dropped_test_docs = 0;
};

/// Seeded shuffle; the first ceil(fraction * M) documents train. The train
/// side gets a fresh vocabulary built from its own documents, and the test
/// side is re-encoded against it.
SplitResult split_train_test(const Corpus& corpus, const SplitSpec& spec);

std::vector<std::string> decode(const Document& doc, const Vocabulary& vocab);

}  // namespace polya
