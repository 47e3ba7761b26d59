#include "polya/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "polya/error.hpp"
#include "polya/log.hpp"
#include "polya/rng.hpp"
#include "polya/stopwords_data.hpp"

namespace fs = std::filesystem;

namespace polya {

namespace {

StopWords parse_stopwords(std::istream& in) {
  StopWords out;
  std::string line;
  while (std::getline(in, line)) {
    std::string w;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    if (!w.empty()) out.insert(std::move(w));
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> txt_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

const StopWords& default_stopwords() {
  static const StopWords words = [] {
    std::istringstream in(detail::kBundledStopwords);
    return parse_stopwords(in);
  }();
  return words;
}

StopWords read_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-word file: " + path);
  return parse_stopwords(in);
}

std::vector<std::string> tokenize(std::string_view text, const StopWords& stopwords) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stopwords.contains(cur)) out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) {
  for (auto& t : terms) {
    if (index_.contains(t)) throw InvalidInput("Vocabulary: duplicate term '" + t + "'");
    add(t);
  }
}

TermId Vocabulary::add(const std::string& term) {
  auto [it, inserted] = index_.try_emplace(term, static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

TokenizedDocs read_documents(const std::string& path, const StopWords& stopwords) {
  const fs::path root(path);
  std::error_code ec;
  if (!fs::exists(root, ec)) throw DataError("corpus path does not exist: " + path);

  TokenizedDocs out;
  if (fs::is_regular_file(root)) {
    std::ifstream in(root);
    if (!in) throw DataError("cannot read corpus file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.docs.push_back(tokenize(line, stopwords));
    }
    return out;
  }

  const bool labeled = fs::is_directory(root / "spam") || fs::is_directory(root / "ham");
  if (labeled) {
    for (auto [sub, label] : {std::pair{"ham", Label::legitimate}, std::pair{"spam", Label::spam}}) {
      if (!fs::is_directory(root / sub)) continue;
      for (const auto& f : txt_files(root / sub)) {
        out.docs.push_back(tokenize(read_file(f), stopwords));
        out.labels.push_back(label);
      }
    }
  } else {
    for (const auto& f : txt_files(root)) out.docs.push_back(tokenize(read_file(f), stopwords));
  }
  return out;
}

namespace {

template <class Lookup>
Corpus encode(const TokenizedDocs& raw, Lookup lookup, LoadStats* stats) {
  Corpus c;
  LoadStats local;
  for (std::size_t d = 0; d < raw.docs.size(); ++d) {
    Document doc;
    doc.reserve(raw.docs[d].size());
    for (const auto& tok : raw.docs[d]) {
      if (auto id = lookup(c.vocabulary, tok)) {
        doc.push_back(*id);
      } else {
        ++local.dropped_oov_tokens;
      }
    }
    if (doc.empty()) {
      ++local.dropped_empty_docs;
      continue;
    }
    c.docs.push_back(std::move(doc));
    if (!raw.labels.empty()) c.labels.push_back(raw.labels[d]);
  }
  if (local.dropped_empty_docs > 0) {
    log::warn("dropped " + std::to_string(local.dropped_empty_docs) +
              " document(s) left empty after filtering");
  }
  if (stats) *stats = local;
  return c;
}

}  // namespace

Corpus build_corpus(const TokenizedDocs& raw, LoadStats* stats) {
  Corpus c = encode(
      raw, [](Vocabulary& v, const std::string& t) { return std::optional<TermId>(v.add(t)); },
      stats);
  if (c.docs.empty()) throw InvalidInput("corpus is empty after filtering");
  return c;
}

Corpus encode_with_vocabulary(const TokenizedDocs& raw, const Vocabulary& vocab,
                              LoadStats* stats) {
  Corpus c = encode(
      raw, [&](Vocabulary&, const std::string& t) { return vocab.find(t); }, stats);
  c.vocabulary = vocab;
  return c;
}

Corpus load_corpus(const std::string& path, const std::string& stopwords_path,
                   LoadStats* stats) {
  const StopWords words = stopwords_path.empty() ? default_stopwords()
                                                 : read_stopwords(stopwords_path);
  try {
    return build_corpus(read_documents(path, words), stats);
  } catch (const InvalidInput& e) {
    throw DataError(path + ": " + e.what());
  }
}

SplitResult split_train_test(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InvalidInput("split: train fraction must lie in (0, 1)");
  }
  const std::size_t m = corpus.num_docs();
  if (m < 2) throw InvalidInput("split: need at least 2 documents");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  for (std::size_t i = m - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  const auto n_train =
      static_cast<std::size_t>(std::ceil(spec.train_fraction * static_cast<double>(m)));
  if (n_train == 0 || n_train >= m) throw InvalidInput("split leaves one side empty");

  TokenizedDocs train_raw;
  TokenizedDocs test_raw;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t d = order[i];
    auto& dst = i < n_train ? train_raw : test_raw;
    dst.docs.push_back(decode(corpus.docs[d], corpus.vocabulary));
    if (corpus.labeled()) dst.labels.push_back(corpus.labels[d]);
  }

  SplitResult out;
  out.train = build_corpus(train_raw);
  LoadStats st;
  out.test = encode_with_vocabulary(test_raw, out.train.vocabulary, &st);
  out.dropped_oov_tokens = st.dropped_oov_tokens;
  out.dropped_test_docs = st.dropped_empty_docs;
  if (out.test.docs.empty()) throw InvalidInput("split leaves the test side empty");
  return out;
}

std::vector<std::string> decode(const Document& doc, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(doc.size());
  for (TermId id : doc) out.push_back(vocab.term(id));
  return out;
}

}  // namespace polya
