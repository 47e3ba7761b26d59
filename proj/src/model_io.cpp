#include "polya/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "polya/error.hpp"
#include "polya/format.hpp"

namespace polya {

namespace {

void write_row(std::ostream& out, const double* begin, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << format_double(begin[i]);
  }
  out << '\n';
}

std::vector<double> parse_floats(const std::string& line, std::size_t expected, const char* what) {
  std::istringstream ss(line);
  std::vector<double> out;
  out.reserve(expected);
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok));
  if (out.size() != expected) {
    throw DataError(std::string("model: ") + what + " expects " + std::to_string(expected) +
                    " values, found " + std::to_string(out.size()));
  }
  return out;
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(std::string("model: truncated before ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::size_t header_field(const std::string& header, const std::string& key) {
  const auto pos = header.find(" " + key + "=");
  if (pos == std::string::npos) throw DataError("model header missing " + key);
  const auto start = pos + key.size() + 2;
  const auto end = header.find(' ', start);
  const long long v = parse_int(header.substr(start, end - start));
  if (v < 0) throw DataError("model header: negative " + key);
  return static_cast<std::size_t>(v);
}

std::string strip_prefix(const std::string& line, const std::string& prefix) {
  if (line.rfind(prefix, 0) != 0) throw DataError("model: expected line starting with '" + prefix + "'");
  return line.substr(prefix.size());
}

}  // namespace

void write_model(std::ostream& out, const TrainedModel& m) {
  out << "ldamodel v1 variant=" << to_string(m.variant) << " K=" << m.topics
      << " V=" << m.vocab_size << " M=" << m.num_docs << '\n';
  out << "alpha:";
  for (double a : m.alpha) out << ' ' << format_double(a);
  out << "\nbeta:";
  for (double b : m.beta) out << ' ' << format_double(b);
  out << '\n';
  for (std::size_t k = 0; k < m.topics; ++k) write_row(out, &m.phi[k * m.vocab_size], m.vocab_size);
  for (std::size_t d = 0; d < m.num_docs; ++d) write_row(out, &m.theta[d * m.topics], m.topics);
  for (const auto& term : m.vocabulary.terms()) out << term << '\n';
}

void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  write_model(out, model);
  if (!out) throw DataError("error writing model file: " + path);
}

TrainedModel read_model(std::istream& in) {
  const std::string header = next_line(in, "header");
  if (header.rfind("ldamodel v1 ", 0) != 0) throw DataError("not an ldamodel v1 file");
  TrainedModel m;
  const auto vpos = header.find("variant=");
  if (vpos == std::string::npos) throw DataError("model header missing variant");
  const auto vend = header.find(' ', vpos);
  const auto variant = parse_variant(header.substr(vpos + 8, vend - vpos - 8));
  if (!variant) throw DataError("model header: unknown variant");
  m.variant = *variant;
  m.topics = header_field(header, "K");
  m.vocab_size = header_field(header, "V");
  m.num_docs = header_field(header, "M");
  if (m.topics == 0 || m.vocab_size == 0) throw DataError("model header: K and V must be positive");

  m.alpha = parse_floats(strip_prefix(next_line(in, "alpha"), "alpha:"), m.topics, "alpha");
  m.beta = parse_floats(strip_prefix(next_line(in, "beta"), "beta:"), m.vocab_size, "beta");
  m.phi.reserve(m.topics * m.vocab_size);
  for (std::size_t k = 0; k < m.topics; ++k) {
    auto row = parse_floats(next_line(in, "phi"), m.vocab_size, "phi row");
    m.phi.insert(m.phi.end(), row.begin(), row.end());
  }
  m.theta.reserve(m.num_docs * m.topics);
  for (std::size_t d = 0; d < m.num_docs; ++d) {
    auto row = parse_floats(next_line(in, "theta"), m.topics, "theta row");
    m.theta.insert(m.theta.end(), row.begin(), row.end());
  }
  std::vector<std::string> terms;
  terms.reserve(m.vocab_size);
  for (std::size_t v = 0; v < m.vocab_size; ++v) terms.push_back(next_line(in, "vocabulary"));
  try {
    m.vocabulary = Vocabulary(std::move(terms));
  } catch (const InvalidInput& e) {
    throw DataError(std::string("model vocabulary: ") + e.what());
  }
  return m;
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  return read_model(in);
}

}  // namespace polya
