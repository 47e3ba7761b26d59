#include "polya/counts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "polya/error.hpp"
#include "polya/format.hpp"

namespace polya {

CountVector::CountVector(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (Count c : counts_) {
    if (c < 0) throw InvalidInput("CountVector: negative count");
    total_ += c;
  }
}

SampleSet::SampleSet(std::vector<CountVector> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw InvalidInput("SampleSet: no samples");
  dim_ = samples_.front().dim();
  if (dim_ == 0) throw InvalidInput("SampleSet: dimension must be >= 1");
  for (const auto& s : samples_) {
    if (s.dim() != dim_) throw InvalidInput("SampleSet: dimension mismatch among samples");
  }
}

SampleSet::SampleSet(std::size_t dim, std::vector<CountVector> samples)
    : dim_(dim), samples_(std::move(samples)) {
  if (dim_ == 0) throw InvalidInput("SampleSet: dimension must be >= 1");
  for (const auto& s : samples_) {
    if (s.dim() != dim_) throw InvalidInput("SampleSet: dimension mismatch among samples");
  }
}

SampleSet SampleSet::from_rows(const std::vector<std::vector<Count>>& rows) {
  std::vector<CountVector> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) samples.emplace_back(r);
  return SampleSet(std::move(samples));
}

SampleSet read_samples(std::istream& in) {
  std::vector<CountVector> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<Count> row;
    std::string tok;
    while (fields >> tok) {
      long long v = 0;
      try {
        v = parse_int(tok);
      } catch (const DataError&) {
        throw DataError("samples line " + std::to_string(lineno) + ": bad count '" + tok + "'");
      }
      if (v < 0) throw DataError("samples line " + std::to_string(lineno) + ": negative count");
      row.push_back(v);
    }
    if (!samples.empty() && row.size() != samples.front().dim()) {
      throw DataError("samples line " + std::to_string(lineno) + ": expected " +
                      std::to_string(samples.front().dim()) + " counts, got " +
                      std::to_string(row.size()));
    }
    samples.emplace_back(std::move(row));
  }
  if (samples.empty()) throw DataError("samples: no data lines");
  return SampleSet(std::move(samples));
}

SampleSet read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open samples file: " + path);
  return read_samples(in);
}

void write_samples(std::ostream& out, const SampleSet& samples) {
  for (const auto& s : samples.samples()) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (i) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

Histogram make_histogram(std::vector<Count> values) {
  std::erase(values, Count{0});
  std::sort(values.begin(), values.end());
  Histogram hist;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    hist.push_back({values[i], static_cast<Count>(j - i)});
    i = j;
  }
  return hist;
}

CountHistograms build_histograms(const SampleSet& samples) {
  if (samples.empty()) throw InvalidInput("build_histograms: no samples");
  const std::size_t k = samples.dim();
  CountHistograms out;
  out.n_samples = samples.size();
  out.per_dim.resize(k);
  std::vector<Count> column(samples.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) column[j] = samples[j][i];
    out.per_dim[i] = make_histogram(column);
  }
  for (std::size_t j = 0; j < samples.size(); ++j) column[j] = samples[j].total();
  out.lengths = make_histogram(std::move(column));
  return out;
}

CountHistograms build_histograms(std::span<const std::int32_t> matrix, std::size_t rows,
                                 std::size_t cols, std::span<const std::int32_t> row_totals) {
  if (matrix.size() != rows * cols || row_totals.size() != rows) {
    throw InvalidInput("build_histograms: matrix shape mismatch");
  }
  CountHistograms out;
  out.n_samples = rows;
  out.per_dim.resize(cols);
  std::vector<Count> column(rows);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < rows; ++j) column[j] = matrix[j * cols + i];
    out.per_dim[i] = make_histogram(column);
  }
  for (std::size_t j = 0; j < rows; ++j) column[j] = row_totals[j];
  out.lengths = make_histogram(std::move(column));
  return out;
}

PolyaParams::PolyaParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw InvalidInput("PolyaParams: empty alpha");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("PolyaParams: every alpha must be positive and finite");
    }
  }
  alpha_sum_ = order_free_sum(alpha_);
}

double order_free_sum(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (double v : sorted) s += v;
  return s;
}

}  // namespace polya
