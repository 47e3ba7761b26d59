#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace polya {

using Count = std::int64_t;

/// One multinomial observation: K non-negative counts and their total.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<Count> counts);

  std::span<const Count> counts() const { return counts_; }
  Count total() const { return total_; }
  std::size_t dim() const { return counts_.size(); }
  Count operator[](std::size_t i) const { return counts_[i]; }

  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<Count> counts_;
  Count total_ = 0;
};

/// N count vectors sharing one dimension K >= 1.
class SampleSet {
 public:
  /// Requires at least one sample; K is taken from the first.
  explicit SampleSet(std::vector<CountVector> samples);
  /// Explicit dimension; an empty sample list is allowed here.
  SampleSet(std::size_t dim, std::vector<CountVector> samples);

  static SampleSet from_rows(const std::vector<std::vector<Count>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const CountVector& operator[](std::size_t j) const { return samples_[j]; }
  std::span<const CountVector> samples() const { return samples_; }

 private:
  std::size_t dim_ = 0;
  std::vector<CountVector> samples_;
};

/// Reads the whitespace-separated sample format: one sample per line,
/// `#` comment lines and blank lines skipped.
SampleSet read_samples(std::istream& in);
SampleSet read_samples_file(const std::string& path);
void write_samples(std::ostream& out, const SampleSet& samples);

/// One bin of a sparse count histogram: `freq` samples had count `value`.
struct HistBin {
  Count value;
  Count freq;
  friend bool operator==(const HistBin&, const HistBin&) = default;
};

/// Sparse histogram, ascending in value, value >= 1 and freq >= 1.
/// Zero counts are never stored.
using Histogram = std::vector<HistBin>;

/// Largest stored value, i.e. dim(C) in the recurrence loops.
inline Count histogram_extent(const Histogram& h) { return h.empty() ? 0 : h.back().value; }

/// Builds a histogram from raw values; zeros are dropped.
Histogram make_histogram(std::vector<Count> values);

/// Per-dimension count histograms plus the histogram of sample totals.
struct CountHistograms {
  std::vector<Histogram> per_dim;
  Histogram lengths;
  std::size_t n_samples = 0;

  std::size_t dim() const { return per_dim.size(); }
};

CountHistograms build_histograms(const SampleSet& samples);

/// Histograms over the rows of a row-major `rows x cols` count matrix, with
/// row totals supplied by the caller (LDA keeps them as separate vectors).
CountHistograms build_histograms(std::span<const std::int32_t> matrix, std::size_t rows,
                                 std::size_t cols, std::span<const std::int32_t> row_totals);

/// Dirichlet / Polya concentration vector with its cached sum.
class PolyaParams {
 public:
  explicit PolyaParams(std::vector<double> alpha);

  std::span<const double> alpha() const { return alpha_; }
  const std::vector<double>& values() const { return alpha_; }
  double alpha_sum() const { return alpha_sum_; }
  std::size_t dim() const { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }

 private:
  std::vector<double> alpha_;
  double alpha_sum_ = 0.0;
};

/// Sum that does not depend on the order of `values` (sorted before adding),
/// so permuting dimensions leaves derived quantities bit-identical.
double order_free_sum(std::span<const double> values);

}  // namespace polya
