#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polya/counts.hpp"
#include "polya/estimators.hpp"
#include "polya/rng.hpp"

namespace polya {

/// rho ~ Dirichlet(alpha) from normalised gamma draws, then n_elements
/// categorical draws from rho.
CountVector sample_polya(const PolyaParams& params, Count n_elements, Rng& rng);

/// Dirichlet draw; computed in log space so tiny concentrations stay finite.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);

/// alpha_i ~ Uniform(0, upper], exact zeros rejected.
PolyaParams sample_alpha_uniform(std::size_t k, double upper, Rng& rng);

/// Axis helper for `a:b:step` ranges (inclusive of b when it lands on a step).
std::vector<long long> parse_range(const std::string& spec);

struct BenchGrid {
  std::size_t dim = 10;
  double alpha_upper = 1.0;
  std::vector<long long> sample_counts;
  std::vector<long long> element_counts;
  int repeats = 10;
  std::uint64_t seed = 42;
  EstimatorConfig estimator;

  void validate() const;
  std::size_t cells() const { return sample_counts.size() * element_counts.size(); }
};

struct BenchRecord {
  Method method = Method::gn;
  long long n_samples = 0;
  long long n_elements = 0;
  std::vector<double> per_component_abs_error;
  double elapsed_ms = 0.0;
  long long iterations = 0;
  bool converged = true;
  /// Empty unless the estimator threw; the record is kept either way.
  std::string error;

  double mean_abs_error() const;
  double max_abs_error() const;
};

enum class Execution { serial, parallel };

/// One record per (cell, repeat, method); cells are independent and, with
/// Execution::parallel, evaluated concurrently. Results are identical either
/// way because each cell draws from its own (seed, cell) stream.
std::vector<BenchRecord> run_accuracy_bench(const BenchGrid& grid,
                                            Execution exec = Execution::parallel);

/// FPI and GN timed to convergence per cell, averaged over repeats: two
/// records per cell. Cells run one at a time so timings do not contend.
std::vector<BenchRecord> run_speed_bench(const BenchGrid& grid);

/// CSV row as written to disk.
struct BenchRow {
  std::string method;
  long long n_samples = 0;
  long long n_elements = 0;
  long long iterations = 0;
  double time_ms = 0.0;
  double mean_abs_err = 0.0;
  double max_abs_err = 0.0;
  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline constexpr const char* kBenchCsvHeader =
    "method,n_samples,n_elements,iterations,time_ms,mean_abs_err,max_abs_err";

BenchRow to_row(const BenchRecord& rec);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(std::istream& in);

}  // namespace polya
