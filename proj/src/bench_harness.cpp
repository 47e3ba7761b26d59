#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "polya/error.hpp"
#include "polya/format.hpp"
#include "polya/synth.hpp"

namespace polya {

void BenchGrid::validate() const {
  if (dim < 1) throw InvalidInput("bench: K must be >= 1");
  if (!(alpha_upper > 0.0)) throw InvalidInput("bench: alpha upper bound must be positive");
  if (sample_counts.empty() || element_counts.empty()) throw InvalidInput("bench: empty axis");
  for (auto v : sample_counts)
    if (v < 1) throw InvalidInput("bench: sample counts must be >= 1");
  for (auto v : element_counts)
    if (v < 1) throw InvalidInput("bench: element counts must be >= 1");
  if (repeats < 1) throw InvalidInput("bench: repeats must be >= 1");
  estimator.validate();
}

double BenchRecord::mean_abs_error() const {
  if (per_component_abs_error.empty()) return std::nan("");
  double s = 0.0;
  for (double e : per_component_abs_error) s += e;
  return s / static_cast<double>(per_component_abs_error.size());
}

double BenchRecord::max_abs_error() const {
  if (per_component_abs_error.empty()) return std::nan("");
  return *std::max_element(per_component_abs_error.begin(), per_component_abs_error.end());
}

namespace {

using Clock = std::chrono::steady_clock;

struct Cell {
  long long n_samples;
  long long n_elements;
};

Cell cell_at(const BenchGrid& grid, std::size_t index) {
  const std::size_t ne = grid.element_counts.size();
  return {grid.sample_counts[index / ne], grid.element_counts[index % ne]};
}

SampleSet draw_samples(const PolyaParams& truth, const Cell& cell, Rng& rng) {
  std::vector<CountVector> samples;
  samples.reserve(static_cast<std::size_t>(cell.n_samples));
  for (long long j = 0; j < cell.n_samples; ++j) {
    samples.push_back(sample_polya(truth, cell.n_elements, rng));
  }
  return SampleSet(std::move(samples));
}

BenchRecord run_one(Method method, const SampleSet& data, const PolyaParams& truth,
                    const Cell& cell, const EstimatorConfig& cfg) {
  BenchRecord rec;
  rec.method = method;
  rec.n_samples = cell.n_samples;
  rec.n_elements = cell.n_elements;
  const auto t0 = Clock::now();
  try {
    const EstimateResult res = estimate(method, data, cfg);
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    rec.iterations = res.iterations;
    rec.converged = res.converged;
    rec.per_component_abs_error.resize(truth.dim());
    for (std::size_t i = 0; i < truth.dim(); ++i) {
      rec.per_component_abs_error[i] = std::abs(res.params[i] - truth[i]);
    }
  } catch (const std::exception& e) {
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    rec.converged = false;
    rec.error = e.what();
  }
  return rec;
}

std::vector<BenchRecord> accuracy_cell(const BenchGrid& grid, std::size_t index) {
  const Cell cell = cell_at(grid, index);
  Rng rng = Rng::stream(grid.seed, index);
  std::vector<BenchRecord> out;
  for (int r = 0; r < grid.repeats; ++r) {
    const PolyaParams truth = sample_alpha_uniform(grid.dim, grid.alpha_upper, rng);
    const SampleSet data = draw_samples(truth, cell, rng);
    for (Method m : {Method::moments, Method::fpi, Method::gn}) {
      out.push_back(run_one(m, data, truth, cell, grid.estimator));
    }
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> run_accuracy_bench(const BenchGrid& grid, Execution exec) {
  grid.validate();
  const std::size_t n_cells = grid.cells();
  std::vector<std::vector<BenchRecord>> per_cell(n_cells);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t c = 0; c < n_cells; ++c) per_cell[c] = accuracy_cell(grid, c);
  } else {
    for (std::size_t c = 0; c < n_cells; ++c) per_cell[c] = accuracy_cell(grid, c);
  }
  std::vector<BenchRecord> out;
  for (auto& cell : per_cell) {
    for (auto& rec : cell) out.push_back(std::move(rec));
  }
  return out;
}

std::vector<BenchRecord> run_speed_bench(const BenchGrid& grid) {
  grid.validate();
  std::vector<BenchRecord> out;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const Cell cell = cell_at(grid, c);
    Rng rng = Rng::stream(grid.seed, c);
    BenchRecord acc[2];
    long long iters[2] = {0, 0};
    const Method methods[2] = {Method::fpi, Method::gn};
    for (int m = 0; m < 2; ++m) {
      acc[m].method = methods[m];
      acc[m].n_samples = cell.n_samples;
      acc[m].n_elements = cell.n_elements;
      acc[m].per_component_abs_error.assign(grid.dim, 0.0);
    }
    for (int r = 0; r < grid.repeats; ++r) {
      const PolyaParams truth = sample_alpha_uniform(grid.dim, grid.alpha_upper, rng);
      const SampleSet data = draw_samples(truth, cell, rng);
      for (int m = 0; m < 2; ++m) {
        BenchRecord one = run_one(methods[m], data, truth, cell, grid.estimator);
        acc[m].elapsed_ms += one.elapsed_ms;
        iters[m] += one.iterations;
        acc[m].converged = acc[m].converged && one.converged;
        if (!one.error.empty()) acc[m].error = one.error;
        for (std::size_t i = 0; i < one.per_component_abs_error.size(); ++i) {
          acc[m].per_component_abs_error[i] += one.per_component_abs_error[i];
        }
      }
    }
    const double reps = static_cast<double>(grid.repeats);
    for (int m = 0; m < 2; ++m) {
      acc[m].elapsed_ms /= reps;
      acc[m].iterations = static_cast<long long>(std::llround(static_cast<double>(iters[m]) / reps));
      for (double& e : acc[m].per_component_abs_error) e /= reps;
      out.push_back(std::move(acc[m]));
    }
  }
  return out;
}

BenchRow to_row(const BenchRecord& rec) {
  return {to_string(rec.method), rec.n_samples,        rec.n_elements,       rec.iterations,
          rec.elapsed_ms,        rec.mean_abs_error(), rec.max_abs_error()};
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.n_samples << ',' << r.n_elements << ',' << r.iterations << ','
        << format_double(r.time_ms) << ',' << format_double(r.mean_abs_err) << ','
        << format_double(r.max_abs_err) << '\n';
  }
}

std::vector<BenchRow> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) {
    throw DataError("bench csv: missing or unexpected header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw DataError("bench csv: expected 7 fields");
    rows.push_back({f[0], parse_int(f[1]), parse_int(f[2]), parse_int(f[3]), parse_double(f[4]),
                    parse_double(f[5]), parse_double(f[6])});
  }
  return rows;
}

}  // namespace polya
