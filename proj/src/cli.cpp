#include "polya/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "polya/corpus.hpp"
#include "polya/error.hpp"
#include "polya/estimators.hpp"
#include "polya/eval.hpp"
#include "polya/format.hpp"
#include "polya/kernels.hpp"
#include "polya/lda.hpp"
#include "polya/log.hpp"
#include "polya/model_io.hpp"
#include "polya/synth.hpp"

namespace polya::cli {

namespace {

// Bad flag values detected after parsing; maps to exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
void as_usage(F&& check) {
  try {
    check();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
}

// Writes to the named file, or to `fallback` when the path is empty.
template <typename F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  write(file);
  if (!file) throw DataError("error writing " + path);
}

StopWords stopwords_from(const std::string& path) {
  return path.empty() ? default_stopwords() : read_stopwords(path);
}

// --- fit --------------------------------------------------------------------

struct FitOptions {
  std::string method = "gn";
  std::string input;
  double tolerance = 1e-6;
  int max_iter = 1000;
  bool json = false;
};

void run_fit(const FitOptions& o, std::ostream& out) {
  EstimatorConfig cfg;
  cfg.tolerance = o.tolerance;
  cfg.max_iterations = o.max_iter;
  as_usage([&] { cfg.validate(); });
  const Method method = *parse_method(o.method);

  const SampleSet samples = read_samples_file(o.input);
  const EstimateResult res = [&] {
    try {
      return estimate(method, samples, cfg);
    } catch (const InvalidInput& e) {
      throw DataError(o.input + ": " + e.what());
    }
  }();

  if (o.json) {
    nlohmann::ordered_json j;
    j["method"] = to_string(method);
    j["alpha"] = res.params.values();
    j["iterations"] = res.iterations;
    j["loglik"] = res.final_log_likelihood;
    j["converged"] = res.converged;
    out << j.dump() << '\n';
    return;
  }
  out << "alpha = [" << join_doubles(res.params.values(), ", ") << "]\n";
  out << "iterations=" << res.iterations << '\n';
  out << "loglik=" << format_double(res.final_log_likelihood) << '\n';
  out << "converged=" << (res.converged ? "true" : "false") << '\n';
}

// --- bench ------------------------------------------------------------------

struct BenchOptions {
  std::string kind;
  std::size_t k = 10;
  double alpha_upper = 1.0;
  std::string samples = "10:1000:50";
  std::string elements = "1000:20000:1000";
  int repeats = 10;
  std::uint64_t seed = 42;
  double tolerance = 1e-6;
  int max_iter = 1000;
  bool no_timing = false;
  std::string out;
};

void run_bench(const BenchOptions& o, std::ostream& out) {
  BenchGrid grid;
  as_usage([&] {
    grid.dim = o.k;
    grid.alpha_upper = o.alpha_upper;
    grid.sample_counts = parse_range(o.samples);
    grid.element_counts = parse_range(o.elements);
    grid.repeats = o.repeats;
    grid.seed = o.seed;
    grid.estimator.tolerance = o.tolerance;
    grid.estimator.max_iterations = o.max_iter;
    grid.validate();
  });
  log::info("bench " + o.kind + ": " + std::to_string(grid.cells()) + " cells x " +
            std::to_string(grid.repeats) + " repeats");

  const auto records = o.kind == "speed" ? run_speed_bench(grid) : run_accuracy_bench(grid);
  std::vector<BenchRow> rows;
  rows.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.error.empty()) log::warn(to_string(rec.method) + " failed: " + rec.error);
    rows.push_back(to_row(rec));
    if (o.no_timing) rows.back().time_ms = 0.0;
  }
  emit(o.out, out, [&](std::ostream& s) { write_bench_csv(s, rows); });
}

// --- train ------------------------------------------------------------------

struct TrainOptions {
  std::string variant = "lda";
  int topics = 10;
  int iterations = 500;
  int burn_in = 50;
  int update_interval = 20;
  int gn_burn_in = 10;
  std::uint64_t seed = 42;
  std::string hyper_mode = "recommended";
  double alpha_init_total = 50.0;
  double beta_init = 0.01;
  int average_last = 0;
  std::string corpus;
  std::string vocab_from;
  std::string stopwords;
  std::string out;
};

void run_train(const TrainOptions& o) {
  TrainConfig cfg;
  cfg.topics = o.topics;
  cfg.iterations = o.iterations;
  cfg.burn_in = o.burn_in;
  cfg.hyper_update_interval = o.update_interval;
  cfg.gn_burn_in = o.gn_burn_in;
  cfg.seed = o.seed;
  cfg.hyper_mode = *parse_hyper_mode(o.hyper_mode);
  cfg.alpha_init_total = o.alpha_init_total;
  cfg.beta_init = o.beta_init;
  cfg.average_last = o.average_last;
  as_usage([&] { cfg.validate(); });
  const Variant variant = *parse_variant(o.variant);

  LoadStats stats;
  Corpus corpus;
  if (o.vocab_from.empty()) {
    corpus = load_corpus(o.corpus, o.stopwords, &stats);
  } else {
    const Vocabulary vocab = load_corpus(o.vocab_from, o.stopwords).vocabulary;
    try {
      corpus = encode_with_vocabulary(read_documents(o.corpus, stopwords_from(o.stopwords)),
                                      vocab, &stats);
    } catch (const InvalidInput& e) {
      throw DataError(o.corpus + ": " + e.what());
    }
  }
  if (stats.dropped_empty_docs > 0) {
    log::warn(std::to_string(stats.dropped_empty_docs) + " documents empty after filtering");
  }
  log::info("corpus: M=" + std::to_string(corpus.num_docs()) + " V=" +
            std::to_string(corpus.vocabulary.size()) + " tokens=" +
            std::to_string(corpus.num_tokens()));

  const int every = std::max(1, cfg.iterations / 10);
  const TrainedModel model = train(variant, corpus, cfg, [&](int it, const TopicModelState&) {
    if (it % every == 0) log::debug("sweep " + std::to_string(it));
  });
  save_model(o.out, model);
}

// --- perplexity ---------------------------------------------------------------

struct PerplexityOptions {
  std::string model;
  std::string test_corpus;
  std::string stopwords;
  int particles = 20;
  std::uint64_t seed = 42;
};

void run_perplexity(const PerplexityOptions& o, std::ostream& out) {
  LtrConfig cfg;
  cfg.particles = o.particles;
  cfg.seed = o.seed;
  as_usage([&] { cfg.validate(); });

  const TrainedModel model = load_model(o.model);
  LoadStats stats;
  Corpus test;
  try {
    test = encode_with_vocabulary(read_documents(o.test_corpus, stopwords_from(o.stopwords)),
                                  model.vocabulary, &stats);
  } catch (const InvalidInput& e) {
    throw DataError(o.test_corpus + ": " + e.what());
  }
  if (stats.dropped_oov_tokens > 0 || stats.dropped_empty_docs > 0) {
    log::warn("dropped " + std::to_string(stats.dropped_oov_tokens) +
              " out-of-vocabulary tokens and " + std::to_string(stats.dropped_empty_docs) +
              " emptied documents");
  }
  out << format_double(perplexity(model, test, cfg)) << '\n';
}

// --- classify -----------------------------------------------------------------

struct ClassifyOptions {
  std::string ham_model;
  std::string spam_model;
  std::string test;
  std::string stopwords;
  std::vector<double> thresholds = kDefaultThresholds;
  int sweeps = 50;
  std::uint64_t seed = 42;
  std::string out;
};

void run_classify(const ClassifyOptions& o, std::ostream& out) {
  if (o.sweeps < 1) throw UsageError("--sweeps must be >= 1");
  const MCLDAModel merged = [&] {
    try {
      return mc_lda_merge(load_model(o.ham_model), load_model(o.spam_model));
    } catch (const InvalidInput& e) {
      throw DataError(e.what());
    }
  }();

  LoadStats stats;
  Corpus test;
  try {
    test = encode_with_vocabulary(read_documents(o.test, stopwords_from(o.stopwords)),
                                  merged.vocabulary, &stats);
  } catch (const InvalidInput& e) {
    throw DataError(o.test + ": " + e.what());
  }
  if (!test.labeled()) throw DataError(o.test + ": expected ham/ and spam/ subdirectories");
  if (stats.dropped_empty_docs > 0) {
    log::warn(std::to_string(stats.dropped_empty_docs) +
              " test documents have no in-vocabulary tokens and were skipped");
  }

  ScoreConfig cfg;
  cfg.inference_sweeps = o.sweeps;
  cfg.seed = o.seed;
  const auto reports = threshold_sweep(merged, test, o.thresholds, cfg);
  emit(o.out, out, [&](std::ostream& s) { write_reports_csv(s, reports); });
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polya parameter estimation and topic-model tools", "polya"};
  app.set_version_flag("--version", std::string("polya ") + kVersion);
  app.require_subcommand(1);

  int verbose = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "More diagnostics on stderr (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate Polya parameters from a samples file");
  fit_cmd->add_option("--method", fit.method, "Estimator")
      ->check(CLI::IsMember({"moments", "fpi", "gn"}))
      ->capture_default_str();
  fit_cmd->add_option("--input", fit.input, "Samples file: one count vector per line")
      ->required();
  fit_cmd->add_option("--tolerance", fit.tolerance, "Convergence threshold on max |delta alpha|")
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "Sweep budget")->capture_default_str();
  fit_cmd->add_flag("--json", fit.json, "Print a single JSON object");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Synthetic accuracy or speed benchmark");
  bench_cmd->add_option("kind", bench.kind, "accuracy or speed")
      ->required()
      ->check(CLI::IsMember({"accuracy", "speed"}));
  bench_cmd->add_option("--k", bench.k, "Dimension")->capture_default_str();
  bench_cmd->add_option("--alpha-upper", bench.alpha_upper, "alpha_i ~ U(0, upper]")
      ->capture_default_str();
  bench_cmd->add_option("--samples", bench.samples, "N axis as a:b:step")->capture_default_str();
  bench_cmd->add_option("--elements", bench.elements, "Per-sample totals as a:b:step")
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Repeats per cell")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--tolerance", bench.tolerance, "Estimator tolerance")
      ->capture_default_str();
  bench_cmd->add_option("--max-iter", bench.max_iter, "Estimator sweep budget")
      ->capture_default_str();
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write 0 in the time_ms column");
  bench_cmd->add_option("--out", bench.out, "CSV output (stdout when omitted)");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train an LDA or LDA-GN topic model");
  train_cmd->add_option("--variant", tr.variant, "lda or lda-gn")
      ->check(CLI::IsMember({"lda", "lda-gn", "lda_gn"}))
      ->capture_default_str();
  train_cmd->add_option("--topics", tr.topics, "Number of topics K")->capture_default_str();
  train_cmd->add_option("--iterations", tr.iterations, "Gibbs sweeps")->capture_default_str();
  train_cmd->add_option("--burn-in", tr.burn_in, "Sweeps before hyperparameter re-estimation")
      ->capture_default_str();
  train_cmd->add_option("--update-interval", tr.update_interval,
                        "Sweeps between re-estimations (lda)")
      ->capture_default_str();
  train_cmd->add_option("--gn-burn-in", tr.gn_burn_in, "Sweeps before Newton updates (lda-gn)")
      ->capture_default_str();
  train_cmd->add_option("--hyper-mode", tr.hyper_mode, "Hyperparameter mode for lda")
      ->check(CLI::IsMember({"fixed", "recommended", "asymmetric_alpha_symmetric_beta",
                             "asymmetric_both"}))
      ->capture_default_str();
  train_cmd->add_option("--alpha-init", tr.alpha_init_total, "Initial sum of alpha")
      ->capture_default_str();
  train_cmd->add_option("--beta-init", tr.beta_init, "Initial beta_v")->capture_default_str();
  train_cmd->add_option("--average-last", tr.average_last,
                        "Average theta/phi over the last S sweeps (0: final sample)")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.seed, "RNG seed")->capture_default_str();
  train_cmd->add_option("--corpus", tr.corpus, "Corpus file or directory")->required();
  train_cmd->add_option("--vocab-from", tr.vocab_from,
                        "Take the vocabulary from this corpus (models to be merged must share one)");
  train_cmd->add_option("--stopwords", tr.stopwords, "Stop-word file (bundled list by default)");
  train_cmd->add_option("--out", tr.out, "Model file to write")->required();

  PerplexityOptions px;
  auto* px_cmd = app.add_subcommand("perplexity", "Held-out perplexity by Left-To-Right");
  px_cmd->add_option("--model", px.model, "Model file")->required();
  px_cmd->add_option("--test-corpus", px.test_corpus, "Test corpus file or directory")
      ->required();
  px_cmd->add_option("--stopwords", px.stopwords, "Stop-word file (bundled list by default)");
  px_cmd->add_option("--particles", px.particles, "Particles R")->capture_default_str();
  px_cmd->add_option("--seed", px.seed, "RNG seed")->capture_default_str();

  ClassifyOptions cl;
  auto* cl_cmd = app.add_subcommand("classify", "MC-LDA spam classification with threshold sweep");
  cl_cmd->add_option("--ham-model", cl.ham_model, "Model trained on legitimate messages")
      ->required();
  cl_cmd->add_option("--spam-model", cl.spam_model, "Model trained on spam")->required();
  cl_cmd->add_option("--test", cl.test, "Labeled directory with ham/ and spam/")->required();
  cl_cmd->add_option("--stopwords", cl.stopwords, "Stop-word file (bundled list by default)");
  cl_cmd->add_option("--thresholds", cl.thresholds, "Comma-separated thresholds")
      ->delimiter(',')
      ->capture_default_str();
  cl_cmd->add_option("--sweeps", cl.sweeps, "Inference sweeps per document")
      ->capture_default_str();
  cl_cmd->add_option("--seed", cl.seed, "RNG seed")->capture_default_str();
  cl_cmd->add_option("--out", cl.out, "CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return 1;
  }

  const log::Level saved = log::level();
  if (quiet) {
    log::set_level(log::Level::quiet);
  } else if (verbose >= 2) {
    log::set_level(log::Level::debug);
  } else if (verbose == 1) {
    log::set_level(log::Level::info);
  }

  int status = 0;
  try {
    if (fit_cmd->parsed()) {
      run_fit(fit, out);
    } else if (bench_cmd->parsed()) {
      run_bench(bench, out);
    } else if (train_cmd->parsed()) {
      run_train(tr);
    } else if (px_cmd->parsed()) {
      run_perplexity(px, out);
    } else if (cl_cmd->parsed()) {
      run_classify(cl, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    status = 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    status = 2;
  }
  log::set_level(saved);
  return status;
}

}  // namespace polya::cli
