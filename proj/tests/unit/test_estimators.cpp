#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polya/error.hpp"
#include "polya/estimators.hpp"
#include "polya/kernels.hpp"
#include "polya/synth.hpp"

using namespace polya;

namespace {

SampleSet synthetic(const std::vector<double>& alpha, int n, Count elements, std::uint64_t seed) {
  Rng rng(seed);
  const PolyaParams p(alpha);
  std::vector<CountVector> out;
  for (int j = 0; j < n; ++j) out.push_back(sample_polya(p, elements, rng));
  return SampleSet(std::move(out));
}

// Exhaustive search over (0, 5]^2 at step 0.001 using tabulated lgamma terms.
std::pair<double, double> grid_argmax_2d(const oracle::Rows& rows) {
  constexpr int G = 5000;
  std::vector<double> f1(G + 1), f2(G + 1), g(2 * G + 1);
  for (int t = 1; t <= 2 * G; ++t) {
    const double a = t * 0.001;
    double s1 = 0, s2 = 0, s0 = 0;
    for (const auto& r : rows) {
      if (t <= G) {
        s1 += std::lgamma(r[0] + a) - std::lgamma(a);
        s2 += std::lgamma(r[1] + a) - std::lgamma(a);
      }
      s0 += std::lgamma(r[0] + r[1] + a) - std::lgamma(a);
    }
    if (t <= G) {
      f1[t] = s1;
      f2[t] = s2;
    }
    g[t] = s0;
  }
  double best = -INFINITY;
  std::pair<double, double> arg{0, 0};
  for (int i = 1; i <= G; ++i) {
    for (int j = 1; j <= G; ++j) {
      const double v = f1[i] + f2[j] - g[i + j];
      if (v > best) {
        best = v;
        arg = {i * 0.001, j * 0.001};
      }
    }
  }
  return arg;
}

}  // namespace

TEST(EstimatorConfig, Validation) {
  EstimatorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.tolerance = 1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.alpha_floor = 2.0;
  c.alpha_cap = 1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Moments, HandEvaluatedExample) {
  const auto m = estimate_moments(SampleSet::from_rows({{2, 0}, {0, 2}, {1, 1}, {1, 1}}));
  EXPECT_FALSE(m.degenerate);
  EXPECT_NEAR(m.params[0], 1.0, 1e-12);
  EXPECT_NEAR(m.params[1], 1.0, 1e-12);
}

TEST(Moments, ZeroVarianceFallsBackToSymmetric) {
  const auto m = estimate_moments(SampleSet::from_rows({{3, 1}, {3, 1}, {3, 1}}));
  EXPECT_TRUE(m.degenerate);
  EXPECT_DOUBLE_EQ(m.params[0], 0.5);
  EXPECT_DOUBLE_EQ(m.params[1], 0.5);
}

TEST(Moments, NeedsTwoSamplesWithMass) {
  EXPECT_THROW(estimate_moments(SampleSet::from_rows({{1, 2}})), InvalidInput);
  EXPECT_THROW(estimate_moments(SampleSet::from_rows({{0, 0}, {0, 0}})), InvalidInput);
}

TEST(Moments, RecoversTruthOnLargeSample) {
  const auto m = estimate_moments(synthetic({1, 2, 3}, 10000, 100, 5));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.params[i], i + 1.0, 0.15 * (i + 1.0));
}

TEST(Iterative, MatchesExhaustiveGridOnTinyData) {
  const oracle::Rows rows = {{3, 1}, {0, 4}, {2, 2}, {5, 0}, {1, 3}};
  const auto [a1, a2] = grid_argmax_2d(rows);
  EstimatorConfig cfg;
  cfg.tolerance = 1e-10;
  cfg.max_iterations = 1000000;
  for (Method m : {Method::fpi, Method::gn}) {
    const auto r = estimate(m, SampleSet::from_rows(rows), cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.params[0], a1, 0.01) << to_string(m);
    EXPECT_NEAR(r.params[1], a2, 0.01) << to_string(m);
  }
}

TEST(Iterative, SymmetricDataGivesSymmetricEstimate) {
  const auto s = SampleSet::from_rows({{3, 1}, {1, 3}, {4, 0}, {0, 4}, {2, 2}, {2, 2}});
  for (Method m : {Method::fpi, Method::gn}) {
    EstimatorConfig cfg;
    const auto r = estimate(m, s, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.params[0] - r.params[1]), cfg.tolerance) << to_string(m);
  }
}

TEST(Fpi, LikelihoodNeverDecreases) {
  const auto s = synthetic({0.3, 0.8, 0.1, 0.6, 0.9}, 300, 200, 9);
  const auto h = build_histograms(s);
  double prev = -INFINITY;
  int sweeps = 0;
  estimate_minka_fpi(s, {}, [&](int, std::span<const double> a) {
    const double ll = polya_log_likelihood(PolyaParams({a.begin(), a.end()}), h);
    EXPECT_GE(ll, prev - 1e-9);
    prev = ll;
    ++sweeps;
  });
  EXPECT_GT(sweeps, 1);
}

TEST(Iterative, LikelihoodDominanceAndAgreement) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = synthetic({0.5, 0.2, 0.9, 0.7}, 200, 500, seed);
    EstimatorConfig cfg;
    cfg.max_iterations = 100000;
    const auto gn = estimate_gn(s, cfg);
    const auto fpi = estimate_minka_fpi(s, cfg);
    ASSERT_TRUE(gn.converged && fpi.converged);
    const double moments_ll = polya_log_likelihood(estimate_moments(s).params, s);
    EXPECT_GE(gn.final_log_likelihood, moments_ll - 1e-9);
    EXPECT_LE(std::abs(gn.final_log_likelihood - fpi.final_log_likelihood),
              1e-4 * std::abs(fpi.final_log_likelihood));
  }
}

TEST(Iterative, FpiAndGnErrorsAgreeOnBenchmarkData) {
  Rng rng(77);
  for (int n : {50, 400, 1000}) {
    const PolyaParams truth = sample_alpha_uniform(10, 1.0, rng);
    std::vector<CountVector> v;
    for (int j = 0; j < n; ++j) v.push_back(sample_polya(truth, 2000, rng));
    const SampleSet s(std::move(v));
    EstimatorConfig cfg;
    cfg.max_iterations = 200000;
    const auto gn = estimate_gn(s, cfg);
    const auto fpi = estimate_minka_fpi(s, cfg);
    ASSERT_TRUE(gn.converged && fpi.converged);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_LT(std::abs(std::abs(gn.params[i] - truth[i]) - std::abs(fpi.params[i] - truth[i])),
                1e-3);
    }
  }
}

TEST(Iterative, EstimatesStayWithinFloorAndCap) {
  EstimatorConfig cfg;
  cfg.alpha_floor = 1e-3;
  cfg.alpha_cap = 5.0;
  // Dimension 1 never fires; dimension 2 is nearly multinomial (alpha -> large).
  const auto s = SampleSet::from_rows({{5, 0, 5}, {6, 0, 4}, {4, 0, 6}, {5, 0, 5}, {7, 0, 3}});
  for (Method m : {Method::moments, Method::fpi, Method::gn}) {
    const auto r = estimate(m, s, cfg);
    for (double a : r.params.values()) {
      EXPECT_GE(a, cfg.alpha_floor) << to_string(m);
      EXPECT_LE(a, cfg.alpha_cap) << to_string(m);
    }
  }
}

TEST(Fpi, AllZeroDimensionIsClampedToFloor) {
  const auto s = SampleSet::from_rows({{3, 0, 1}, {1, 0, 2}, {2, 0, 2}, {0, 0, 4}});
  const auto r = estimate_minka_fpi(s);
  EXPECT_EQ(r.params[1], EstimatorConfig{}.alpha_floor);
}

TEST(Gn, AllZeroDimensionDecaysTowardFloor) {
  const auto s = SampleSet::from_rows({{3, 0, 1}, {1, 0, 2}, {2, 0, 2}, {0, 0, 4}});
  const auto r = estimate_gn(s);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.params[1], 1e-5);
  EXPECT_GT(r.nonconcave_steps, 0u);
}

TEST(Gn, FlatCurvatureSkipsTheDimension) {
  // No counts anywhere: both curvature terms vanish.
  const auto h = build_histograms(SampleSet::from_rows({{0, 0}, {0, 0}}));
  std::vector<double> alpha = {0.7, 2.0};
  std::size_t skips = 0;
  EXPECT_EQ(gn_sweep(alpha, h, {}, &skips), 0.0);
  EXPECT_EQ(skips, 2u);
  EXPECT_EQ(alpha, (std::vector<double>{0.7, 2.0}));
}

TEST(Gn, NegativeNewtonProposalIsHalved) {
  // Dimension 0 is rare, so from alpha = 1 the Newton step lands below zero.
  const auto h = build_histograms(SampleSet::from_rows({{1, 5}, {0, 6}, {2, 4}}));
  std::vector<double> alpha = {1.0, 1.0};
  gn_sweep(alpha, h, {});
  EXPECT_DOUBLE_EQ(alpha[0], 0.5);
}

TEST(Iterative, RerunsAreBitIdentical) {
  const auto s = synthetic({0.4, 0.4, 1.7}, 80, 60, 2);
  for (Method m : {Method::fpi, Method::gn}) {
    const auto a = estimate(m, s);
    const auto b = estimate(m, s);
    EXPECT_EQ(a.params.values(), b.params.values());
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.final_log_likelihood, b.final_log_likelihood);
  }
}

TEST(Iterative, IterationBudgetIsRespected) {
  const auto s = synthetic({0.2, 0.3, 0.9}, 200, 300, 4);
  EstimatorConfig cfg;
  cfg.max_iterations = 2;
  for (Method m : {Method::fpi, Method::gn}) {
    const auto r = estimate(m, s, cfg);
    EXPECT_EQ(r.iterations, 2);
    EXPECT_FALSE(r.converged);
  }
}

TEST(Iterative, WarmStartRejectsWrongSize) {
  const auto h = build_histograms(SampleSet::from_rows({{1, 2}, {2, 1}}));
  EXPECT_THROW(estimate_gn(h, {1.0, 1.0, 1.0}), InvalidInput);
  EXPECT_THROW(estimate_minka_fpi(h, {1.0}), InvalidInput);
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::moments, Method::fpi, Method::gn}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_FALSE(parse_method("nope").has_value());
}
