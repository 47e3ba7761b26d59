#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "polya/counts.hpp"
#include "polya/error.hpp"

using namespace polya;

TEST(CountVector, TotalsAndValidation) {
  const CountVector c({3, 0, 4});
  EXPECT_EQ(c.total(), 7);
  EXPECT_EQ(c.dim(), 3u);
  EXPECT_THROW(CountVector({1, -1}), InvalidInput);
}

TEST(SampleSet, RejectsMismatchedDimensions) {
  EXPECT_THROW(SampleSet::from_rows({{1, 2}, {1, 2, 3}}), InvalidInput);
  EXPECT_THROW(SampleSet(std::vector<CountVector>{}), InvalidInput);
  EXPECT_NO_THROW(SampleSet(2, {}));
}

TEST(Histograms, CountsIdenticalValues) {
  const auto h = build_histograms(SampleSet::from_rows({{2, 1}, {2, 0}}));
  ASSERT_EQ(h.dim(), 2u);
  EXPECT_EQ(h.per_dim[0], (Histogram{{2, 2}}));
  EXPECT_EQ(h.per_dim[1], (Histogram{{1, 1}}));
  EXPECT_EQ(h.lengths, (Histogram{{2, 1}, {3, 1}}));
  EXPECT_EQ(h.n_samples, 2u);
}

TEST(Histograms, ZeroCountsAreNotStored) {
  const auto h = build_histograms(SampleSet::from_rows({{0, 0}}));
  EXPECT_TRUE(h.per_dim[0].empty());
  EXPECT_TRUE(h.per_dim[1].empty());
  EXPECT_TRUE(h.lengths.empty());
  EXPECT_EQ(histogram_extent(h.lengths), 0);
}

TEST(Histograms, EmptySampleSetIsRejected) {
  EXPECT_THROW(build_histograms(SampleSet(3, {})), InvalidInput);
}

TEST(Histograms, ReconstructsRawSums) {
  std::mt19937_64 gen(4);
  std::vector<std::vector<Count>> rows(200, std::vector<Count>(6));
  for (auto& r : rows)
    for (auto& c : r) c = gen() % 4 == 0 ? 0 : static_cast<Count>(gen() % 30);
  rows[7].assign(6, 0);
  const auto h = build_histograms(SampleSet::from_rows(rows));
  for (std::size_t i = 0; i < 6; ++i) {
    Count raw = 0, rebuilt = 0, freq = 0;
    for (const auto& r : rows) raw += r[i];
    for (const auto& b : h.per_dim[i]) {
      rebuilt += b.value * b.freq;
      freq += b.freq;
      EXPECT_GE(b.value, 1);
    }
    EXPECT_EQ(raw, rebuilt);
    EXPECT_LE(freq, 200);
    EXPECT_TRUE(std::is_sorted(h.per_dim[i].begin(), h.per_dim[i].end(),
                               [](const HistBin& a, const HistBin& b) { return a.value < b.value; }));
  }
  Count len_freq = 0;
  for (const auto& b : h.lengths) len_freq += b.freq;
  EXPECT_EQ(len_freq, 199);  // one all-zero sample
}

TEST(Histograms, MatrixOverloadMatchesSampleSet) {
  const std::vector<std::int32_t> m = {1, 0, 3, 2, 2, 0, 0, 0, 5};
  const std::vector<std::int32_t> totals = {4, 4, 5};
  const auto a = build_histograms(m, 3, 3, totals);
  const auto b = build_histograms(SampleSet::from_rows({{1, 0, 3}, {2, 2, 0}, {0, 0, 5}}));
  EXPECT_EQ(a.per_dim, b.per_dim);
  EXPECT_EQ(a.lengths, b.lengths);
  EXPECT_EQ(a.n_samples, b.n_samples);
}

TEST(SampleFormat, ReadsCommentsAndBlankLines) {
  std::istringstream in("# header\n1 2 3\n\n  4 5 6  \n# done\n");
  const auto s = read_samples(in);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], CountVector({4, 5, 6}));
}

TEST(SampleFormat, BadLinesAreDataErrors) {
  std::istringstream bad_token("1 2 x\n");
  EXPECT_THROW(read_samples(bad_token), DataError);
  std::istringstream ragged("1 2\n1 2 3\n");
  EXPECT_THROW(read_samples(ragged), DataError);
  std::istringstream negative("1 -2\n");
  EXPECT_THROW(read_samples(negative), DataError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_samples(empty), DataError);
  EXPECT_THROW(read_samples_file("/nonexistent/samples.txt"), DataError);
}

TEST(SampleFormat, RoundTrip) {
  const auto s = SampleSet::from_rows({{0, 7, 1}, {12, 0, 0}});
  std::stringstream io;
  write_samples(io, s);
  const auto back = read_samples(io);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_EQ(back[j], s[j]);
}

TEST(PolyaParams, RequiresPositiveFiniteEntries) {
  EXPECT_THROW(PolyaParams({1.0, 0.0}), DomainError);
  EXPECT_THROW(PolyaParams({-1.0}), DomainError);
  EXPECT_THROW(PolyaParams({std::nan("")}), DomainError);
  EXPECT_THROW(PolyaParams({INFINITY}), DomainError);
  const PolyaParams p({0.5, 1.25, 2.0});
  EXPECT_NEAR(p.alpha_sum(), 3.75, 3.75 * 1e-12);
}

TEST(OrderFreeSum, IndependentOfOrder) {
  std::vector<double> v = {1e16, 1.0, -1e16, 3.5, 1e-3, 7.0};
  const double s = order_free_sum(v);
  std::sort(v.begin(), v.end());
  do {
    EXPECT_EQ(order_free_sum(v), s);
  } while (std::next_permutation(v.begin(), v.end()));
}
