#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "permsgd/rng.hpp"

using namespace permsgd;

TEST(Rng, SameSeedSameStream) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  EXPECT_EQ(a.draws(), 1000u);
}

TEST(Rng, DifferentSeedsDiffer) {
  CounterRng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a() == b();
  EXPECT_EQ(same, 0);
}

TEST(Rng, DeriveSeedIsPureAndSpreads) {
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t base = 0; base < 50; ++base) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(base, i));
  }
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(Rng, Uniform01InRange) {
  CounterRng r(9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, BelowIsUniform) {
  CounterRng r(5);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // chi-square with 6 dof; 22.5 is the 0.999 quantile
  double chi = 0.0;
  for (const int c : counts) chi += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
  EXPECT_LT(chi, 22.5);
}

TEST(Rng, ShuffleIsPermutationAndUniform) {
  CounterRng r(11);
  std::vector<int> counts(6, 0);
  const int trials = 60000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> v{0, 1, 2};
    shuffle(v, r);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<int>{0, 1, 2}));
    // rank among the 6 lexicographic permutations
    std::vector<int> p{0, 1, 2};
    int rank = 0;
    while (p != v) {
      std::next_permutation(p.begin(), p.end());
      ++rank;
    }
    ++counts[rank];
  }
  for (const int c : counts) EXPECT_NEAR(c, trials / 6.0, 5 * std::sqrt(trials / 6.0));
}

TEST(Rng, WorksAsStandardUrbg) {
  CounterRng r(3);
  std::uniform_int_distribution<int> d(1, 6);
  for (int i = 0; i < 100; ++i) {
    const int v = d(r);
    ASSERT_GE(v, 1);
    ASSERT_LE(v, 6);
  }
}
