#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permsgd/analytic.hpp"
#include "permsgd/engine.hpp"
#include "permsgd/rng.hpp"

using namespace permsgd;

namespace {

// Naive long-double oracle: average of (sum sigma_i q^i)^2 over balanced masks.
long double beta_naive(int n, long double alpha) {
  const long double q = 1.0L - alpha;
  long double total = 0.0L;
  long double count = 0.0L;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n / 2) continue;
    long double s = 0.0L;
    for (int i = 0; i < n; ++i) s += ((mask >> i) & 1u ? 1.0L : -1.0L) * std::pow(q, i);
    total += s * s;
    count += 1.0L;
  }
  return total / count;
}

void expect_rel(double a, double b, double tol) {
  EXPECT_LE(std::abs(a - b), tol * std::max({std::abs(a), std::abs(b), 1e-300})) << a << " vs " << b;
}

FiniteSumProblem two_point() { return FiniteSumProblem({{1, 1}, {0, -1}}, 0, 0, 0, {}); }

}  // namespace

TEST(Beta, PinnedValues) {
  EXPECT_NEAR(beta_closed_form(2, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(beta_enumerated(2, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(beta_enumerated(2, 1.0), 1.0, 1e-15);
  for (int n = 2; n <= 16; n += 2) EXPECT_NEAR(beta_closed_form(n, 1.0), 1.0, 1e-13) << n;
  EXPECT_NEAR(beta_closed_form(4, 2.0), 16.0 / 3.0, 1e-13);
  for (const double a : {0.1, 0.5, 1.9}) EXPECT_NEAR(beta_closed_form(2, a), a * a, 1e-13);
}

TEST(Beta, ClosedFormMatchesNaiveOracle) {
  // moderate alpha, where the naive long-double sum is itself accurate
  for (int n = 2; n <= 12; n += 2) {
    for (const double a : {0.01, 0.1, 0.37, 0.9, 1.3, 2.0, 3.5}) {
      expect_rel(beta_closed_form(n, a), static_cast<double>(beta_naive(n, a)), 1e-12);
    }
  }
}

TEST(Beta, EnumeratedMatchesClosedFormOnGrid) {
  for (int n = 2; n <= 16; n += 2) {
    for (int i = 0; i < 50; ++i) {
      const double a = std::exp(std::log(1e-6) + (std::log(10.0) - std::log(1e-6)) * i / 49);
      expect_rel(beta_closed_form(n, a), beta_enumerated(n, a), 1e-11);
    }
  }
  expect_rel(beta_enumerated(6, 0.1), beta_closed_form(6, 0.1), 1e-13);
}

TEST(Beta, SmallAlphaScalesLikeCube) {
  // beta ~ alpha^2 Var(sum_i i sigma_i) = n^2 (n+1) alpha^2 / 12 as alpha -> 0
  for (const int n : {4, 16, 256}) {
    const double a = 1e-9;
    expect_rel(beta_closed_form(n, a), n * n * (n + 1.0) / 12.0 * a * a, 1e-5);
  }
}

TEST(Beta, Rejections) {
  EXPECT_THROW(beta_closed_form(3, 0.1), std::invalid_argument);
  EXPECT_THROW(beta_closed_form(4, 0.0), std::invalid_argument);
  EXPECT_THROW(beta_enumerated(18, 0.1), std::invalid_argument);
}

TEST(Beta, Envelope) {
  EXPECT_DOUBLE_EQ(beta_lower_envelope(2, 0.5), 2.0);
  EXPECT_NEAR(beta_lower_envelope(100, 1e-4), 0.01, 1e-15);
  double worst = 1e300;
  for (int n = 2; n <= 16; n += 2) {
    for (int i = 0; i < 200; ++i) {
      const double a = std::exp(std::log(1e-4) + (std::log(10.0) - std::log(1e-4)) * i / 199);
      worst = std::min(worst, beta_closed_form(n, a) / beta_lower_envelope(n, a));
    }
  }
  EXPECT_GT(worst, 0.0);
}

TEST(Beta, ShapeFactorMonotone) {
  for (int n = 2; n <= 64; n += 2) {
    const double lo = 1.0 / (13.0 * n);
    double prev = beta_shape_factor(n, lo);
    for (int s = 1; s < 1000; ++s) {
      const double v = beta_shape_factor(n, lo + (1.0 - lo) * s / 1000.0);
      EXPECT_GE(v, prev - 1e-12) << n;
      prev = v;
    }
  }
}

TEST(Moments, Pinned) {
  EXPECT_NEAR(sign_moment(4, 0, 1), -1.0 / 3.0, 1e-15);
  EXPECT_EQ(sign_moment(6, 2, 2), 1.0);
  EXPECT_EQ(sign_moment(2, 0, 1), -1.0);
  EXPECT_NEAR(zero_one_moment(4, 1, 3), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(zero_one_moment(8, 5, 5), 0.5);
  EXPECT_EQ(zero_one_moment(2, 0, 1), 0.0);
  EXPECT_THROW(sign_moment(4, 0, 4), std::invalid_argument);
}

TEST(Moments, MatchEnumeration) {
  for (int n = 2; n <= 12; n += 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(sign_moment(n, i, j), sign_moment_enumerated(n, i, j), 1e-13);
        EXPECT_NEAR(zero_one_moment(n, i, j), zero_one_moment_enumerated(n, i, j), 1e-13);
      }
    }
  }
}

TEST(SignedPrefix, TwoComponentsByHand) {
  // sigma=(0,1): (1)(1 - el) + (-1)(1) = -el; sigma=(1,0): 0. Mean -el/2.
  EXPECT_NEAR(signed_prefix_expectation(2, 0.01), -0.005, 1e-15);
  EXPECT_NEAR(signed_prefix_expectation_enumerated(2, 0.01), -0.005, 1e-15);
  EXPECT_EQ(signed_prefix_expectation(4, 0.0), 0.0);
}

TEST(SignedPrefix, MatchesEnumeration) {
  for (int n = 2; n <= 16; n += 2) {
    for (const double el : {0.0, 0.01, 0.2, 0.9}) {
      EXPECT_NEAR(signed_prefix_expectation(n, el), signed_prefix_expectation_enumerated(n, el),
                  1e-12 * std::max(1.0, std::abs(signed_prefix_expectation(n, el))));
    }
  }
  EXPECT_NEAR(signed_prefix_expectation(6, 0.2), signed_prefix_expectation_enumerated(6, 0.2), 1e-13);
}

TEST(Recursions, ReshufflePinnedAndLimits) {
  EXPECT_NEAR(reshuffle_second_moment(2, 1, 0.5, 1, 2, 1), 0.125, 1e-15);
  EXPECT_EQ(reshuffle_second_moment(4, 0, 0.1, 1, 6, 3), 9.0);
  // G = 0 is pure contraction
  EXPECT_NEAR(reshuffle_second_moment(4, 3, 0.1, 1, 0, 2), std::pow(0.9, 24) * 4, 1e-15);
}

TEST(Recursions, SinglePinnedAndLimits) {
  EXPECT_NEAR(single_shuffle_second_moment(2, 2, 0.5, 1, 2, 1), 0.1015625, 1e-15);
  EXPECT_NEAR(single_shuffle_second_moment(6, 3, 0.07, 1, 0, 2), std::pow(0.93, 36) * 4, 1e-15);
  for (const double eta : {0.01, 0.3, 1.5}) {
    EXPECT_NEAR(single_shuffle_second_moment(6, 1, eta, 1, 6, 1),
                reshuffle_second_moment(6, 1, eta, 1, 6, 1), 1e-12);
  }
}

TEST(Recursions, AgreeWithEngineEnumeration) {
  for (int n = 2; n <= 8; n += 2) {
    const auto p = make_construction(ConstructionKind::SignedLinear, n, 6, 1);
    for (int k = 1; k <= 3; ++k) {
      for (const double eta : {0.003, 0.05, 0.4, 1.2}) {
        expect_rel(exact_moments(p, SamplingScheme::RandomReshuffle, eta, k, 1.0).mean_x_sq,
                   reshuffle_second_moment(n, k, eta, 1, 6, 1), 1e-11);
        expect_rel(exact_moments(p, SamplingScheme::SingleShuffle, eta, k, 1.0).mean_x_sq,
                   single_shuffle_second_moment(n, k, eta, 1, 6, 1), 1e-11);
      }
    }
  }
}

TEST(Recursions, TinyAlphaStaysAccurate) {
  // 1 - (1-a)^{2n} ~ 2na: the naive difference would lose every digit here
  const double eta = 1e-13;
  const double m = reshuffle_second_moment(8, 1000, eta, 1, 6, 0);
  EXPECT_GT(m, 0.0);
  const double beta = beta_closed_form(8, eta);
  const double r = std::exp(16 * std::log1p(-eta));
  double sum = 0.0, pw = 1.0;
  for (int j = 0; j < 1000; ++j) {
    sum += pw;
    pw *= r;
  }
  expect_rel(m, 9 * eta * eta * beta * sum, 1e-10);
}

TEST(Incremental, PinnedTrajectory) {
  const auto xs = incremental_trajectory_exact(2, 2, 0.1, 1, 2, 1);
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_NEAR(xs[0], 0.82, 1e-15);
  EXPECT_NEAR(xs[1], 0.676, 1e-15);
  // the epoch map contracts by 0.8, so 50 epochs leave 0.9 * 0.8^50 ~ 1.3e-5
  const double fp = incremental_fixed_point(2, 0.1, 1, 2);
  const auto run50 = incremental_trajectory_exact(2, 50, 0.1, 1, 2, 1);
  EXPECT_NEAR(run50.back() - fp, 0.9 * std::pow(0.8, 50), 1e-15);
  const auto run120 = incremental_trajectory_exact(2, 120, 0.1, 1, 2, 1);
  EXPECT_LT(std::abs(run120.back() - fp), 1e-10);
  EXPECT_NEAR(incremental_fixed_point(2, 0.1, 1, 2), 0.1, 1e-15);  // M(x) = 0.8(x - 0.1) + 0.1
}

TEST(Incremental, NoiseFree) {
  const double rho = 1 - 2 * 0.05;
  const auto xs = incremental_trajectory_exact(6, 4, 0.05, 1, 0, 1.5);
  for (int t = 0; t < 4; ++t) EXPECT_NEAR(xs[t], std::pow(rho, 3.0 * (t + 1)) * 1.5, 1e-14);
}

TEST(Incremental, AgreesWithEngine) {
  for (const int n : {2, 4, 16, 64}) {
    const auto p = make_construction(ConstructionKind::CyclicSplit, n, 6, 1);
    for (const double eta : {1e-4, 0.003, 0.02}) {
      const auto xs = incremental_trajectory_exact(n, 100, eta, 1, 6, 1);
      const auto t = run_schedule(p, sample_schedule(SamplingScheme::Incremental, n, 100, 0), eta, 1.0);
      for (std::size_t i = 0; i < xs.size(); ++i) expect_rel(xs[i], t.epoch_iterates[i], 1e-12);
    }
  }
}

TEST(ProductSum, Examples) {
  const std::vector<double> zeros(5, 0.0);
  const auto z = product_sum_gap(zeros);
  EXPECT_EQ(z.gap, 0.0);
  EXPECT_EQ(z.bound, 0.0);
  EXPECT_TRUE(z.satisfied);
  const std::vector<double> a{0.05, 0.05};
  const auto g = product_sum_gap(a);
  EXPECT_NEAR(g.gap, 0.0025, 1e-15);
  EXPECT_NEAR(g.bound, 0.02, 1e-15);
  EXPECT_TRUE(g.satisfied);
  const std::vector<double> bad{0.2, 0.0};
  EXPECT_THROW(product_sum_gap(bad), std::invalid_argument);
}

TEST(ProductSum, RandomVectors) {
  CounterRng r(123);
  for (int v = 0; v < 1000; ++v) {
    const int n = 2 + static_cast<int>(r.below(63));
    std::vector<double> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = r.uniform(0.0, 1.0 / (10.0 * n));
    EXPECT_TRUE(product_sum_gap(a).satisfied);
  }
}

TEST(XSigma, HandExpansion) {
  const auto p = two_point();
  const int id[] = {0, 1};
  const int sw[] = {1, 0};
  EXPECT_NEAR(x_sigma(p, id, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(x_sigma(p, sw, 0.5), 0.5, 1e-15);
  const auto m = x_sigma_moments(p, 0.5, MomentMode::Enumerate);
  EXPECT_NEAR(m.mean, 0.25, 1e-15);
  EXPECT_NEAR(m.mean_sq, 0.125, 1e-15);
  EXPECT_NEAR(m.second_bound, 5 * 0.25 * 8 * std::log(4.0), 1e-12);
  EXPECT_TRUE(m.second_satisfied);
}

TEST(XSigma, EqualCurvaturesHaveZeroMean) {
  const auto p = make_construction(ConstructionKind::SignedLinear, 6, 6, 1);
  EXPECT_NEAR(x_sigma_moments(p, 0.05, MomentMode::Enumerate).mean, 0.0, 1e-14);
  FiniteSumProblem flat({{0, 1}, {0, 2}, {0, -3}, {2, 0}}, 0, 0, 0, {});
  const int perm[] = {3, 1, 0, 2};
  EXPECT_NEAR(x_sigma(flat, perm, 0.0), 0.0, 1e-15);
}

TEST(XSigma, MatchesOneEngineEpoch) {
  const auto p = make_random_instance(6, 1.0, 2.5, 1.0, 4);
  const double eta = 0.03;
  std::vector<int> perm{4, 0, 5, 2, 1, 3};
  Schedule s{SamplingScheme::SingleShuffle, 6, 1, perm, 0};
  const double x1 = run_schedule(p, s, eta, 0.0).final_iterate();
  EXPECT_NEAR(x1 / -eta, x_sigma(p, perm, eta), 1e-13);
}

TEST(XSigma, BoundsOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const auto p = make_random_instance(n, 1.0, 3.0, 1.0, seed);
    const double eta = 0.4 / (n * p.max_curvature());
    const auto m = x_sigma_moments(p, eta, MomentMode::Enumerate);
    EXPECT_TRUE(m.first_applicable);
    EXPECT_TRUE(m.second_satisfied);
    EXPECT_TRUE(m.first_satisfied);
  }
}

TEST(XSigma, MonteCarloMatchesEnumeration) {
  const auto p = make_random_instance(6, 1.0, 3.0, 1.0, 77);
  const auto ex = x_sigma_moments(p, 0.02, MomentMode::Enumerate);
  const auto mc = x_sigma_moments(p, 0.02, MomentMode::MonteCarlo, 50000, 5);
  EXPECT_NEAR(mc.mean_sq, ex.mean_sq, 4 * mc.stderr_sq);
  EXPECT_NEAR(mc.mean, ex.mean, 4 * mc.stderr_mean);
}

TEST(XSigma, Rejections) {
  FiniteSumProblem unbalanced({{1, 1}, {1, 0}}, 0, 0, 0, {});
  const int id[] = {0, 1};
  EXPECT_THROW(x_sigma(unbalanced, id, 0.1), std::invalid_argument);
  const auto big = make_construction(ConstructionKind::SignedLinear, 10, 6, 1);
  EXPECT_THROW(x_sigma_moments(big, 0.1, MomentMode::Enumerate), std::invalid_argument);
}

TEST(HoeffdingSerfling, Formula) {
  EXPECT_EQ(hoeffding_serfling_bound(10, 10, 0.1, 2.0), 0.0);
  EXPECT_EQ(hoeffding_serfling_bound(10, 3, 1.0, 2.0), 0.0);
  EXPECT_NEAR(hoeffding_serfling_bound(4, 1, std::exp(-2.0), 1.0), 1.0, 1e-15);
  EXPECT_THROW(hoeffding_serfling_bound(4, 5, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(hoeffding_serfling_bound(4, 1, 0.0, 1.0), std::invalid_argument);
}

TEST(HoeffdingSerfling, EmpiricalRate) {
  CounterRng r(8);
  std::vector<double> v(20);
  for (auto& x : v) x = r.uniform(-1.0, 3.0);
  for (const double delta : {0.1, 0.01}) {
    const auto h = hoeffding_serfling_violation_rate(v, delta, 20000, 3);
    EXPECT_LE(h.max_rate, delta);
  }
}

TEST(LemmaSuite, AllSatisfiedAndDeterministic) {
  const auto a = run_lemma_suite(8, 1);
  const auto b = run_lemma_suite(8, 1);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].satisfied) << a[i].lemma_id;
    EXPECT_EQ(a[i].exact_value, b[i].exact_value);
  }
  std::ostringstream out;
  write_lemma_csv_header(out);
  write_lemma_csv(out, a.front());
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "lemma_id,params,exact,oracle,bound,satisfied,empirical_constant");
}
