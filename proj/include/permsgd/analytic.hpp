#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permsgd/problem.hpp"

namespace permsgd {

// ---------------------------------------------------------------------------
// Balanced-pattern statistics.
//
// sigma_0..sigma_{n-1} is a uniformly random arrangement of n/2 entries +1
// and n/2 entries -1 (or 1 and 0 for the indicator variants). All functions
// here require even n > 1 and throw std::invalid_argument otherwise.
// ---------------------------------------------------------------------------

/// Largest n for which balanced patterns are enumerated (C(16, 8) = 12870).
inline constexpr int kMaxEnumeratedPatternSize = 16;

/// beta(n, alpha) = E[(sum_i sigma_i (1 - alpha)^i)^2] in closed form:
///   (1 + 1/(n-1)) sum_i (1-alpha)^{2i} - (1/(n-1)) (sum_i (1-alpha)^i)^2.
/// For alpha < 1 the sums are taken over d_i = (1-alpha)^i - 1 (computed
/// with expm1/log1p), which reduces the expression to
/// (n D2 - D1^2) / (n - 1) with no catastrophic cancellation.
double beta_closed_form(int n, double alpha);

/// beta(n, alpha) by averaging over all C(n, n/2) sign patterns. n <= 16.
double beta_enumerated(int n, double alpha);

/// min{1 + 1/alpha, n^3 alpha^2}; beta / envelope is bounded below by a
/// constant, which callers measure rather than assume.
double beta_lower_envelope(int n, double alpha);

/// 1 - (2-alpha)/(n alpha) + (1 + (2-alpha)/(n alpha)) (1-alpha)^n, the
/// factor of beta that is nondecreasing in alpha on [1/(13n), 1).
double beta_shape_factor(int n, double alpha);

/// E[sigma_i sigma_j] for +-1 patterns: 1 if i == j, else -1/(n-1).
double sign_moment(int n, int i, int j);
double sign_moment_enumerated(int n, int i, int j);

/// E[sigma_i sigma_j] for 1/0 patterns: 1/2 if i == j, else (1/4)(1 - 1/(n-1)).
double zero_one_moment(int n, int i, int j);
double zero_one_moment_enumerated(int n, int i, int j);

/// E[sum_i (1 - 2 sigma_i)(1 - eta_lambda sum_{j>i} sigma_j)] over 1/0
/// patterns, with j ranging over the pattern's own positions (j <= n-1).
/// Equals -eta_lambda * n / 4.
double signed_prefix_expectation(int n, double eta_lambda);
double signed_prefix_expectation_enumerated(int n, double eta_lambda);

// ---------------------------------------------------------------------------
// Exact epoch recursions for the hard constructions.
// ---------------------------------------------------------------------------

/// E[x_k^2] under random reshuffling on the signed-linear construction:
/// m_{t+1} = (1 - eta lambda)^{2n} m_t + (eta G / 2)^2 beta.
double reshuffle_second_moment(int n, int k, double eta, double lambda, double G,
                               double x0);

/// E[x_k^2] under single shuffling on the signed-linear construction:
/// (1-a)^{2nk} x0^2 + (eta G/2)^2 beta ((1 - (1-a)^{nk}) / (1 - (1-a)^n))^2.
double single_shuffle_second_moment(int n, int k, double eta, double lambda,
                                    double G, double x0);

/// x_1..x_k of the incremental method on the cyclic-split construction:
/// x_{t+1} = rho^{n/2} (x_t - eta G n / 4) + (eta G / 2) sum_{i<n/2} rho^i
/// with rho = 1 - 2 eta lambda (the second half has curvature 2 lambda).
std::vector<double> incremental_trajectory_exact(int n, int k, double eta,
                                                 double lambda, double G,
                                                 double x0);

/// Fixed point of the incremental epoch map above.
double incremental_fixed_point(int n, double eta, double lambda, double G);

// ---------------------------------------------------------------------------
// Technical lemmas.
// ---------------------------------------------------------------------------

struct ProductSumGap {
  double gap = 0.0;    // |prod(1 - a_i) - (1 - sum a_i)|
  double bound = 0.0;  // 2 (sum a_i)^2
  bool satisfied = false;
};

/// Requires every a_i in [0, 1/(10n)]; throws std::invalid_argument otherwise.
ProductSumGap product_sum_gap(std::span<const double> a);

/// X_sigma = sum_j (prod_{i>j} (1 - eta a_{sigma(i)})) b_{sigma(j)}: the
/// noise one epoch accumulates from x* = 0, so x_1 = -eta X_sigma in the
/// (a/2)x^2 + bx convention. Requires sum_i b_i = 0.
double x_sigma(const FiniteSumProblem& p, std::span<const int> sigma, double eta);

enum class MomentMode { Enumerate, MonteCarlo };

struct XSigmaMoments {
  double mean = 0.0;
  double mean_sq = 0.0;
  double stderr_mean = 0.0;     // zero when enumerated
  double stderr_sq = 0.0;       // zero when enumerated
  double second_bound = 0.0;    // 5 eta^2 n^3 L^2 G^2 log(2n)
  double first_bound = 0.0;     // 2 eta n G L
  bool second_applicable = false;  // eta L <= 1
  bool first_applicable = false;   // eta n L <= 1/2
  bool second_satisfied = false;
  bool first_satisfied = false;    // vacuously true when not applicable
  std::int64_t samples = 0;
};

/// Moments of X_sigma over a uniform permutation. Enumerate requires n <= 8.
/// Monte Carlo checks each bound against estimate + 4 standard errors.
XSigmaMoments x_sigma_moments(const FiniteSumProblem& p, double eta, MomentMode mode,
                              std::int64_t trials = 0, std::uint64_t seed = 0);

/// (b - a) sqrt(rho_j log(1/delta) / (2j)) with
/// rho_j = min{1 - (j-1)/n, (1 - j/n)(1 + 1/j)}. Requires 1 <= j <= n and
/// delta in (0, 1].
double hoeffding_serfling_bound(int n, int j, double delta, double range_width);

struct HoeffdingSerflingCheck {
  double delta = 0.0;
  double max_rate = 0.0;  // worst per-prefix-length violation frequency
  int worst_j = 0;
  std::int64_t samples = 0;
};

/// Samples `samples` uniform permutations of `values` and, for every prefix
/// length j, counts how often the prefix mean exceeds the population mean
/// by more than the bound (one-sided, range [min, max] of the values).
HoeffdingSerflingCheck hoeffding_serfling_violation_rate(std::span<const double> values,
                                                         double delta,
                                                         std::int64_t samples,
                                                         std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

struct LemmaCheckResult {
  std::string lemma_id;
  std::vector<std::pair<std::string, double>> params;
  double exact_value = 0.0;
  double oracle_value = 0.0;
  double bound_value = 0.0;
  bool satisfied = false;
  double empirical_constant = 0.0;
};

/// CSV header: lemma_id,params,exact,oracle,bound,satisfied,empirical_constant
/// where params is a ';'-separated list of key=value pairs.
void write_lemma_csv_header(std::ostream& out);
void write_lemma_csv(std::ostream& out, const LemmaCheckResult& r);

/// Runs every oracle comparison with sizes capped at max_n (each oracle
/// also keeps its own enumeration threshold).
std::vector<LemmaCheckResult> run_lemma_suite(int max_n, std::uint64_t seed);

}  // namespace permsgd
