#include "permsgd/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "permsgd/csv.hpp"
#include "permsgd/engine.hpp"
#include "permsgd/rng.hpp"

namespace permsgd {

namespace {

void require_even(int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument(fmt::format("n must be even and > 1, got {}", n));
  }
}

void require_enumerable(int n) {
  require_even(n);
  if (n > kMaxEnumeratedPatternSize) {
    throw std::invalid_argument(fmt::format(
        "pattern enumeration supports n <= {}, got {}", kMaxEnumeratedPatternSize, n));
  }
}

void require_index(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument(fmt::format("index {} outside [0, {})", i, n));
}

/// (1 - alpha)^m.
double contraction_power(double alpha, double m) {
  if (alpha < 1.0) return std::exp(m * std::log1p(-alpha));
  return std::pow(1.0 - alpha, m);
}

/// 1 - (1 - alpha)^m without cancellation for small alpha.
double one_minus_power(double alpha, double m) {
  if (alpha < 1.0) return -std::expm1(m * std::log1p(-alpha));
  return 1.0 - std::pow(1.0 - alpha, m);
}

/// (1 - alpha)^i - 1 for alpha < 1, (1 - alpha)^i otherwise. Balanced
/// patterns sum to zero, so either choice gives the same weighted sum.
std::vector<double> pattern_weights(int n, double alpha) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] =
        alpha < 1.0 ? std::expm1(i * std::log1p(-alpha)) : std::pow(1.0 - alpha, i);
  }
  return w;
}

/// Calls visit(mask) for every n-bit mask with exactly n/2 bits set.
template <class Visitor>
std::int64_t for_each_balanced_mask(int n, Visitor&& visit) {
  std::int64_t count = 0;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) != n / 2) continue;
    visit(mask);
    ++count;
  }
  return count;
}

/// sum_{j<terms} ratio^j, closed form unless 1 - ratio is within 1e-12 of 0.
double geometric_sum(double ratio, double one_minus_ratio_pow_terms, double one_minus_ratio,
                     long terms) {
  if (std::abs(one_minus_ratio) < 1e-12) {
    double s = 0.0;
    double p = 1.0;
    for (long j = 0; j < terms; ++j) {
      s += p;
      p *= ratio;
    }
    return s;
  }
  return one_minus_ratio_pow_terms / one_minus_ratio;
}

}  // namespace

double beta_closed_form(int n, double alpha) {
  require_even(n);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double nn = n;
  if (alpha < 1.0) {
    double d1 = 0.0;
    double d2 = 0.0;
    const double l = std::log1p(-alpha);
    for (int i = 1; i < n; ++i) {
      const double d = std::expm1(i * l);
      d1 += d;
      d2 += d * d;
    }
    return std::max(0.0, (nn * d2 - d1 * d1) / (nn - 1.0));
  }
  const double q = 1.0 - alpha;
  const double s1 = (1.0 - std::pow(q, nn)) / alpha;
  const double one_minus_q2 = alpha * (2.0 - alpha);
  double s2 = 0.0;
  if (std::abs(one_minus_q2) < 1e-12) {
    for (int i = 0; i < n; ++i) s2 += std::pow(q, 2.0 * i);
  } else {
    s2 = (1.0 - std::pow(q, 2.0 * nn)) / one_minus_q2;
  }
  return (1.0 + 1.0 / (nn - 1.0)) * s2 - s1 * s1 / (nn - 1.0);
}

double beta_enumerated(int n, double alpha) {
  require_enumerable(n);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const auto w = pattern_weights(n, alpha);
  double total = 0.0;
  const auto count = for_each_balanced_mask(n, [&](std::uint32_t mask) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += (mask >> i & 1u) ? w[static_cast<std::size_t>(i)] : -w[static_cast<std::size_t>(i)];
    }
    total += s * s;
  });
  return total / static_cast<double>(count);
}

double beta_lower_envelope(int n, double alpha) {
  const double nn = n;
  return std::min(1.0 + 1.0 / alpha, nn * nn * nn * alpha * alpha);
}

double beta_shape_factor(int n, double alpha) {
  const double r = (2.0 - alpha) / (n * alpha);
  return 1.0 - r + (1.0 + r) * contraction_power(alpha, n);
}

double sign_moment(int n, int i, int j) {
  require_even(n);
  require_index(n, i);
  require_index(n, j);
  return i == j ? 1.0 : -1.0 / (n - 1.0);
}

double sign_moment_enumerated(int n, int i, int j) {
  require_enumerable(n);
  require_index(n, i);
  require_index(n, j);
  double total = 0.0;
  const auto count = for_each_balanced_mask(n, [&](std::uint32_t mask) {
    const double si = (mask >> i & 1u) ? 1.0 : -1.0;
    const double sj = (mask >> j & 1u) ? 1.0 : -1.0;
    total += si * sj;
  });
  return total / static_cast<double>(count);
}

double zero_one_moment(int n, int i, int j) {
  require_even(n);
  require_index(n, i);
  require_index(n, j);
  return i == j ? 0.5 : 0.25 * (1.0 - 1.0 / (n - 1.0));
}

double zero_one_moment_enumerated(int n, int i, int j) {
  require_enumerable(n);
  require_index(n, i);
  require_index(n, j);
  double total = 0.0;
  const auto count = for_each_balanced_mask(n, [&](std::uint32_t mask) {
    total += static_cast<double>((mask >> i & 1u) * (mask >> j & 1u));
  });
  return total / static_cast<double>(count);
}

double signed_prefix_expectation(int n, double eta_lambda) {
  require_even(n);
  // Linear terms cancel (E[sigma_i] = 1/2); the n(n-1)/2 ordered pairs
  // i < j contribute eta_lambda (2 E[sigma_i sigma_j] - E[sigma_j]) each.
  const double pairs = 0.5 * n * (n - 1.0);
  return eta_lambda * pairs * (2.0 * zero_one_moment(n, 0, 1) - 0.5);
}

double signed_prefix_expectation_enumerated(int n, double eta_lambda) {
  require_enumerable(n);
  double total = 0.0;
  const auto count = for_each_balanced_mask(n, [&](std::uint32_t mask) {
    double suffix = 0.0;  // ones strictly after position i
    double s = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      const double sigma = static_cast<double>(mask >> i & 1u);
      s += (1.0 - 2.0 * sigma) * (1.0 - eta_lambda * suffix);
      suffix += sigma;
    }
    total += s;
  });
  return total / static_cast<double>(count);
}

double reshuffle_second_moment(int n, int k, double eta, double lambda, double G,
                               double x0) {
  require_even(n);
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  if (k == 0) return x0 * x0;
  const double alpha = eta * lambda;
  const double r = contraction_power(alpha, 2.0 * n);
  const double rk = contraction_power(alpha, 2.0 * n * k);
  const double sum = geometric_sum(r, one_minus_power(alpha, 2.0 * n * k),
                                   one_minus_power(alpha, 2.0 * n), k);
  const double noise = 0.5 * eta * G;
  return rk * x0 * x0 + noise * noise * beta_closed_form(n, alpha) * sum;
}

double single_shuffle_second_moment(int n, int k, double eta, double lambda,
                                    double G, double x0) {
  require_even(n);
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  if (k == 0) return x0 * x0;
  const double alpha = eta * lambda;
  const double s = contraction_power(alpha, n);
  const double sk = contraction_power(alpha, static_cast<double>(n) * k);
  const double ratio = geometric_sum(s, one_minus_power(alpha, static_cast<double>(n) * k),
                                     one_minus_power(alpha, n), k);
  const double noise = 0.5 * eta * G;
  return sk * sk * x0 * x0 + noise * noise * beta_closed_form(n, alpha) * ratio * ratio;
}

namespace {

struct IncrementalMap {
  double contraction;  // rho^{n/2}
  double offset;       // eta G / 2 * sum_{i<n/2} rho^i - rho^{n/2} eta G n / 4
};

IncrementalMap incremental_map(int n, double eta, double lambda, double G) {
  require_even(n);
  const double rho = 1.0 - 2.0 * eta * lambda;
  double sum = 0.0;
  double p = 1.0;
  for (int i = 0; i < n / 2; ++i) {
    sum += p;
    p *= rho;
  }
  // p == rho^{n/2}
  return {p, 0.5 * eta * G * sum - p * eta * G * n / 4.0};
}

}  // namespace

std::vector<double> incremental_trajectory_exact(int n, int k, double eta,
                                                 double lambda, double G,
                                                 double x0) {
  const auto m = incremental_map(n, eta, lambda, G);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(std::max(k, 0)));
  double x = x0;
  // x_{t+1} = rho^{n/2} (x_t - eta G n / 4) + (eta G / 2) sum rho^i.
  const double shift = eta * G * n / 4.0;
  const double tail = m.offset + m.contraction * shift;
  for (int t = 0; t < k; ++t) {
    x = m.contraction * (x - shift) + tail;
    xs.push_back(x);
  }
  return xs;
}

double incremental_fixed_point(int n, double eta, double lambda, double G) {
  const auto m = incremental_map(n, eta, lambda, G);
  return m.offset / (1.0 - m.contraction);
}

ProductSumGap product_sum_gap(std::span<const double> a) {
  const double cap = 1.0 / (10.0 * static_cast<double>(a.size()));
  double prod = 1.0;
  double sum = 0.0;
  for (const double v : a) {
    if (!(v >= 0.0 && v <= cap)) {
      throw std::invalid_argument(
          fmt::format("product_sum_gap needs entries in [0, 1/(10n)] = [0, {}], got {}", cap, v));
    }
    prod *= 1.0 - v;
    sum += v;
  }
  ProductSumGap r;
  r.gap = std::abs(prod - (1.0 - sum));
  r.bound = 2.0 * sum * sum;
  r.satisfied = r.gap <= r.bound;
  return r;
}

namespace {

void require_zero_sum(const FiniteSumProblem& p) {
  double sum = 0.0;
  double scale = 0.0;
  for (const auto& c : p.components()) {
    sum += c.b;
    scale = std::max(scale, std::abs(c.b));
  }
  if (std::abs(sum) > 1e-12 * static_cast<double>(p.size()) * std::max(scale, 1e-300)) {
    throw std::invalid_argument(
        fmt::format("X_sigma requires sum_i b_i = 0, got {}", sum));
  }
}

double x_sigma_unchecked(const FiniteSumProblem& p, std::span<const int> sigma, double eta) {
  double x = 0.0;
  double prod = 1.0;
  for (std::size_t j = sigma.size(); j-- > 0;) {
    const auto& c = p.component(static_cast<std::size_t>(sigma[j]));
    x += prod * c.b;
    prod *= 1.0 - eta * c.a;
  }
  return x;
}

}  // namespace

double x_sigma(const FiniteSumProblem& p, std::span<const int> sigma, double eta) {
  require_zero_sum(p);
  if (sigma.size() != p.size()) {
    throw std::invalid_argument("permutation size does not match the problem");
  }
  return x_sigma_unchecked(p, sigma, eta);
}

XSigmaMoments x_sigma_moments(const FiniteSumProblem& p, double eta, MomentMode mode,
                              std::int64_t trials, std::uint64_t seed) {
  require_zero_sum(p);
  const int n = static_cast<int>(p.size());
  XSigmaMoments r;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  if (mode == MomentMode::Enumerate) {
    if (n > kMaxEnumeratedPermutationSize) {
      throw std::invalid_argument(fmt::format(
          "permutation enumeration supports n <= {}, got {}", kMaxEnumeratedPermutationSize, n));
    }
    for_each_permutation(n, [&](std::span<const int> perm) {
      const double x = x_sigma_unchecked(p, perm, eta);
      s1 += x;
      s2 += x * x;
      ++r.samples;
    });
  } else {
    if (trials < 2) throw std::invalid_argument("Monte Carlo needs at least 2 trials");
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (std::int64_t t = 0; t < trials; ++t) {
      std::iota(perm.begin(), perm.end(), 0);
      CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
      shuffle(perm, rng);
      const double x = x_sigma_unchecked(p, perm, eta);
      s1 += x;
      s2 += x * x;
      s4 += x * x * x * x;
    }
    r.samples = trials;
  }
  const double c = static_cast<double>(r.samples);
  r.mean = s1 / c;
  r.mean_sq = s2 / c;
  if (mode == MomentMode::MonteCarlo) {
    r.stderr_mean = std::sqrt(std::max(0.0, (s2 - c * r.mean * r.mean) / (c - 1.0)) / c);
    r.stderr_sq = std::sqrt(std::max(0.0, (s4 - c * r.mean_sq * r.mean_sq) / (c - 1.0)) / c);
  }
  const double L = p.max_curvature();
  const double G = p.gradient_bound();
  const double nn = n;
  r.second_bound = 5.0 * eta * eta * nn * nn * nn * L * L * G * G * std::log(2.0 * nn);
  r.first_bound = 2.0 * eta * nn * G * L;
  r.second_applicable = eta * L <= 1.0;
  r.first_applicable = eta * nn * L <= 0.5;
  r.second_satisfied = r.mean_sq + 4.0 * r.stderr_sq <= r.second_bound;
  r.first_satisfied =
      !r.first_applicable || std::abs(r.mean) + 4.0 * r.stderr_mean <= r.first_bound;
  return r;
}

double hoeffding_serfling_bound(int n, int j, double delta, double range_width) {
  if (n < 1 || j < 1 || j > n) {
    throw std::invalid_argument(fmt::format("need 1 <= j <= n, got j = {}, n = {}", j, n));
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument(fmt::format("delta must lie in (0, 1], got {}", delta));
  }
  const double nn = n;
  const double jj = j;
  const double rho = std::min(1.0 - (jj - 1.0) / nn, (1.0 - jj / nn) * (1.0 + 1.0 / jj));
  return range_width * std::sqrt(std::max(0.0, rho) * std::log(1.0 / delta) / (2.0 * jj));
}

HoeffdingSerflingCheck hoeffding_serfling_violation_rate(std::span<const double> values,
                                                         double delta,
                                                         std::int64_t samples,
                                                         std::uint64_t seed) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw std::invalid_argument("need at least two values");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double width = *hi - *lo;
  std::vector<double> bound(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) bound[static_cast<std::size_t>(j)] = hoeffding_serfling_bound(n, j, delta, width);
  // Rounding slack: the full-length prefix deviates by exactly 0.
  const double slack = 1e-12 * std::max(width, std::abs(mean));

  std::vector<std::int64_t> violations(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (std::int64_t s = 0; s < samples; ++s) {
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    shuffle(perm, rng);
    double prefix = 0.0;
    for (int j = 1; j <= n; ++j) {
      prefix += values[static_cast<std::size_t>(perm[static_cast<std::size_t>(j - 1)])] - mean;
      if (prefix / j > bound[static_cast<std::size_t>(j)] + slack) {
        ++violations[static_cast<std::size_t>(j)];
      }
    }
  }
  HoeffdingSerflingCheck r;
  r.delta = delta;
  r.samples = samples;
  r.worst_j = 1;
  for (int j = 1; j <= n; ++j) {
    const double rate = static_cast<double>(violations[static_cast<std::size_t>(j)]) /
                        static_cast<double>(std::max<std::int64_t>(samples, 1));
    if (rate > r.max_rate) {
      r.max_rate = rate;
      r.worst_j = j;
    }
  }
  return r;
}

void write_lemma_csv_header(std::ostream& out) {
  out << "lemma_id,params,exact,oracle,bound,satisfied,empirical_constant\n";
}

void write_lemma_csv(std::ostream& out, const LemmaCheckResult& r) {
  std::string params;
  for (const auto& [key, value] : r.params) {
    if (!params.empty()) params += ';';
    params += key + '=' + csv_number(value);
  }
  out << r.lemma_id << ',' << params << ',' << csv_number(r.exact_value) << ','
      << csv_number(r.oracle_value) << ',' << csv_number(r.bound_value) << ','
      << (r.satisfied ? 1 : 0) << ',' << csv_number(r.empirical_constant) << '\n';
}

namespace {

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = count == 1 ? lo : std::exp(a + (b - a) * i / (count - 1));
  }
  return g;
}

}  // namespace

std::vector<LemmaCheckResult> run_lemma_suite(int max_n, std::uint64_t seed) {
  if (max_n < 2) throw std::invalid_argument("max_n must be >= 2");
  std::vector<LemmaCheckResult> out;
  const int beta_cap = std::min(max_n, kMaxEnumeratedPatternSize);
  const int moment_cap = std::min(max_n, 12);
  const int perm_cap = std::min(max_n, kMaxEnumeratedPermutationSize);

  // Closed form vs pattern enumeration, and the measured envelope constant.
  const auto alphas = log_grid(1e-6, 10.0, 50);
  for (int n = 2; n <= beta_cap; n += 2) {
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const double alpha : alphas) {
      LemmaCheckResult r;
      r.lemma_id = "beta_closed_form";
      r.params = {{"n", n}, {"alpha", alpha}};
      r.exact_value = beta_closed_form(n, alpha);
      r.oracle_value = beta_enumerated(n, alpha);
      r.bound_value = beta_lower_envelope(n, alpha);
      r.empirical_constant = r.exact_value / r.bound_value;
      r.satisfied = close_relative(r.exact_value, r.oracle_value, 1e-11);
      worst_ratio = std::min(worst_ratio, r.empirical_constant);
      out.push_back(std::move(r));
    }
    LemmaCheckResult env;
    env.lemma_id = "beta_lower_envelope";
    env.params = {{"n", n}};
    env.empirical_constant = worst_ratio;
    env.exact_value = worst_ratio;
    env.oracle_value = worst_ratio;
    env.satisfied = worst_ratio > 0.0;
    out.push_back(std::move(env));

    LemmaCheckResult mono;
    mono.lemma_id = "beta_shape_monotone";
    mono.params = {{"n", n}};
    const double lo = 1.0 / (13.0 * n);
    double prev = beta_shape_factor(n, lo);
    double worst_drop = 0.0;
    for (int s = 1; s < 1000; ++s) {
      const double alpha = lo + (1.0 - lo) * s / 1000.0;
      const double v = beta_shape_factor(n, alpha);
      worst_drop = std::max(worst_drop, prev - v);
      prev = v;
    }
    mono.exact_value = worst_drop;
    mono.bound_value = 1e-12;
    mono.satisfied = worst_drop <= 1e-12;
    out.push_back(std::move(mono));
  }

  for (int n = 2; n <= moment_cap; n += 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        LemmaCheckResult s;
        s.lemma_id = "sign_moment";
        s.params = {{"n", n}, {"i", i}, {"j", j}};
        s.exact_value = sign_moment(n, i, j);
        s.oracle_value = sign_moment_enumerated(n, i, j);
        s.satisfied = std::abs(s.exact_value - s.oracle_value) <= 1e-13;
        out.push_back(std::move(s));
        LemmaCheckResult z;
        z.lemma_id = "zero_one_moment";
        z.params = {{"n", n}, {"i", i}, {"j", j}};
        z.exact_value = zero_one_moment(n, i, j);
        z.oracle_value = zero_one_moment_enumerated(n, i, j);
        z.satisfied = std::abs(z.exact_value - z.oracle_value) <= 1e-13;
        out.push_back(std::move(z));
      }
    }
  }

  for (int n = 2; n <= beta_cap; n += 2) {
    for (const double el : {0.0, 0.01, 0.2, 0.9}) {
      LemmaCheckResult r;
      r.lemma_id = "signed_prefix_expectation";
      r.params = {{"n", n}, {"eta_lambda", el}};
      r.exact_value = signed_prefix_expectation(n, el);
      r.oracle_value = signed_prefix_expectation_enumerated(n, el);
      r.satisfied = std::abs(r.exact_value - r.oracle_value) <=
                    1e-12 * std::max(1.0, std::abs(r.exact_value));
      out.push_back(std::move(r));
    }
  }

  CounterRng rng(derive_seed(seed, 1));
  const int gap_cap = std::min(max_n, 64);
  for (int v = 0; v < 1000; ++v) {
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint32_t>(gap_cap - 1)));
    std::vector<double> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = rng.uniform(0.0, 1.0 / (10.0 * n));
    const auto g = product_sum_gap(a);
    LemmaCheckResult r;
    r.lemma_id = "product_sum_gap";
    r.params = {{"n", n}, {"vector", v}};
    r.exact_value = g.gap;
    r.bound_value = g.bound;
    r.satisfied = g.satisfied;
    r.empirical_constant = g.bound > 0.0 ? g.gap / g.bound : 0.0;
    out.push_back(std::move(r));
  }

  for (int inst = 0; inst < 20; ++inst) {
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint32_t>(perm_cap - 1)));
    const double L = rng.uniform(1.0, 4.0);
    const double lambda = rng.uniform(0.1, 1.0) * L;
    const auto p = make_random_instance(n, lambda, L, 1.0, derive_seed(seed, 100 + inst));
    const double eta = rng.uniform(0.05, 0.5) / (n * p.max_curvature());
    const auto m = x_sigma_moments(p, eta, MomentMode::Enumerate);
    LemmaCheckResult second;
    second.lemma_id = "x_sigma_second_moment";
    second.params = {{"n", n}, {"eta", eta}, {"instance", inst}};
    second.exact_value = m.mean_sq;
    second.bound_value = m.second_bound;
    second.satisfied = m.second_satisfied;
    second.empirical_constant = m.mean_sq / m.second_bound;
    out.push_back(std::move(second));
    LemmaCheckResult first;
    first.lemma_id = "x_sigma_first_moment";
    first.params = second.params;
    first.exact_value = m.mean;
    first.bound_value = m.first_bound;
    first.satisfied = m.first_satisfied;
    first.empirical_constant = std::abs(m.mean) / m.first_bound;
    out.push_back(std::move(first));
  }

  const int hs_n = std::min(max_n, 32);
  std::vector<double> values(static_cast<std::size_t>(hs_n));
  for (auto& x : values) x = rng.uniform(-1.0, 1.0);
  for (const double delta : {0.1, 0.01}) {
    const auto h = hoeffding_serfling_violation_rate(values, delta, 10000, derive_seed(seed, 7));
    LemmaCheckResult r;
    r.lemma_id = "hoeffding_serfling";
    r.params = {{"n", hs_n}, {"delta", delta}, {"worst_j", h.worst_j}};
    r.exact_value = h.max_rate;
    r.bound_value = delta;
    r.satisfied = h.max_rate <= delta;
    r.empirical_constant = h.max_rate / delta;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace permsgd
