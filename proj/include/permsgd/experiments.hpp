#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permsgd/csv.hpp"
#include "permsgd/engine.hpp"
#include "permsgd/problem.hpp"

namespace permsgd {

/// count log-spaced step sizes in [lo, hi].
struct EtaGrid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 200;

  std::vector<double> values() const;

  /// 200 points over [1e-6 / (lambda n^2), 10 / lambda].
  static EtaGrid standard(double lambda, int n);
};

enum class Estimator { Exact, MonteCarlo };

/// N and K vary one size with the other fixed; Joint varies k at fixed n and
/// reports n*k as the axis value.
enum class SweepAxis { N, K, Joint };

std::string_view to_string(Estimator e) noexcept;
std::string_view to_string(SweepAxis a) noexcept;
Estimator parse_estimator(std::string_view name);
SweepAxis parse_axis(std::string_view name);

struct SweepSpec {
  SamplingScheme scheme = SamplingScheme::RandomReshuffle;
  ConstructionKind construction = ConstructionKind::SignedLinear;
  OrderPattern order = OrderPattern::BlockHalves;
  std::optional<std::uint64_t> instance_seed;  // random instance instead of a construction
  SweepAxis axis = SweepAxis::K;
  std::vector<int> axis_values;
  int n = 16;  // used when the axis is K or Joint
  int k = 32;  // used when the axis is N
  double G = 6.0;
  double lambda = 1.0;
  double L = 1.0;                // random instances only
  std::optional<double> x0;      // problem default when unset
  Estimator estimator = Estimator::Exact;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<EtaGrid> eta_grid;  // EtaGrid::standard(lambda, n) when unset
  unsigned threads = 0;
};

/// Throws std::invalid_argument when the estimator has no closed form for
/// the scheme and construction, or the sizes are unusable.
void check_spec(const SweepSpec& spec);

FiniteSumProblem build_problem(const SweepSpec& spec, int n);

/// Epoch-k expected suboptimality at one step size; +inf when diverged.
double evaluate_error(const SweepSpec& spec, const FiniteSumProblem& p, int k,
                      double eta, std::uint64_t seed);

struct StepsizeOptimum {
  double eta_star = 0.0;
  double error_star = 0.0;
  bool diverged = false;  // every grid point diverged
  int evaluations = 0;
};

/// Minimum over the eta grid; ties go to the smaller step size.
StepsizeOptimum min_over_stepsize(const SweepSpec& spec, int n, int k);

struct SweepRow {
  double axis_value = 0.0;
  int n = 0;
  int k = 0;
  double eta_star = 0.0;
  double error_star = 0.0;
  bool diverged = false;
};

struct SweepResult {
  SamplingScheme scheme = SamplingScheme::RandomReshuffle;
  std::string problem_label;
  SweepAxis axis = SweepAxis::K;
  std::vector<SweepRow> rows;
};

SweepResult scaling_sweep(const SweepSpec& spec);

enum class FitModel { PurePower, TwoTerm };

std::string_view to_string(FitModel m) noexcept;
FitModel parse_fit_model(std::string_view name);

struct RateFit {
  FitModel model = FitModel::PurePower;
  double exponent = 0.0;   // two-term: log-log slope of the fitted curve end to end
  double intercept = 0.0;  // pure-power only
  double coef_a = 0.0;     // two-term: A / (nk)^2
  double coef_b = 0.0;     // two-term: B / (n k^3)
  double r_squared = 0.0;  // in log space, clamped to [0, 1]
  int points = 0;
};

/// Throws std::invalid_argument with fewer than 3 rows or a nonpositive
/// (or diverged) error.
RateFit fit_rate(const SweepResult& sweep, FitModel model);
RateFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

enum class BoundKind { Lower, Upper };

struct BoundPoint {
  int n = 0;
  int k = 0;
  double eta = 0.0;
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  BoundKind kind = BoundKind::Lower;
  SamplingScheme scheme = SamplingScheme::RandomReshuffle;
  std::vector<BoundPoint> points;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool verdict = false;
};

/// Largest max/min ratio spread a lower-bound report may show.
inline constexpr double kMaxLowerBoundSpread = 50.0;

/// Recomputes min/max ratio and the verdict from the points alone.
/// Lower: min > 0, finite, and max/min < 50. Upper: every ratio <= 1.
void finalize(BoundReport& report);

/// The lower-bound formula without its universal constant.
double lower_bound_formula(SamplingScheme scheme, int n, int k, double G, double lambda);

/// Exact min-over-eta error against the formula on every (n, k) pair.
/// Reshuffle and single shuffling use the signed-linear construction,
/// the incremental method the cyclic-split construction.
BoundReport verify_lower_bound(SamplingScheme scheme, const std::vector<int>& ns,
                               const std::vector<int>& ks, double G, double lambda);

enum class UpperBoundVariant { Single, Reshuffle };

struct UpperBoundStep {
  double eta = 0.0;
  double bound = 0.0;
};

std::string_view to_string(UpperBoundVariant t) noexcept;
UpperBoundVariant parse_upper_variant(std::string_view name);

/// Prescribed step size and explicit bound for a problem with x* = 0
/// shifted out (dist0 = |x0 - x*|). Throws std::invalid_argument when the
/// condition-number hypothesis fails.
UpperBoundStep upper_bound_step(UpperBoundVariant which, int n, int k, double lambda,
                                double L, double G, double dist0);

/// Builds make_random_instance(n, lambda, L, G, seed) and compares the
/// expected suboptimality (exact for n <= 8, else Monte Carlo) to the bound.
BoundReport verify_upper_bound(UpperBoundVariant which, int n, int k, double lambda,
                               double L, double G, std::int64_t trials,
                               std::uint64_t seed, double x0 = 1.0);
BoundReport verify_upper_bound(UpperBoundVariant which, const FiniteSumProblem& p, int k,
                               std::int64_t trials, std::uint64_t seed, double x0);

struct RateTarget {
  std::string axis_label;  // "k", "n", "nk" or "k<=n"
  SweepSpec spec;
  FitModel model = FitModel::PurePower;
  double target = 0.0;
  double tolerance = 0.15;
};

struct TableConfig {
  std::vector<SamplingScheme> schemes{
      SamplingScheme::RandomReshuffle, SamplingScheme::SingleShuffle,
      SamplingScheme::Incremental, SamplingScheme::WithReplacement};
  double G = 6.0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::int64_t mc_trials = 10'000;
  double exact_tolerance = 0.15;
  double mc_tolerance = 0.2;
  double reshuffle_small_k_tolerance = 0.3;
  unsigned threads = 0;
};

std::vector<RateTarget> default_rate_targets(SamplingScheme scheme, const TableConfig& config);

struct RateEntry {
  std::string axis_label;
  RateFit fit;
  double target = 0.0;
  double tolerance = 0.0;
  bool within = false;
  SweepResult sweep;
};

struct RateRow {
  SamplingScheme scheme = SamplingScheme::RandomReshuffle;
  std::vector<RateEntry> entries;

  bool all_within() const;
  std::vector<std::string> deviations() const;
};

std::vector<RateRow> reproduce_rate_table(const TableConfig& config);

/// max/min - 1 of error_star over the rows.
double relative_spread(const SweepResult& sweep);

// CSV headers:
//   sweep:  scheme,problem,axis,axis_value,n,k,eta_star,error_star,diverged
//   fit:    scheme,axis,model,exponent,intercept,coef_a,coef_b,r_squared,points
//   bounds: kind,scheme,n,k,eta,observed,bound,ratio
//   table:  scheme,axis,fitted,target,tolerance,within,r_squared
void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool header = true);
void write_fit_csv(std::ostream& out, SamplingScheme scheme, std::string_view axis,
                   const RateFit& fit, bool header = true);
void write_bound_csv(std::ostream& out, const BoundReport& report, bool header = true);
void write_table_csv(std::ostream& out, const std::vector<RateRow>& rows);

SweepResult sweep_from_csv(const CsvTable& table);
/// Reports of one kind and scheme each, in file order.
std::vector<BoundReport> bounds_from_csv(const CsvTable& table);

}  // namespace permsgd
