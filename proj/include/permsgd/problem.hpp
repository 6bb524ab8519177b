#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permsgd {

/// One summand f(x) = (a/2) x^2 + b x.
struct QuadraticComponent {
  double a = 0.0;
  double b = 0.0;

  double gradient(double x) const noexcept { return a * x + b; }
  double value(double x) const noexcept { return 0.5 * a * x * x + b * x; }
};

/// Exact derivative of (a/2) x^2 + b x.
inline double component_gradient(const QuadraticComponent& c, double x) noexcept {
  return c.gradient(x);
}

/// Hard instances used by the lower-bound experiments.
///
///   SignedLinear  f_i = (l/2)x^2 +- (G/2)x        F = (l/2)x^2, x0 = 1
///   HalfCurved    f_i = (l/2)x^2 + (G/2)x | -(G/2)x   F = (l/4)x^2, x0 = -1
///   CyclicSplit   f_i = (G/2)x | l x^2 - (G/2)x     F = (l/2)x^2, x0 = 1
///
/// The first variant is listed before the bar.
enum class ConstructionKind { SignedLinear, HalfCurved, CyclicSplit };

/// BlockHalves puts the first variant at positions [0, n/2). Alternating
/// puts it at even 0-based positions (odd positions when counting from 1).
enum class OrderPattern { BlockHalves, Alternating };

std::string_view to_string(ConstructionKind kind) noexcept;
std::string_view to_string(OrderPattern pattern) noexcept;
ConstructionKind parse_construction(std::string_view name);
OrderPattern parse_order(std::string_view name);

/// Where a problem came from. `kind` is a construction name or "random".
struct Provenance {
  std::string kind;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> parameters;

  bool operator==(const Provenance&) const = default;
};

/// F(x) = (1/n) sum_i f_i(x) with derived constants. Immutable.
class FiniteSumProblem {
 public:
  /// `gradient_bound` and `max_curvature` are claims; the stored values are
  /// the larger of the claim and what the components actually attain.
  /// Throws std::invalid_argument for n < 2 or nonpositive mean curvature.
  FiniteSumProblem(std::vector<QuadraticComponent> components,
                   double gradient_bound, double max_curvature,
                   double recommended_x0, Provenance provenance);

  std::span<const QuadraticComponent> components() const noexcept {
    return components_;
  }
  const QuadraticComponent& component(std::size_t i) const { return components_.at(i); }
  std::size_t size() const noexcept { return components_.size(); }

  double lambda() const noexcept { return lambda_; }
  double mean_linear() const noexcept { return mean_b_; }
  double x_star() const noexcept { return x_star_; }
  double gradient_bound() const noexcept { return gradient_bound_; }
  double max_curvature() const noexcept { return max_curvature_; }
  double recommended_x0() const noexcept { return recommended_x0_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  double objective(double x) const noexcept;
  double gradient(double x) const noexcept { return lambda_ * x + mean_b_; }

  /// F(x) - F(x*), evaluated as (lambda/2)(x - x*)^2.
  double suboptimality(double x) const noexcept;

  bool operator==(const FiniteSumProblem& other) const;

 private:
  std::vector<QuadraticComponent> components_;
  double lambda_ = 0.0;
  double mean_b_ = 0.0;
  double x_star_ = 0.0;
  double gradient_bound_ = 0.0;
  double max_curvature_ = 0.0;
  double recommended_x0_ = 0.0;
  Provenance provenance_;
};

inline double suboptimality(const FiniteSumProblem& p, double x) noexcept {
  return p.suboptimality(x);
}

/// Builds one of the hard constructions. Rejects odd n (odd sizes reduce
/// to n - 1 plus a zero component; that padding is left to the caller),
/// and nonpositive G or lambda. G < 6 lambda is accepted; see
/// construction_warnings().
FiniteSumProblem make_construction(ConstructionKind kind, int n, double G,
                                   double lambda,
                                   OrderPattern order = OrderPattern::BlockHalves);

/// Hypothesis warnings (not errors) for a construction's parameters.
std::vector<std::string> construction_warnings(double G, double lambda);

/// Random instance with mean curvature exactly lambda, curvatures in
/// [0, L], zero-sum linear terms with |b_i| <= G (so x* = 0).
FiniteSumProblem make_random_instance(int n, double lambda, double L, double G,
                                      std::uint64_t seed);

struct Violation {
  std::string name;
  std::string detail;
};

struct ValidationReport {
  double mean_curvature = 0.0;
  double max_curvature = 0.0;
  double min_curvature = 0.0;
  double grad_bound_at_xstar = 0.0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view name) const noexcept;
};

/// Checks the quadratic-problem assumptions against claimed
/// (lambda, L, G). Violations are reported, never thrown.
ValidationReport validate(const FiniteSumProblem& p, double lambda_claim,
                          double L_claim, double G_claim);

/// JSON document {n, components: [[a, b], ...], gradient_bound,
/// max_curvature, recommended_x0, provenance}. Round-trips bit-exactly.
std::string to_json(const FiniteSumProblem& p);
FiniteSumProblem problem_from_json(std::string_view text);

}  // namespace permsgd
