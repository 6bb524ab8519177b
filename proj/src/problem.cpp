#include "permsgd/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "permsgd/rng.hpp"

namespace permsgd {

std::string_view to_string(ConstructionKind kind) noexcept {
  switch (kind) {
    case ConstructionKind::SignedLinear: return "signed_linear";
    case ConstructionKind::HalfCurved: return "half_curved";
    case ConstructionKind::CyclicSplit: return "cyclic_split";
  }
  return "unknown";
}

std::string_view to_string(OrderPattern pattern) noexcept {
  return pattern == OrderPattern::BlockHalves ? "block_halves" : "alternating";
}

ConstructionKind parse_construction(std::string_view name) {
  if (name == "signed_linear") return ConstructionKind::SignedLinear;
  if (name == "half_curved") return ConstructionKind::HalfCurved;
  if (name == "cyclic_split") return ConstructionKind::CyclicSplit;
  throw std::invalid_argument(fmt::format("unknown construction '{}'", name));
}

OrderPattern parse_order(std::string_view name) {
  if (name == "block_halves") return OrderPattern::BlockHalves;
  if (name == "alternating") return OrderPattern::Alternating;
  throw std::invalid_argument(fmt::format("unknown order pattern '{}'", name));
}

FiniteSumProblem::FiniteSumProblem(std::vector<QuadraticComponent> components,
                                   double gradient_bound, double max_curvature,
                                   double recommended_x0, Provenance provenance)
    : components_(std::move(components)),
      recommended_x0_(recommended_x0),
      provenance_(std::move(provenance)) {
  const auto n = components_.size();
  if (n < 2) {
    throw std::invalid_argument(
        fmt::format("a finite-sum problem needs n > 1 components, got {}", n));
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  double max_a = 0.0;
  for (const auto& c : components_) {
    if (!std::isfinite(c.a) || !std::isfinite(c.b)) {
      throw std::invalid_argument("component coefficients must be finite");
    }
    sum_a += c.a;
    sum_b += c.b;
    max_a = std::max(max_a, c.a);
  }
  if (!(sum_a > 0.0)) {
    throw std::invalid_argument(
        "mean curvature must be positive (F must be strongly convex)");
  }
  lambda_ = sum_a / static_cast<double>(n);
  mean_b_ = sum_b / static_cast<double>(n);
  x_star_ = -sum_b / sum_a;
  double g = 0.0;
  for (const auto& c : components_) g = std::max(g, std::abs(c.gradient(x_star_)));
  gradient_bound_ = std::max(gradient_bound, g);
  max_curvature_ = std::max(max_curvature, max_a);
}

double FiniteSumProblem::objective(double x) const noexcept {
  return 0.5 * lambda_ * x * x + mean_b_ * x;
}

double FiniteSumProblem::suboptimality(double x) const noexcept {
  const double d = x - x_star_;
  return 0.5 * lambda_ * d * d;
}

bool FiniteSumProblem::operator==(const FiniteSumProblem& other) const {
  if (components_.size() != other.components_.size()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].a != other.components_[i].a ||
        components_[i].b != other.components_[i].b) {
      return false;
    }
  }
  return gradient_bound_ == other.gradient_bound_ &&
         max_curvature_ == other.max_curvature_ &&
         recommended_x0_ == other.recommended_x0_ &&
         provenance_ == other.provenance_;
}

std::vector<std::string> construction_warnings(double G, double lambda) {
  std::vector<std::string> out;
  if (G < 6.0 * lambda) {
    out.push_back(fmt::format(
        "G = {} is below 6 * lambda = {}; the hard constructions assume G >= 6 lambda",
        G, 6.0 * lambda));
  }
  return out;
}

FiniteSumProblem make_construction(ConstructionKind kind, int n, double G,
                                   double lambda, OrderPattern order) {
  if (n < 2) {
    throw std::invalid_argument(fmt::format("n must be > 1, got {}", n));
  }
  if (n % 2 != 0) {
    throw std::invalid_argument(fmt::format(
        "n must be even, got {}; an odd n reduces to the even case n - 1 by "
        "appending a zero component, which is not applied automatically",
        n));
  }
  if (!(G > 0.0)) throw std::invalid_argument("G must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  QuadraticComponent first;
  QuadraticComponent second;
  double x0 = 1.0;
  switch (kind) {
    case ConstructionKind::SignedLinear:
      first = {lambda, 0.5 * G};
      second = {lambda, -0.5 * G};
      break;
    case ConstructionKind::HalfCurved:
      first = {lambda, 0.5 * G};
      second = {0.0, -0.5 * G};
      x0 = -1.0;
      break;
    case ConstructionKind::CyclicSplit:
      // Second half is lambda x^2 - (G/2) x, i.e. curvature 2 lambda.
      first = {0.0, 0.5 * G};
      second = {2.0 * lambda, -0.5 * G};
      break;
  }

  std::vector<QuadraticComponent> comps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool is_first =
        order == OrderPattern::BlockHalves ? i < n / 2 : i % 2 == 0;
    comps[static_cast<std::size_t>(i)] = is_first ? first : second;
  }

  Provenance prov;
  prov.kind = std::string(to_string(kind));
  prov.parameters = {{"n", static_cast<double>(n)}, {"G", G}, {"lambda", lambda},
                     {"alternating", order == OrderPattern::Alternating ? 1.0 : 0.0}};
  const double L = std::max(first.a, second.a);
  return FiniteSumProblem(std::move(comps), G, L, x0, std::move(prov));
}

FiniteSumProblem make_random_instance(int n, double lambda, double L, double G,
                                      std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument(fmt::format("n must be > 1, got {}", n));
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(G > 0.0)) throw std::invalid_argument("G must be positive");
  if (lambda > L) {
    throw std::invalid_argument(fmt::format(
        "infeasible instance: mean curvature lambda = {} exceeds L = {}", lambda, L));
  }
  const auto size = static_cast<std::size_t>(n);
  CounterRng rng(seed);

  std::vector<double> a(size);
  for (auto& v : a) v = rng.uniform(0.0, L);
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  // Shrink around the sample mean just enough that recentering at lambda
  // stays inside [0, L].
  double scale = 1.0;
  if (mean_a - *lo > 0.0) scale = std::min(scale, lambda / (mean_a - *lo));
  if (*hi - mean_a > 0.0) scale = std::min(scale, (L - lambda) / (*hi - mean_a));
  for (auto& v : a) v = std::clamp(lambda + scale * (v - mean_a), 0.0, L);

  std::vector<double> b(size);
  for (auto& v : b) v = rng.uniform(-G, G);
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double peak = 0.0;
  for (auto& v : b) {
    v -= mean_b;
    peak = std::max(peak, std::abs(v));
  }
  // Shrink (rather than clip) so the zero sum survives; the margin leaves
  // room for the exact-sum fix-up of the last entry.
  const double limit = G * (1.0 - 1e-12);
  if (peak > limit) {
    for (auto& v : b) v *= limit / peak;
  }
  b.back() = -std::accumulate(b.begin(), b.end() - 1, 0.0);

  std::vector<QuadraticComponent> comps(size);
  for (std::size_t i = 0; i < size; ++i) comps[i] = {a[i], b[i]};
  Provenance prov;
  prov.kind = "random";
  prov.seed = seed;
  prov.parameters = {{"n", static_cast<double>(n)}, {"lambda", lambda}, {"L", L}, {"G", G}};
  return FiniteSumProblem(std::move(comps), G, L, 1.0, std::move(prov));
}

bool ValidationReport::has(std::string_view name) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.name == name; });
}

ValidationReport validate(const FiniteSumProblem& p, double lambda_claim,
                          double L_claim, double G_claim) {
  ValidationReport r;
  const auto comps = p.components();
  r.mean_curvature = p.lambda();
  r.min_curvature = comps.front().a;
  r.max_curvature = comps.front().a;
  for (const auto& c : comps) {
    r.min_curvature = std::min(r.min_curvature, c.a);
    r.max_curvature = std::max(r.max_curvature, c.a);
    r.grad_bound_at_xstar = std::max(r.grad_bound_at_xstar, std::abs(c.gradient(p.x_star())));
  }
  if (std::abs(r.mean_curvature - lambda_claim) > 1e-12 * std::abs(lambda_claim)) {
    r.violations.push_back({"mean_curvature",
                            fmt::format("mean curvature {} != lambda {}",
                                        r.mean_curvature, lambda_claim)});
  }
  if (r.max_curvature > L_claim) {
    r.violations.push_back({"max_curvature", fmt::format("max curvature {} > L {}",
                                                         r.max_curvature, L_claim)});
  }
  if (r.min_curvature < 0.0) {
    r.violations.push_back({"convexity", fmt::format("component curvature {} < 0",
                                                     r.min_curvature)});
  }
  if (r.grad_bound_at_xstar > G_claim) {
    r.violations.push_back({"gradient_bound",
                            fmt::format("max |f_i'(x*)| = {} > G {}",
                                        r.grad_bound_at_xstar, G_claim)});
  }
  return r;
}

std::string to_json(const FiniteSumProblem& p) {
  nlohmann::ordered_json doc;
  doc["n"] = p.size();
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : p.components()) comps.push_back({c.a, c.b});
  doc["components"] = std::move(comps);
  doc["gradient_bound"] = p.gradient_bound();
  doc["max_curvature"] = p.max_curvature();
  doc["recommended_x0"] = p.recommended_x0();
  nlohmann::ordered_json prov;
  prov["kind"] = p.provenance().kind;
  if (p.provenance().seed) prov["seed"] = *p.provenance().seed;
  prov["parameters"] = p.provenance().parameters;
  doc["provenance"] = std::move(prov);
  return doc.dump(2);
}

FiniteSumProblem problem_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(fmt::format("problem document: {}", e.what()));
  }
  try {
    std::vector<QuadraticComponent> comps;
    for (const auto& c : doc.at("components")) {
      comps.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
    if (comps.size() != doc.at("n").get<std::size_t>()) {
      throw std::invalid_argument("problem document: n does not match component count");
    }
    Provenance prov;
    const auto& pj = doc.at("provenance");
    prov.kind = pj.at("kind").get<std::string>();
    if (pj.contains("seed")) prov.seed = pj.at("seed").get<std::uint64_t>();
    prov.parameters = pj.at("parameters").get<std::map<std::string, double>>();
    return FiniteSumProblem(std::move(comps), doc.at("gradient_bound").get<double>(),
                            doc.at("max_curvature").get<double>(),
                            doc.at("recommended_x0").get<double>(), std::move(prov));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("problem document: {}", e.what()));
  }
}

}  // namespace permsgd
