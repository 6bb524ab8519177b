#include "permsgd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "permsgd/analytic.hpp"
#include "permsgd/rng.hpp"

namespace permsgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_permutation_scheme(SamplingScheme s) {
  return s == SamplingScheme::RandomReshuffle || s == SamplingScheme::SingleShuffle;
}

double log_slope(double x0, double y0, double x1, double y1) {
  return (std::log(y1) - std::log(y0)) / (std::log(x1) - std::log(x0));
}

}  // namespace

std::vector<double> EtaGrid::values() const {
  if (count < 1) throw std::invalid_argument("eta grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument(fmt::format("eta grid bounds must satisfy 0 < lo <= hi, got [{}, {}]", lo, hi));
  }
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

EtaGrid EtaGrid::standard(double lambda, int n) {
  const double nn = n;
  return {1e-6 / (lambda * nn * nn), 10.0 / lambda, 200};
}

std::string_view to_string(Estimator e) noexcept {
  return e == Estimator::Exact ? "exact" : "monte_carlo";
}

std::string_view to_string(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::N: return "n";
    case SweepAxis::K: return "k";
    case SweepAxis::Joint: return "nk";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "exact") return Estimator::Exact;
  if (name == "monte_carlo" || name == "mc") return Estimator::MonteCarlo;
  throw std::invalid_argument(fmt::format("unknown estimator '{}' (exact, monte_carlo)", name));
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "n") return SweepAxis::N;
  if (name == "k") return SweepAxis::K;
  if (name == "nk" || name == "joint") return SweepAxis::Joint;
  throw std::invalid_argument(fmt::format("unknown axis '{}' (n, k, nk)", name));
}

void check_spec(const SweepSpec& spec) {
  if (spec.axis_values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  for (const int v : spec.axis_values) {
    if (v < 1) throw std::invalid_argument(fmt::format("axis value {} must be positive", v));
  }
  if (spec.estimator == Estimator::Exact) {
    const bool closed =
        !spec.instance_seed &&
        ((spec.construction == ConstructionKind::SignedLinear && is_permutation_scheme(spec.scheme)) ||
         (spec.construction == ConstructionKind::CyclicSplit &&
          spec.scheme == SamplingScheme::Incremental));
    if (!closed) {
      throw std::invalid_argument(fmt::format(
          "no closed form for scheme '{}' on '{}'; use estimator = monte_carlo",
          to_string(spec.scheme),
          spec.instance_seed ? std::string("random instance")
                             : std::string(to_string(spec.construction))));
    }
  } else if (spec.trials < 1) {
    throw std::invalid_argument("monte_carlo estimator needs trials >= 1");
  }
}

FiniteSumProblem build_problem(const SweepSpec& spec, int n) {
  if (spec.instance_seed) {
    return make_random_instance(n, spec.lambda, spec.L, spec.G, *spec.instance_seed);
  }
  return make_construction(spec.construction, n, spec.G, spec.lambda, spec.order);
}

double evaluate_error(const SweepSpec& spec, const FiniteSumProblem& p, int k, double eta,
                      std::uint64_t seed) {
  const double x0 = spec.x0.value_or(p.recommended_x0());
  const int n = static_cast<int>(p.size());
  const double limit = kDivergenceThreshold * kDivergenceThreshold;
  if (spec.estimator == Estimator::Exact) {
    double second = 0.0;
    switch (spec.scheme) {
      case SamplingScheme::RandomReshuffle:
        second = reshuffle_second_moment(n, k, eta, spec.lambda, spec.G, x0);
        break;
      case SamplingScheme::SingleShuffle:
        second = single_shuffle_second_moment(n, k, eta, spec.lambda, spec.G, x0);
        break;
      case SamplingScheme::Incremental: {
        const double x = incremental_trajectory_exact(n, k, eta, spec.lambda, spec.G, x0).back();
        second = (x - p.x_star()) * (x - p.x_star());
        break;
      }
      case SamplingScheme::WithReplacement:
        throw std::invalid_argument("no closed form for with-replacement sampling");
    }
    if (!std::isfinite(second) || second > limit) return kInf;
    return 0.5 * p.lambda() * second;
  }
  const auto est = estimate_suboptimality(p, spec.scheme, eta, k, spec.trials, seed, x0, spec.threads);
  if (est.diverged || !std::isfinite(est.mean_subopt)) return kInf;
  return est.mean_subopt;
}

StepsizeOptimum min_over_stepsize(const SweepSpec& spec, int n, int k) {
  check_spec(spec);
  const auto p = build_problem(spec, n);
  const auto etas = spec.eta_grid.value_or(EtaGrid::standard(spec.lambda, n)).values();
  const auto point_seed = derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(n)),
                                      static_cast<std::uint64_t>(k));
  StepsizeOptimum best;
  best.error_star = kInf;
  best.eta_star = etas.front();
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double e = evaluate_error(spec, p, k, etas[i], derive_seed(point_seed, i));
    ++best.evaluations;
    if (e < best.error_star) {
      best.error_star = e;
      best.eta_star = etas[i];
    }
  }
  best.diverged = !std::isfinite(best.error_star);
  return best;
}

SweepResult scaling_sweep(const SweepSpec& spec) {
  check_spec(spec);
  SweepResult r;
  r.scheme = spec.scheme;
  r.axis = spec.axis;
  r.problem_label = spec.instance_seed ? fmt::format("random:{}", *spec.instance_seed)
                                       : std::string(to_string(spec.construction));
  for (const int v : spec.axis_values) {
    const int n = spec.axis == SweepAxis::N ? v : spec.n;
    const int k = spec.axis == SweepAxis::N ? spec.k : v;
    const auto opt = min_over_stepsize(spec, n, k);
    SweepRow row;
    row.n = n;
    row.k = k;
    row.axis_value = spec.axis == SweepAxis::N   ? n
                     : spec.axis == SweepAxis::K ? k
                                                 : static_cast<double>(n) * k;
    row.eta_star = opt.eta_star;
    row.error_star = opt.error_star;
    row.diverged = opt.diverged;
    r.rows.push_back(row);
  }
  return r;
}

std::string_view to_string(FitModel m) noexcept {
  return m == FitModel::PurePower ? "pure_power" : "two_term";
}

FitModel parse_fit_model(std::string_view name) {
  if (name == "pure_power" || name == "pure-power" || name == "power") return FitModel::PurePower;
  if (name == "two_term" || name == "two-term") return FitModel::TwoTerm;
  throw std::invalid_argument(fmt::format("unknown fit model '{}' (pure-power, two-term)", name));
}

namespace {

double r_squared(const std::vector<double>& ly, const std::vector<double>& lfit) {
  double mean = 0.0;
  for (const double v : ly) mean += v;
  mean /= static_cast<double>(ly.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < ly.size(); ++i) {
    ss_res += (ly[i] - lfit[i]) * (ly[i] - lfit[i]);
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  if (ss_tot <= 0.0) return ss_res <= 1e-24 ? 1.0 : 0.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

void check_fit_input(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit inputs differ in length");
  if (x.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw std::invalid_argument(fmt::format("rate fit needs positive finite errors, got {}", y[i]));
    }
    if (!(x[i] > 0.0)) throw std::invalid_argument("rate fit needs positive axis values");
  }
}

}  // namespace

RateFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  check_fit_input(x, y);
  const auto m = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("rate fit needs at least two distinct axis values");
  RateFit f;
  f.model = FitModel::PurePower;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.points = static_cast<int>(x.size());
  std::vector<double> fit(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fit[i] = f.intercept + f.exponent * lx[i];
  f.r_squared = r_squared(ly, fit);
  return f;
}

RateFit fit_rate(const SweepResult& sweep, FitModel model) {
  std::vector<double> x, y;
  for (const auto& row : sweep.rows) {
    if (row.diverged) throw std::invalid_argument("rate fit rejects diverged rows");
    x.push_back(row.axis_value);
    y.push_back(row.error_star);
  }
  if (model == FitModel::PurePower) return fit_power_law(x, y);

  check_fit_input(x, y);
  // Relative least squares: minimize sum ((A u + B v) / y - 1)^2 with A, B >= 0.
  double uu = 0.0, uv = 0.0, vv = 0.0, u1 = 0.0, v1 = 0.0;
  std::vector<double> u(x.size()), v(x.size());
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const double n = sweep.rows[i].n;
    const double k = sweep.rows[i].k;
    u[i] = 1.0 / (n * k * n * k) / y[i];
    v[i] = 1.0 / (n * k * k * k) / y[i];
    uu += u[i] * u[i];
    uv += u[i] * v[i];
    vv += v[i] * v[i];
    u1 += u[i];
    v1 += v[i];
  }
  auto residual = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += (a * u[i] + b * v[i] - 1.0) * (a * u[i] + b * v[i] - 1.0);
    return s;
  };
  double best_a = u1 / uu, best_b = 0.0;
  double best = residual(best_a, best_b);
  if (const double r = residual(0.0, v1 / vv); r < best) {
    best = r;
    best_a = 0.0;
    best_b = v1 / vv;
  }
  const double det = uu * vv - uv * uv;
  if (det > 1e-14 * uu * vv) {
    const double a = (u1 * vv - v1 * uv) / det;
    const double b = (v1 * uu - u1 * uv) / det;
    if (a >= 0.0 && b >= 0.0 && residual(a, b) <= best) {
      best_a = a;
      best_b = b;
    }
  }
  RateFit f;
  f.model = FitModel::TwoTerm;
  f.coef_a = best_a;
  f.coef_b = best_b;
  f.points = static_cast<int>(x.size());
  std::vector<double> ly(x.size()), lfit(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ly[i] = std::log(y[i]);
    lfit[i] = std::log(y[i] * (best_a * u[i] + best_b * v[i]));
  }
  f.r_squared = r_squared(ly, lfit);
  const std::size_t last = x.size() - 1;
  f.exponent = (x.front() == x[last])
                   ? 0.0
                   : log_slope(x.front(), std::exp(lfit.front()), x[last], std::exp(lfit[last]));
  return f;
}

void finalize(BoundReport& report) {
  report.min_ratio = kInf;
  report.max_ratio = -kInf;
  bool upper_ok = true;
  for (const auto& p : report.points) {
    report.min_ratio = std::min(report.min_ratio, p.ratio);
    report.max_ratio = std::max(report.max_ratio, p.ratio);
    if (!(p.ratio <= 1.0)) upper_ok = false;
  }
  if (report.points.empty()) {
    report.verdict = false;
    return;
  }
  if (report.kind == BoundKind::Upper) {
    report.verdict = upper_ok;
  } else {
    report.verdict = report.min_ratio > 0.0 && std::isfinite(report.max_ratio) &&
                     report.max_ratio / report.min_ratio < kMaxLowerBoundSpread;
  }
}

double lower_bound_formula(SamplingScheme scheme, int n, int k, double G, double lambda) {
  const double nn = n, kk = k;
  const double g2 = G * G / lambda;
  switch (scheme) {
    case SamplingScheme::RandomReshuffle:
      return std::min(lambda, g2 * (1.0 / (nn * kk * nn * kk) + 1.0 / (nn * kk * kk * kk)));
    case SamplingScheme::SingleShuffle:
      return std::min(lambda, g2 / (nn * kk * kk));
    case SamplingScheme::Incremental:
      return std::min(lambda, g2 / (kk * kk));
    case SamplingScheme::WithReplacement:
      break;
  }
  throw std::invalid_argument("no lower-bound construction for with-replacement sampling");
}

BoundReport verify_lower_bound(SamplingScheme scheme, const std::vector<int>& ns,
                               const std::vector<int>& ks, double G, double lambda) {
  SweepSpec spec;
  spec.scheme = scheme;
  spec.construction = scheme == SamplingScheme::Incremental ? ConstructionKind::CyclicSplit
                                                            : ConstructionKind::SignedLinear;
  spec.G = G;
  spec.lambda = lambda;
  spec.estimator = Estimator::Exact;
  spec.axis_values = {1};
  BoundReport report;
  report.kind = BoundKind::Lower;
  report.scheme = scheme;
  for (const int n : ns) {
    for (const int k : ks) {
      const auto opt = min_over_stepsize(spec, n, k);
      BoundPoint pt;
      pt.n = n;
      pt.k = k;
      pt.eta = opt.eta_star;
      pt.observed = opt.error_star;
      pt.bound = lower_bound_formula(scheme, n, k, G, lambda);
      pt.ratio = pt.observed / pt.bound;
      report.points.push_back(pt);
    }
  }
  finalize(report);
  return report;
}

std::string_view to_string(UpperBoundVariant t) noexcept {
  return t == UpperBoundVariant::Single ? "single" : "reshuffle";
}

UpperBoundVariant parse_upper_variant(std::string_view name) {
  if (name == "single") return UpperBoundVariant::Single;
  if (name == "reshuffle") return UpperBoundVariant::Reshuffle;
  throw std::invalid_argument(fmt::format("unknown upper bound '{}' (single, reshuffle)", name));
}

UpperBoundStep upper_bound_step(UpperBoundVariant which, int n, int k, double lambda,
                                double L, double G, double dist0) {
  const double nn = n, kk = k;
  const double kappa = L / lambda;
  UpperBoundStep s;
  if (which == UpperBoundVariant::Single) {
    const double lg = std::log(std::sqrt(nn) * kk);
    const double cap = nn * kk / lg;
    if (!(lg > 0.0) || kappa > cap) {
      throw std::invalid_argument(fmt::format(
          "hypothesis L/lambda <= nk / log(sqrt(n) k) fails: {} > {}", kappa, cap));
    }
    s.eta = lg / (lambda * nn * kk);
  } else {
    const double lg = std::log(nn * kk);
    const double cap = kk / (2.0 * lg);
    if (!(lg > 0.0) || kappa > cap) {
      throw std::invalid_argument(fmt::format(
          "hypothesis L/lambda <= k / (2 log(nk)) fails: {} > {}", kappa, cap));
    }
    s.eta = lg / (lambda * nn * kk);
  }
  const double e4 = std::pow(s.eta, 4.0);
  const double contraction =
      2.0 * std::pow(1.0 - s.eta * lambda, 2.0 * nn * kk) * dist0 * dist0;
  const double noise = G * G * L * L;
  const double log2n = std::log(2.0 * nn);
  if (which == UpperBoundVariant::Single) {
    s.bound = 0.5 * lambda * (contraction + 10.0 * e4 * nn * nn * nn * kk * kk * noise * log2n);
  } else {
    s.bound = 0.5 * lambda *
              (contraction + 12.0 * e4 * nn * nn * kk * kk * noise +
               5.0 * e4 * nn * nn * nn * kk * noise * log2n);
  }
  return s;
}

BoundReport verify_upper_bound(UpperBoundVariant which, const FiniteSumProblem& p, int k,
                               std::int64_t trials, std::uint64_t seed, double x0) {
  const int n = static_cast<int>(p.size());
  const auto step = upper_bound_step(which, n, k, p.lambda(), p.max_curvature(),
                                     p.gradient_bound(), std::abs(x0 - p.x_star()));
  const auto scheme = which == UpperBoundVariant::Single ? SamplingScheme::SingleShuffle
                                                         : SamplingScheme::RandomReshuffle;
  double observed = 0.0;
  if (n <= kMaxEnumeratedPermutationSize) {
    observed = exact_moments(p, scheme, step.eta, k, x0).mean_subopt;
  } else {
    observed = estimate_suboptimality(p, scheme, step.eta, k, trials, seed, x0).mean_subopt;
  }
  BoundReport report;
  report.kind = BoundKind::Upper;
  report.scheme = scheme;
  BoundPoint pt;
  pt.n = n;
  pt.k = k;
  pt.eta = step.eta;
  pt.observed = observed;
  pt.bound = step.bound;
  pt.ratio = observed == 0.0 ? 0.0 : observed / step.bound;
  report.points.push_back(pt);
  finalize(report);
  return report;
}

BoundReport verify_upper_bound(UpperBoundVariant which, int n, int k, double lambda,
                               double L, double G, std::int64_t trials,
                               std::uint64_t seed, double x0) {
  auto p = make_random_instance(n, lambda, L, G, seed);
  return verify_upper_bound(which, p, k, trials, derive_seed(seed, 1), x0);
}

std::vector<RateTarget> default_rate_targets(SamplingScheme scheme, const TableConfig& c) {
  SweepSpec base;
  base.scheme = scheme;
  base.G = c.G;
  base.lambda = c.lambda;
  base.estimator = Estimator::Exact;
  base.threads = c.threads;
  std::vector<RateTarget> out;
  auto add = [&](std::string label, SweepAxis axis, int fixed, std::vector<int> values,
                 double target, double tol) {
    RateTarget t;
    t.axis_label = std::move(label);
    t.spec = base;
    t.spec.axis = axis;
    (axis == SweepAxis::N ? t.spec.k : t.spec.n) = fixed;
    t.spec.axis_values = std::move(values);
    t.spec.seed = derive_seed(c.seed, static_cast<std::uint64_t>(scheme) * 16 + out.size());
    t.target = target;
    t.tolerance = tol;
    out.push_back(std::move(t));
  };
  switch (scheme) {
    case SamplingScheme::RandomReshuffle:
      add("nk", SweepAxis::Joint, 8, {32, 64, 128, 256, 512}, -2.0, c.exact_tolerance);
      add("k<=n", SweepAxis::K, 256, {2, 4, 8, 16}, -3.0, c.reshuffle_small_k_tolerance);
      break;
    case SamplingScheme::SingleShuffle:
      add("k", SweepAxis::K, 16, {8, 16, 32, 64, 128, 256}, -2.0, c.exact_tolerance);
      add("n", SweepAxis::N, 256, {8, 16, 32, 64, 128}, -1.0, c.exact_tolerance);
      break;
    case SamplingScheme::Incremental:
      base.construction = ConstructionKind::CyclicSplit;
      add("k", SweepAxis::K, 16, {8, 16, 32, 64, 128, 256}, -2.0, c.exact_tolerance);
      add("n", SweepAxis::N, 32, {4, 8, 16, 32, 64}, 0.0, c.exact_tolerance);
      break;
    case SamplingScheme::WithReplacement:
      base.estimator = Estimator::MonteCarlo;
      base.trials = c.mc_trials;
      add("nk", SweepAxis::Joint, 8, {8, 16, 32, 64, 128}, -1.0, c.mc_tolerance);
      break;
  }
  return out;
}

bool RateRow::all_within() const {
  return std::all_of(entries.begin(), entries.end(), [](const RateEntry& e) { return e.within; });
}

std::vector<std::string> RateRow::deviations() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.within) continue;
    out.push_back(fmt::format("{} in {}: fitted {:.4f}, target {} +- {}", to_string(scheme),
                              e.axis_label, e.fit.exponent, e.target, e.tolerance));
  }
  return out;
}

std::vector<RateRow> reproduce_rate_table(const TableConfig& config) {
  std::vector<RateRow> rows;
  for (const auto scheme : config.schemes) {
    RateRow row;
    row.scheme = scheme;
    for (auto& t : default_rate_targets(scheme, config)) {
      RateEntry e;
      e.axis_label = t.axis_label;
      e.sweep = scaling_sweep(t.spec);
      e.fit = fit_rate(e.sweep, t.model);
      e.target = t.target;
      e.tolerance = t.tolerance;
      e.within = std::abs(e.fit.exponent - t.target) <= t.tolerance;
      row.entries.push_back(std::move(e));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double relative_spread(const SweepResult& sweep) {
  double lo = kInf, hi = 0.0;
  for (const auto& r : sweep.rows) {
    lo = std::min(lo, r.error_star);
    hi = std::max(hi, r.error_star);
  }
  return hi / lo - 1.0;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool header) {
  if (header) out << "scheme,problem,axis,axis_value,n,k,eta_star,error_star,diverged\n";
  for (const auto& r : sweep.rows) {
    out << to_string(sweep.scheme) << ',' << sweep.problem_label << ',' << to_string(sweep.axis)
        << ',' << csv_number(r.axis_value) << ',' << r.n << ',' << r.k << ','
        << csv_number(r.eta_star) << ',' << csv_number(r.error_star) << ','
        << (r.diverged ? 1 : 0) << '\n';
  }
}

void write_fit_csv(std::ostream& out, SamplingScheme scheme, std::string_view axis,
                   const RateFit& fit, bool header) {
  if (header) out << "scheme,axis,model,exponent,intercept,coef_a,coef_b,r_squared,points\n";
  out << to_string(scheme) << ',' << axis << ',' << to_string(fit.model) << ','
      << csv_number(fit.exponent) << ',' << csv_number(fit.intercept) << ','
      << csv_number(fit.coef_a) << ',' << csv_number(fit.coef_b) << ','
      << csv_number(fit.r_squared) << ',' << fit.points << '\n';
}

void write_bound_csv(std::ostream& out, const BoundReport& report, bool header) {
  if (header) out << "kind,scheme,n,k,eta,observed,bound,ratio\n";
  for (const auto& p : report.points) {
    out << (report.kind == BoundKind::Lower ? "lower" : "upper") << ','
        << to_string(report.scheme) << ',' << p.n << ',' << p.k << ',' << csv_number(p.eta)
        << ',' << csv_number(p.observed) << ',' << csv_number(p.bound) << ','
        << csv_number(p.ratio) << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<RateRow>& rows) {
  out << "scheme,axis,fitted,target,tolerance,within,r_squared\n";
  for (const auto& row : rows) {
    for (const auto& e : row.entries) {
      out << to_string(row.scheme) << ',' << e.axis_label << ',' << csv_number(e.fit.exponent)
          << ',' << csv_number(e.target) << ',' << csv_number(e.tolerance) << ','
          << (e.within ? 1 : 0) << ',' << csv_number(e.fit.r_squared) << '\n';
    }
  }
}

SweepResult sweep_from_csv(const CsvTable& t) {
  SweepResult s;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == 0) {
      s.scheme = parse_scheme(t.at(i, "scheme"));
      s.problem_label = t.at(i, "problem");
      s.axis = parse_axis(t.at(i, "axis"));
    }
    SweepRow r;
    r.axis_value = t.number(i, "axis_value");
    r.n = static_cast<int>(t.number(i, "n"));
    r.k = static_cast<int>(t.number(i, "k"));
    r.eta_star = t.number(i, "eta_star");
    r.error_star = t.number(i, "error_star");
    r.diverged = t.at(i, "diverged") == "1";
    s.rows.push_back(r);
  }
  return s;
}

std::vector<BoundReport> bounds_from_csv(const CsvTable& t) {
  std::vector<BoundReport> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto kind = t.at(i, "kind") == "upper" ? BoundKind::Upper : BoundKind::Lower;
    const auto scheme = parse_scheme(t.at(i, "scheme"));
    if (out.empty() || out.back().kind != kind || out.back().scheme != scheme) {
      BoundReport r;
      r.kind = kind;
      r.scheme = scheme;
      out.push_back(r);
    }
    BoundPoint p;
    p.n = static_cast<int>(t.number(i, "n"));
    p.k = static_cast<int>(t.number(i, "k"));
    p.eta = t.number(i, "eta");
    p.observed = t.number(i, "observed");
    p.bound = t.number(i, "bound");
    p.ratio = t.number(i, "ratio");
    out.back().points.push_back(p);
  }
  for (auto& r : out) finalize(r);
  return out;
}

}  // namespace permsgd
