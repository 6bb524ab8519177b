#include "permsgd/engine.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "permsgd/csv.hpp"
#include "permsgd/parallel.hpp"
#include "permsgd/rng.hpp"

namespace permsgd {

std::string_view to_string(SamplingScheme scheme) noexcept {
  switch (scheme) {
    case SamplingScheme::RandomReshuffle: return "reshuffle";
    case SamplingScheme::SingleShuffle: return "single";
    case SamplingScheme::Incremental: return "incremental";
    case SamplingScheme::WithReplacement: return "with_replacement";
  }
  return "unknown";
}

SamplingScheme parse_scheme(std::string_view name) {
  if (name == "reshuffle" || name == "random_reshuffle") return SamplingScheme::RandomReshuffle;
  if (name == "single" || name == "single_shuffle") return SamplingScheme::SingleShuffle;
  if (name == "incremental") return SamplingScheme::Incremental;
  if (name == "with_replacement" || name == "replacement") return SamplingScheme::WithReplacement;
  throw std::invalid_argument(fmt::format(
      "unknown scheme '{}' (expected reshuffle, single, incremental, with_replacement)", name));
}

namespace {

/// Produces the index blocks of one schedule, epoch by epoch.
class EpochSampler {
 public:
  EpochSampler(SamplingScheme scheme, int n, std::uint64_t seed)
      : scheme_(scheme), n_(n), rng_(seed), perm_(static_cast<std::size_t>(n)) {
    std::iota(perm_.begin(), perm_.end(), 0);
  }

  void next(std::span<int> block) {
    switch (scheme_) {
      case SamplingScheme::RandomReshuffle:
        std::iota(perm_.begin(), perm_.end(), 0);
        shuffle(perm_, rng_);
        break;
      case SamplingScheme::SingleShuffle:
        if (!drawn_) {
          shuffle(perm_, rng_);
          drawn_ = true;
        }
        break;
      case SamplingScheme::Incremental:
        break;
      case SamplingScheme::WithReplacement:
        for (auto& i : block) i = static_cast<int>(rng_.below(static_cast<std::uint32_t>(n_)));
        return;
    }
    std::copy(perm_.begin(), perm_.end(), block.begin());
  }

 private:
  SamplingScheme scheme_;
  int n_;
  CounterRng rng_;
  std::vector<int> perm_;
  bool drawn_ = false;
};

void check_sizes(int n, int k) {
  if (n < 2) throw std::invalid_argument(fmt::format("n must be > 1, got {}", n));
  if (k < 1) throw std::invalid_argument(fmt::format("k must be >= 1, got {}", k));
}

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument(fmt::format("step size must be positive, got {}", eta));
  }
}

bool blown_up(double x) noexcept {
  return !std::isfinite(x) || std::abs(x) > kDivergenceThreshold;
}

struct TrialResult {
  double x = 0.0;
  bool diverged = false;
};

TrialResult simulate(const FiniteSumProblem& p, SamplingScheme scheme, int k,
                     double eta, double x0, std::uint64_t seed) {
  const int n = static_cast<int>(p.size());
  const auto comps = p.components();
  EpochSampler sampler(scheme, n, seed);
  std::vector<int> block(static_cast<std::size_t>(n));
  double x = x0;
  for (int t = 0; t < k; ++t) {
    sampler.next(block);
    for (const int i : block) {
      const auto& c = comps[static_cast<std::size_t>(i)];
      x -= eta * (c.a * x + c.b);
    }
    if (blown_up(x)) return {x, true};
  }
  return {x, false};
}

double stderr_of(double sum, double sum_sq, std::int64_t count) {
  if (count < 2) return 0.0;
  const double c = static_cast<double>(count);
  const double mean = sum / c;
  const double var = std::max(0.0, (sum_sq - c * mean * mean) / (c - 1.0));
  return std::sqrt(var / c);
}

/// Affine map x -> A x + C.
struct AffineMap {
  double A = 1.0;
  double C = 0.0;
};

AffineMap epoch_map(const FiniteSumProblem& p, std::span<const int> order, double eta) {
  AffineMap m;
  for (const int i : order) {
    const auto& c = p.component(static_cast<std::size_t>(i));
    const double contraction = 1.0 - eta * c.a;
    m.A *= contraction;
    m.C = contraction * m.C - eta * c.b;
  }
  return m;
}

/// Moments of (A, C) over a uniform draw from a finite set of maps.
struct MapMoments {
  double A = 0.0, A2 = 0.0, AC = 0.0, C = 0.0, C2 = 0.0;

  void add(const AffineMap& m) {
    A += m.A;
    A2 += m.A * m.A;
    AC += m.A * m.C;
    C += m.C;
    C2 += m.C * m.C;
  }
  void scale(double w) {
    A *= w;
    A2 *= w;
    AC *= w;
    C *= w;
    C2 *= w;
  }
};

ExactMoments finish(const FiniteSumProblem& p, double m1, double m2) {
  ExactMoments out;
  out.mean_x = m1;
  out.mean_x_sq = m2;
  const double xs = p.x_star();
  out.mean_subopt = 0.5 * p.lambda() * (m2 - 2.0 * xs * m1 + xs * xs);
  out.diverged = !std::isfinite(m2) || m2 > kDivergenceThreshold * kDivergenceThreshold;
  return out;
}

ExactMoments iterate_moments(const FiniteSumProblem& p, const MapMoments& mm,
                             long repeats, double x0) {
  double m1 = x0;
  double m2 = x0 * x0;
  for (long r = 0; r < repeats; ++r) {
    const double next_m2 = mm.A2 * m2 + 2.0 * mm.AC * m1 + mm.C2;
    m1 = mm.A * m1 + mm.C;
    m2 = next_m2;
    if (!std::isfinite(m2)) break;
  }
  return finish(p, m1, m2);
}

}  // namespace

Schedule sample_schedule(SamplingScheme scheme, int n, int k, std::uint64_t seed) {
  check_sizes(n, k);
  Schedule s;
  s.scheme = scheme;
  s.n = n;
  s.k = k;
  s.seed = seed;
  s.indices.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  EpochSampler sampler(scheme, n, seed);
  for (int t = 0; t < k; ++t) {
    sampler.next(std::span<int>(s.indices).subspan(static_cast<std::size_t>(t) * n,
                                                   static_cast<std::size_t>(n)));
  }
  return s;
}

EpochTrajectory run_schedule(const FiniteSumProblem& p, const Schedule& s,
                             double eta, double x0, bool keep_trace) {
  check_eta(eta);
  if (s.n != static_cast<int>(p.size())) {
    throw std::invalid_argument(fmt::format("schedule is for n = {}, problem has n = {}",
                                            s.n, p.size()));
  }
  EpochTrajectory traj;
  traj.x0 = x0;
  traj.eta = eta;
  traj.epoch_iterates.reserve(static_cast<std::size_t>(s.k));
  keep_trace = keep_trace && s.indices.size() <= kMaxTraceSteps;
  const auto comps = p.components();
  double x = x0;
  for (int t = 0; t < s.k; ++t) {
    for (const int i : s.epoch(t)) {
      if (i < 0 || i >= s.n) {
        throw std::invalid_argument(fmt::format("schedule index {} out of range", i));
      }
      const auto& c = comps[static_cast<std::size_t>(i)];
      x -= eta * (c.a * x + c.b);
      if (keep_trace) traj.steps.push_back(x);
    }
    traj.epoch_iterates.push_back(x);
    if (blown_up(x)) {
      traj.diverged_epoch = t + 1;
      break;
    }
  }
  return traj;
}

MomentEstimate estimate_suboptimality(const FiniteSumProblem& p,
                                      SamplingScheme scheme, double eta, int k,
                                      std::int64_t trials, std::uint64_t seed,
                                      double x0, unsigned threads) {
  check_eta(eta);
  check_sizes(static_cast<int>(p.size()), k);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (scheme == SamplingScheme::Incremental) trials = 1;

  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  parallel_chunks(trials, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      results[static_cast<std::size_t>(t)] =
          simulate(p, scheme, k, eta, x0, derive_seed(seed, static_cast<std::uint64_t>(t)));
    }
  });

  MomentEstimate est;
  est.trials = trials;
  est.seed = seed;
  double sx = 0, sxx = 0, sx2 = 0, sx2x2 = 0, sf = 0, sff = 0;
  for (const auto& r : results) {
    if (r.diverged) {
      est.diverged = true;
      break;
    }
    const double x2 = r.x * r.x;
    const double f = p.suboptimality(r.x);
    sx += r.x;
    sxx += x2;
    sx2 += x2;
    sx2x2 += x2 * x2;
    sf += f;
    sff += f * f;
  }
  if (est.diverged) {
    const double inf = std::numeric_limits<double>::infinity();
    est.mean_x_sq = est.mean_subopt = inf;
    est.mean_x = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  const double c = static_cast<double>(trials);
  est.mean_x = sx / c;
  est.mean_x_sq = sx2 / c;
  est.mean_subopt = sf / c;
  est.stderr_x = stderr_of(sx, sxx, trials);
  est.stderr_x_sq = stderr_of(sx2, sx2x2, trials);
  est.stderr_subopt = stderr_of(sf, sff, trials);
  return est;
}

ExactMoments exact_moments(const FiniteSumProblem& p, SamplingScheme scheme,
                           double eta, int k, double x0) {
  check_eta(eta);
  const int n = static_cast<int>(p.size());
  check_sizes(n, k);
  switch (scheme) {
    case SamplingScheme::Incremental: {
      const auto traj = run_schedule(p, sample_schedule(scheme, n, k, 0), eta, x0);
      if (traj.diverged()) return finish(p, traj.final_iterate(),
                                         std::numeric_limits<double>::infinity());
      const double x = traj.final_iterate();
      return finish(p, x, x * x);
    }
    case SamplingScheme::WithReplacement: {
      MapMoments mm;
      for (int i = 0; i < n; ++i) {
        const int idx[1] = {i};
        mm.add(epoch_map(p, idx, eta));
      }
      mm.scale(1.0 / n);
      return iterate_moments(p, mm, static_cast<long>(n) * k, x0);
    }
    case SamplingScheme::RandomReshuffle:
    case SamplingScheme::SingleShuffle:
      break;
  }
  if (n > kMaxEnumeratedPermutationSize) {
    throw std::invalid_argument(fmt::format(
        "exhaustive enumeration supports n <= {}, got {}", kMaxEnumeratedPermutationSize, n));
  }
  double count = 0.0;
  if (scheme == SamplingScheme::RandomReshuffle) {
    MapMoments mm;
    for_each_permutation(n, [&](std::span<const int> perm) {
      mm.add(epoch_map(p, perm, eta));
      count += 1.0;
    });
    mm.scale(1.0 / count);
    return iterate_moments(p, mm, k, x0);
  }
  double m1 = 0.0;
  double m2 = 0.0;
  for_each_permutation(n, [&](std::span<const int> perm) {
    const AffineMap m = epoch_map(p, perm, eta);
    double x = x0;
    for (int t = 0; t < k; ++t) x = m.A * x + m.C;
    m1 += x;
    m2 += x * x;
    count += 1.0;
  });
  return finish(p, m1 / count, m2 / count);
}

void write_trajectory_csv_header(std::ostream& out) {
  out << "scheme,n,k,eta,trial_or_exact,epoch,x,subopt\n";
}

void write_trajectory_csv(std::ostream& out, const FiniteSumProblem& p,
                          SamplingScheme scheme, int k,
                          const EpochTrajectory& trajectory,
                          std::string_view trial_label) {
  for (std::size_t t = 0; t < trajectory.epoch_iterates.size(); ++t) {
    const double x = trajectory.epoch_iterates[t];
    out << to_string(scheme) << ',' << p.size() << ',' << k << ','
        << csv_number(trajectory.eta) << ',' << trial_label << ',' << (t + 1) << ','
        << csv_number(x) << ',' << csv_number(p.suboptimality(x)) << '\n';
  }
}

void write_estimate_csv(std::ostream& out, const FiniteSumProblem& p,
                        SamplingScheme scheme, int k, double eta,
                        const MomentEstimate& estimate) {
  out << to_string(scheme) << ',' << p.size() << ',' << k << ',' << csv_number(eta)
      << ",mc" << estimate.trials << ',' << k << ',' << csv_number(estimate.mean_x) << ','
      << csv_number(estimate.mean_subopt) << '\n';
}

}  // namespace permsgd
