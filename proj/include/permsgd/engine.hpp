#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permsgd/problem.hpp"

namespace permsgd {

/// The four constant-step SGD variants.
enum class SamplingScheme {
  RandomReshuffle,  // fresh uniform permutation every epoch
  SingleShuffle,    // one uniform permutation reused for all epochs
  Incremental,      // canonical order 0..n-1 every epoch
  WithReplacement,  // independent uniform index every step
};

std::string_view to_string(SamplingScheme scheme) noexcept;
SamplingScheme parse_scheme(std::string_view name);

/// A concrete index sequence of n*k steps. Indices are 0-based.
struct Schedule {
  SamplingScheme scheme = SamplingScheme::Incremental;
  int n = 0;
  int k = 0;
  std::vector<int> indices;
  std::uint64_t seed = 0;

  std::span<const int> epoch(int t) const {
    return std::span<const int>(indices).subspan(static_cast<std::size_t>(t) * n,
                                                 static_cast<std::size_t>(n));
  }
};

/// Deterministic in (scheme, n, k, seed). Throws std::invalid_argument for
/// n < 2 or k < 1.
Schedule sample_schedule(SamplingScheme scheme, int n, int k, std::uint64_t seed);

/// Iterates beyond this magnitude (or non-finite) mark a run as diverged.
inline constexpr double kDivergenceThreshold = 1e150;

struct EpochTrajectory {
  double x0 = 0.0;
  double eta = 0.0;
  std::vector<double> epoch_iterates;  // x_1 .. x_k, truncated on divergence
  std::optional<int> diverged_epoch;   // 1-based epoch at which |x| blew up
  std::vector<double> steps;          // per-step trace, only when requested

  bool diverged() const noexcept { return diverged_epoch.has_value(); }
  double final_iterate() const { return epoch_iterates.back(); }
};

/// Full per-step traces are only kept for schedules up to this length.
inline constexpr std::size_t kMaxTraceSteps = 10'000;

/// Applies x <- x - eta (a_i x + b_i) in schedule order. Throws
/// std::invalid_argument for eta <= 0 or an index outside the problem.
EpochTrajectory run_schedule(const FiniteSumProblem& p, const Schedule& s,
                             double eta, double x0, bool keep_trace = false);

struct MomentEstimate {
  double mean_x = 0.0;
  double mean_x_sq = 0.0;
  double mean_subopt = 0.0;
  double stderr_x = 0.0;
  double stderr_x_sq = 0.0;
  double stderr_subopt = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
};

/// Monte Carlo estimate of the epoch-k moments. Trial t uses the schedule
/// sampled with derive_seed(seed, t); aggregation runs in trial order, so
/// the result is independent of `threads`. Incremental runs one trial.
MomentEstimate estimate_suboptimality(const FiniteSumProblem& p,
                                      SamplingScheme scheme, double eta, int k,
                                      std::int64_t trials, std::uint64_t seed,
                                      double x0, unsigned threads = 0);

inline MomentEstimate estimate_suboptimality(const FiniteSumProblem& p,
                                             SamplingScheme scheme, double eta,
                                             int k, std::int64_t trials,
                                             std::uint64_t seed) {
  return estimate_suboptimality(p, scheme, eta, k, trials, seed, p.recommended_x0());
}

struct ExactMoments {
  double mean_x = 0.0;
  double mean_x_sq = 0.0;
  double mean_subopt = 0.0;
  bool diverged = false;
};

/// Largest n for which permutation schemes are enumerated exhaustively.
inline constexpr int kMaxEnumeratedPermutationSize = 8;

/// Exact epoch-k moments by exhaustive enumeration of the scheme's sample
/// space. Each permutation's epoch map x -> A x + C is obtained by running
/// the engine; random reshuffling combines the per-epoch maps through the
/// independence of epochs, which is the same weighted sum as enumerating
/// all (n!)^k schedules. With-replacement sampling is factorized per step.
/// Throws std::invalid_argument for permutation schemes with n > 8.
ExactMoments exact_moments(const FiniteSumProblem& p, SamplingScheme scheme,
                           double eta, int k, double x0);

/// Calls visit(perm) for every permutation of 0..n-1 in lexicographic order.
template <class Visitor>
void for_each_permutation(int n, Visitor&& visit);

/// CSV header: scheme,n,k,eta,trial_or_exact,epoch,x,subopt
void write_trajectory_csv_header(std::ostream& out);
void write_trajectory_csv(std::ostream& out, const FiniteSumProblem& p,
                          SamplingScheme scheme, int k,
                          const EpochTrajectory& trajectory,
                          std::string_view trial_label);
void write_estimate_csv(std::ostream& out, const FiniteSumProblem& p,
                        SamplingScheme scheme, int k, double eta,
                        const MomentEstimate& estimate);

template <class Visitor>
void for_each_permutation(int n, Visitor&& visit) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(std::span<const int>(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace permsgd
