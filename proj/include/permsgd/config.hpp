#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "permsgd/engine.hpp"
#include "permsgd/experiments.hpp"

namespace permsgd {

/// A rejected configuration value; key() is "section.key".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Fully resolved run parameters. Config files use [section] headers with
/// `key = value` lines; '#' and ';' start comments.
struct RunConfig {
  // [problem]
  ConstructionKind construction = ConstructionKind::SignedLinear;
  OrderPattern order = OrderPattern::BlockHalves;
  int n = 16;
  int k = 32;
  double G = 6.0;
  double lambda = 1.0;
  double L = 1.0;
  std::optional<double> x0;
  std::optional<std::uint64_t> instance_seed;
  // [scheme]
  std::vector<SamplingScheme> schemes{SamplingScheme::RandomReshuffle};
  // [grid]
  SweepAxis axis = SweepAxis::K;
  std::vector<int> values{8, 16, 32, 64};
  std::optional<double> eta_min;
  std::optional<double> eta_max;
  int eta_count = 200;
  // [estimator]
  Estimator estimator = Estimator::Exact;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  // [output]
  std::string dir;  // empty: $PERMSGD_OUTPUT_DIR, then ./permsgd-out
};

/// Parses config text; unknown sections or keys are ConfigErrors.
RunConfig parse_config(std::string_view text);
/// Throws ConfigError with key "file" when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Range checks shared by files and flag overrides.
void validate(const RunConfig& config);

/// Sorted `section.key = value` lines of every resolved field.
std::string canonical_config(const RunConfig& config);
/// SHA-256 of canonical_config, hex.
std::string config_digest(const RunConfig& config);

/// Help text listing every key with its default.
std::string config_reference();

SweepSpec to_sweep_spec(const RunConfig& config, SamplingScheme scheme);

std::vector<SamplingScheme> parse_scheme_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

}  // namespace permsgd
