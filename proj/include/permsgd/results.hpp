#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace permsgd {

inline constexpr std::string_view kToolVersion = "0.3.1";
inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr const char* kOutputDirEnv = "PERMSGD_OUTPUT_DIR";

std::string sha256_hex(std::string_view data);

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string content;
};

struct ManifestEntry {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<ManifestEntry> files;
};

/// Flag value if set, else config value, else $PERMSGD_OUTPUT_DIR, else
/// "permsgd-out".
std::string resolve_output_dir(const std::string& flag, const std::string& config_dir);

/// Writes every file in order, then manifest.json. Throws
/// std::runtime_error on I/O failure, naming the files already written.
RunManifest write_results(const std::vector<OutputFile>& files, const std::string& directory,
                          RunManifest manifest);

std::string manifest_json(const RunManifest& manifest);
RunManifest manifest_from_json(std::string_view text);

std::string utc_timestamp();

}  // namespace permsgd
