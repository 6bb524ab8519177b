#include "permsgd/results.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace permsgd {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string resolve_output_dir(const std::string& flag, const std::string& config_dir) {
  if (!flag.empty()) return flag;
  if (!config_dir.empty()) return config_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "permsgd-out";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["config_digest"] = m.config_digest;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : m.files) {
    j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.command = j.value("command", "");
  m.config_digest = j.at("config_digest").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.timestamp = j.at("timestamp").get<std::string>();
  for (const auto& f : j.at("files")) {
    m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("bytes").get<std::uint64_t>()});
  }
  return m;
}

RunManifest write_results(const std::vector<OutputFile>& files, const std::string& directory,
                          RunManifest manifest) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", directory, ec.message()));

  std::string written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = fs::path(directory) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      throw std::runtime_error(fmt::format("failed writing '{}'{}", path.string(),
                                           written.empty() ? "" : "; partial output: " + written));
    }
    written += (written.empty() ? "" : ", ") + name;
  };
  manifest.files.clear();
  for (const auto& f : files) {
    put(f.name, f.content);
    manifest.files.push_back({f.name, sha256_hex(f.content), f.content.size()});
  }
  if (manifest.timestamp.empty()) manifest.timestamp = utc_timestamp();
  put(std::string(kManifestName), manifest_json(manifest));
  return manifest;
}

}  // namespace permsgd
