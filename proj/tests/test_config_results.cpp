#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "permsgd/config.hpp"
#include "permsgd/results.hpp"

using namespace permsgd;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("permsgd_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const auto c = parse_config("[scheme]\nschemes = single\n");
  EXPECT_EQ(c.schemes, (std::vector<SamplingScheme>{SamplingScheme::SingleShuffle}));
  EXPECT_EQ(c.n, 16);
  EXPECT_EQ(c.G, 6.0);
  EXPECT_EQ(c.estimator, Estimator::Exact);
}

TEST(Config, FullFile) {
  const auto c = parse_config(R"(
# comment
[problem]
construction = cyclic_split
order = alternating
n = 8
k = 12
G = 4.5
lambda = 0.5
L = 2
x0 = -1
[scheme]
schemes = incremental, with_replacement
[grid]
axis = n
values = 4, 8, 16
eta_min = 1e-5
eta_max = 2
eta_count = 50
[estimator]
kind = monte_carlo
trials = 300
seed = 99
threads = 2
[output]
dir = /tmp/x
)");
  EXPECT_EQ(c.construction, ConstructionKind::CyclicSplit);
  EXPECT_EQ(c.order, OrderPattern::Alternating);
  EXPECT_EQ(c.k, 12);
  EXPECT_EQ(c.x0, -1.0);
  EXPECT_EQ(c.schemes.size(), 2u);
  EXPECT_EQ(c.axis, SweepAxis::N);
  EXPECT_EQ(c.values, (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(c.trials, 300);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.dir, "/tmp/x");
  const auto s = to_sweep_spec(c, SamplingScheme::Incremental);
  ASSERT_TRUE(s.eta_grid.has_value());
  EXPECT_EQ(s.eta_grid->count, 50);
  EXPECT_EQ(s.eta_grid->hi, 2.0);
}

TEST(Config, RejectionsNameTheKey) {
  auto key_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("accepted");
  };
  EXPECT_EQ(key_of("[problem]\nn = 3\n"), "problem.n");
  EXPECT_EQ(key_of("[problem]\nlambda = 0\n"), "problem.lambda");
  EXPECT_EQ(key_of("[problem]\nlambda = -2\n"), "problem.lambda");
  EXPECT_EQ(key_of("[grid]\nstep = 1\n"), "grid.step");
  EXPECT_EQ(key_of("[plots]\nx = 1\n"), "plots");
  EXPECT_EQ(key_of("[problem]\nn = eight\n"), "problem.n");
  EXPECT_EQ(key_of("[scheme]\nschemes = sorted\n"), "scheme.schemes");
  EXPECT_EQ(key_of("[problem\nn = 4\n"), "file");
  EXPECT_THROW(load_config("/nonexistent/permsgd.ini"), ConfigError);
}

TEST(Config, OddNMessageMentionsEven) {
  try {
    parse_config("[problem]\nn = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("even"), std::string::npos);
  }
}

TEST(Config, DigestIgnoresOrderAndFormatting) {
  const auto a = parse_config("[problem]\nn = 8\nG = 6\n[grid]\nvalues = 8,16\naxis = k\n");
  const auto b = parse_config("[grid]\naxis = k\nvalues = 8, 16\n[problem]\nG = 6.0\nn = 8\n");
  EXPECT_EQ(config_digest(a), config_digest(b));
  const auto c = parse_config("[problem]\nn = 10\n");
  EXPECT_NE(config_digest(a), config_digest(c));
  EXPECT_EQ(config_digest(a).size(), 64u);
}

TEST(Digest, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Results, WritesFilesThenManifest) {
  const auto dir = scratch("write");
  std::vector<OutputFile> files{{"sweep_single.csv", "a,b\n1,2\n"}, {"sweep_reshuffle.csv", "a,b\n3,4\n"}};
  RunManifest m;
  m.command = "sweep";
  m.config_digest = "d";
  m.seed = 5;
  const auto out = write_results(files, dir.string(), m);
  ASSERT_EQ(out.files.size(), 2u);
  EXPECT_EQ(slurp(dir / "sweep_single.csv"), "a,b\n1,2\n");
  EXPECT_EQ(out.files[0].sha256, sha256_hex("a,b\n1,2\n"));
  const auto back = manifest_from_json(slurp(dir / "manifest.json"));
  EXPECT_EQ(back.files.size(), 2u);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.tool_version, kToolVersion);
  EXPECT_EQ(back.files[1].name, "sweep_reshuffle.csv");
  // manifest is the newest file
  EXPECT_GE(fs::last_write_time(dir / "manifest.json"), fs::last_write_time(dir / "sweep_reshuffle.csv"));
}

TEST(Results, UnwritableDirectoryThrows) {
  const auto dir = scratch("blocked");
  { std::ofstream(dir.string()) << "file, not a directory"; }
  EXPECT_THROW(write_results({{"x.csv", "1\n"}}, (dir / "sub").string(), RunManifest{}), std::runtime_error);
  fs::remove(dir);
}

TEST(Results, OutputDirResolution) {
  EXPECT_EQ(resolve_output_dir("flag", "cfg"), "flag");
  EXPECT_EQ(resolve_output_dir("", "cfg"), "cfg");
  setenv(kOutputDirEnv, "/tmp/from_env", 1);
  EXPECT_EQ(resolve_output_dir("", ""), "/tmp/from_env");
  unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_dir("", ""), "permsgd-out");
}
