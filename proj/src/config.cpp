#include "permsgd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "permsgd/csv.hpp"
#include "permsgd/results.hpp"

namespace permsgd {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::vector<std::string>, std::less<>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> keys{
      {"problem", {"construction", "order", "n", "k", "G", "lambda", "L", "x0", "instance_seed"}},
      {"scheme", {"schemes"}},
      {"grid", {"axis", "values", "eta_min", "eta_max", "eta_count"}},
      {"estimator", {"kind", "trials", "seed", "threads"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", t));
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    return parse_number(trim(text));
  } catch (const std::exception&) {
    throw ConfigError(std::string(key), fmt::format("expected a number, got '{}'", trim(text)));
  }
}

template <class F>
auto wrap(std::string_view key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key), e.what());
  }
}

}  // namespace

std::vector<SamplingScheme> parse_scheme_list(std::string_view text) {
  std::vector<SamplingScheme> out;
  for (const auto& item : split(text, ',')) {
    const auto name = trim(item);
    if (!name.empty()) out.push_back(parse_scheme(name));
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto v = trim(item);
    if (!v.empty()) out.push_back(parse_integer<int>("list", v));
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", fmt::format("parse error at line {}: {}", e.line(), e.message()));
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (body.empty()) throw ConfigError(section, "key outside any section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (std::find(known->second.begin(), known->second.end(), key) == known->second.end()) {
        throw ConfigError(full, "unknown key");
      }
      const std::string v = trim(node.data());
      if (section == "problem") {
        if (key == "construction") c.construction = wrap(full, [&] { return parse_construction(v); });
        else if (key == "order") c.order = wrap(full, [&] { return parse_order(v); });
        else if (key == "n") c.n = parse_integer<int>(full, v);
        else if (key == "k") c.k = parse_integer<int>(full, v);
        else if (key == "G") c.G = parse_real(full, v);
        else if (key == "lambda") c.lambda = parse_real(full, v);
        else if (key == "L") c.L = parse_real(full, v);
        else if (key == "x0") c.x0 = parse_real(full, v);
        else if (key == "instance_seed") c.instance_seed = parse_integer<std::uint64_t>(full, v);
      } else if (section == "scheme") {
        c.schemes = wrap(full, [&] { return parse_scheme_list(v); });
      } else if (section == "grid") {
        if (key == "axis") c.axis = wrap(full, [&] { return parse_axis(v); });
        else if (key == "values") c.values = wrap(full, [&] { return parse_int_list(v); });
        else if (key == "eta_min") c.eta_min = parse_real(full, v);
        else if (key == "eta_max") c.eta_max = parse_real(full, v);
        else if (key == "eta_count") c.eta_count = parse_integer<int>(full, v);
      } else if (section == "estimator") {
        if (key == "kind") c.estimator = wrap(full, [&] { return parse_estimator(v); });
        else if (key == "trials") c.trials = parse_integer<std::int64_t>(full, v);
        else if (key == "seed") c.seed = parse_integer<std::uint64_t>(full, v);
        else if (key == "threads") c.threads = parse_integer<unsigned>(full, v);
      } else if (section == "output") {
        c.dir = v;
      }
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file", fmt::format("cannot read config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  if (c.n < 2 || c.n % 2 != 0) {
    throw ConfigError("problem.n", fmt::format("n must be even and >= 2, got {}", c.n));
  }
  if (c.k < 1) throw ConfigError("problem.k", fmt::format("k must be >= 1, got {}", c.k));
  if (!(c.lambda > 0.0)) {
    throw ConfigError("problem.lambda", fmt::format("lambda must be positive, got {}", c.lambda));
  }
  if (!(c.G > 0.0)) throw ConfigError("problem.G", fmt::format("G must be positive, got {}", c.G));
  if (c.instance_seed && !(c.L >= c.lambda)) {
    throw ConfigError("problem.L", fmt::format("L must be >= lambda, got {}", c.L));
  }
  for (const int v : c.values) {
    if (v < 1) throw ConfigError("grid.values", fmt::format("values must be positive, got {}", v));
    if (c.axis == SweepAxis::N && v % 2 != 0) {
      throw ConfigError("grid.values", fmt::format("n must be even, got {}", v));
    }
  }
  if (c.eta_count < 1) throw ConfigError("grid.eta_count", "eta_count must be >= 1");
  if (c.eta_min && !(*c.eta_min > 0.0)) throw ConfigError("grid.eta_min", "eta_min must be positive");
  if (c.eta_max && c.eta_min && *c.eta_max < *c.eta_min) {
    throw ConfigError("grid.eta_max", "eta_max must be >= eta_min");
  }
  if (c.trials < 1) throw ConfigError("estimator.trials", "trials must be >= 1");
}

std::string canonical_config(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  auto opt = [](const auto& o) { return o ? csv_number(static_cast<double>(*o)) : std::string("unset"); };
  kv["problem.construction"] = to_string(c.construction);
  kv["problem.order"] = to_string(c.order);
  kv["problem.n"] = std::to_string(c.n);
  kv["problem.k"] = std::to_string(c.k);
  kv["problem.G"] = csv_number(c.G);
  kv["problem.lambda"] = csv_number(c.lambda);
  kv["problem.L"] = csv_number(c.L);
  kv["problem.x0"] = opt(c.x0);
  kv["problem.instance_seed"] = c.instance_seed ? std::to_string(*c.instance_seed) : "unset";
  std::string schemes;
  for (const auto s : c.schemes) schemes += (schemes.empty() ? "" : ",") + std::string(to_string(s));
  kv["scheme.schemes"] = schemes;
  kv["grid.axis"] = to_string(c.axis);
  std::string values;
  for (const int v : c.values) values += (values.empty() ? "" : ",") + std::to_string(v);
  kv["grid.values"] = values;
  kv["grid.eta_min"] = opt(c.eta_min);
  kv["grid.eta_max"] = opt(c.eta_max);
  kv["grid.eta_count"] = std::to_string(c.eta_count);
  kv["estimator.kind"] = to_string(c.estimator);
  kv["estimator.trials"] = std::to_string(c.trials);
  kv["estimator.seed"] = std::to_string(c.seed);
  // threads and the output directory do not change any emitted byte
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string config_digest(const RunConfig& c) { return sha256_hex(canonical_config(c)); }

std::string config_reference() {
  const RunConfig d;
  return fmt::format(
      "Config file: [section] headers, `key = value` lines, '#' or ';' comments.\n"
      "  [problem]   construction = {}  (signed_linear, half_curved, cyclic_split)\n"
      "              order = {}  (block_halves, alternating)\n"
      "              n = {}  k = {}  G = {}  lambda = {}  L = {}\n"
      "              x0 = <construction default>  instance_seed = <unset: use construction>\n"
      "  [scheme]    schemes = reshuffle  (comma list of reshuffle, single, incremental, with_replacement)\n"
      "  [grid]      axis = k  (n, k, nk)  values = 8,16,32,64\n"
      "              eta_min = 1e-6/(lambda n^2)  eta_max = 10/lambda  eta_count = {}\n"
      "  [estimator] kind = exact  (exact, monte_carlo)  trials = {}  seed = {}  threads = 0 (auto)\n"
      "  [output]    dir = ${} or ./permsgd-out\n",
      to_string(d.construction), to_string(d.order), d.n, d.k, d.G, d.lambda, d.L, d.eta_count,
      d.trials, d.seed, kOutputDirEnv);
}

SweepSpec to_sweep_spec(const RunConfig& c, SamplingScheme scheme) {
  SweepSpec s;
  s.scheme = scheme;
  s.construction = c.construction;
  s.order = c.order;
  s.instance_seed = c.instance_seed;
  s.axis = c.axis;
  s.axis_values = c.values;
  s.n = c.n;
  s.k = c.k;
  s.G = c.G;
  s.lambda = c.lambda;
  s.L = c.L;
  s.x0 = c.x0;
  s.estimator = c.estimator;
  s.trials = c.trials;
  s.seed = c.seed;
  s.threads = c.threads;
  if (c.eta_min || c.eta_max || c.eta_count != 200) {
    const auto base = EtaGrid::standard(c.lambda, c.axis == SweepAxis::N ? c.values.front() : c.n);
    s.eta_grid = EtaGrid{c.eta_min.value_or(base.lo), c.eta_max.value_or(base.hi), c.eta_count};
  }
  return s;
}

}  // namespace permsgd
