// permsgd: command-line front end for the shuffling-SGD laboratory.
//
//   permsgd verify-lemmas [--max-n N]
//   permsgd simulate --scheme S --n N --k K --eta E [--lambda --G --x0 ...]
//   permsgd sweep | fit | bounds | table [--config FILE] [--out DIR] [--dry-run]
//
// Exit codes: 0 ok, 1 failed verdict or I/O error, 2 usage error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "permsgd/analytic.hpp"
#include "permsgd/config.hpp"
#include "permsgd/csv.hpp"
#include "permsgd/engine.hpp"
#include "permsgd/experiments.hpp"
#include "permsgd/results.hpp"
#include "permsgd/rng.hpp"

using namespace permsgd;

namespace {

struct Common {
  std::string config_path;
  std::string out;
  bool dry_run = false;
  std::optional<std::uint64_t> seed;
};

struct Overrides {
  std::string schemes;
  std::optional<int> n, k;
  std::string axis, values, estimator, construction;
  std::optional<std::int64_t> trials;
  std::optional<double> G, lambda;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--scheme", o.schemes, "comma list of schemes");
  cmd->add_option("--n", o.n, "number of components");
  cmd->add_option("--k", o.k, "number of epochs");
  cmd->add_option("--axis", o.axis, "sweep axis: n, k or nk");
  cmd->add_option("--values", o.values, "comma list of axis values");
  cmd->add_option("--estimator", o.estimator, "exact or monte_carlo");
  cmd->add_option("--construction", o.construction, "signed_linear, half_curved, cyclic_split");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--G", o.G, "gradient bound");
  cmd->add_option("--lambda", o.lambda, "strong convexity");
}

RunConfig resolve(const Common& c, const Overrides* o) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (o) {
    auto keyed = [](const char* key, auto&& f) {
      try {
        f();
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
      }
    };
    if (!o->schemes.empty()) keyed("scheme.schemes", [&] { cfg.schemes = parse_scheme_list(o->schemes); });
    if (o->n) cfg.n = *o->n;
    if (o->k) cfg.k = *o->k;
    if (!o->axis.empty()) keyed("grid.axis", [&] { cfg.axis = parse_axis(o->axis); });
    if (!o->values.empty()) keyed("grid.values", [&] { cfg.values = parse_int_list(o->values); });
    if (!o->estimator.empty()) keyed("estimator.kind", [&] { cfg.estimator = parse_estimator(o->estimator); });
    if (!o->construction.empty()) {
      keyed("problem.construction", [&] { cfg.construction = parse_construction(o->construction); });
    }
    if (o->trials) cfg.trials = *o->trials;
    if (o->G) cfg.G = *o->G;
    if (o->lambda) cfg.lambda = *o->lambda;
  }
  validate(cfg);
  return cfg;
}

int echo_dry_run(const RunConfig& cfg) {
  std::cout << canonical_config(cfg) << "digest = " << config_digest(cfg) << "\n";
  return 0;
}

void finish(const std::vector<OutputFile>& files, const Common& c, const RunConfig& cfg,
            const std::string& command) {
  RunManifest m;
  m.command = command;
  m.config_digest = config_digest(cfg);
  m.seed = cfg.seed;
  const auto dir = resolve_output_dir(c.out, cfg.dir);
  write_results(files, dir, m);
  std::cout << fmt::format("wrote {} file(s) + {} to {}\n", files.size(), kManifestName, dir);
}

int run_verify_lemmas(const Common& c, int max_n) {
  auto cfg = resolve(c, nullptr);
  if (c.dry_run) return echo_dry_run(cfg);
  const auto results = run_lemma_suite(max_n, cfg.seed);
  std::ostringstream csv;
  write_lemma_csv_header(csv);
  int failed = 0;
  for (const auto& r : results) {
    write_lemma_csv(csv, r);
    if (!r.satisfied) {
      ++failed;
      std::cerr << "FAILED " << r.lemma_id << "\n";
    }
  }
  finish({{"lemmas.csv", csv.str()}}, c, cfg, "verify-lemmas");
  std::cout << fmt::format("{} checks, {} failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

struct SimulateArgs {
  std::string scheme = "incremental";
  std::string construction;
  std::string order = "block_halves";
  int n = 2;
  int k = 2;
  double eta = 0.1;
  double lambda = 1.0;
  double G = 2.0;
  std::optional<double> x0;
  std::int64_t trials = 1;
  bool write = false;
};

int run_simulate(const Common& c, const SimulateArgs& a) {
  const auto scheme = parse_scheme(a.scheme);
  const auto kind = !a.construction.empty() ? parse_construction(a.construction)
                    : scheme == SamplingScheme::Incremental ? ConstructionKind::CyclicSplit
                                                            : ConstructionKind::SignedLinear;
  const auto p = make_construction(kind, a.n, a.G, a.lambda, parse_order(a.order));
  for (const auto& w : construction_warnings(a.G, a.lambda)) std::cerr << "warning: " << w << "\n";
  const double x0 = a.x0.value_or(p.recommended_x0());
  const std::uint64_t seed = c.seed.value_or(0);
  if (c.dry_run) {
    std::cout << fmt::format("scheme={} construction={} n={} k={} eta={} x0={} seed={}\n",
                             to_string(scheme), to_string(kind), a.n, a.k, a.eta, x0, seed);
    return 0;
  }
  const auto s = sample_schedule(scheme, a.n, a.k, derive_seed(seed, 0));
  const auto traj = run_schedule(p, s, a.eta, x0);
  std::string line;
  for (std::size_t t = 0; t < traj.epoch_iterates.size(); ++t) {
    line += fmt::format("{}x{}={:.12g}", t ? " " : "", t + 1, traj.epoch_iterates[t]);
  }
  std::cout << line << "\n";
  if (traj.diverged()) std::cout << "diverged at epoch " << *traj.diverged_epoch << "\n";
  std::ostringstream csv;
  write_trajectory_csv_header(csv);
  write_trajectory_csv(csv, p, scheme, a.k, traj, "0");
  if (a.trials > 1) {
    const auto est = estimate_suboptimality(p, scheme, a.eta, a.k, a.trials, seed, x0);
    std::cout << fmt::format("E[x_k]={:.12g} E[x_k^2]={:.12g} E[F-F*]={:.12g} (+- {:.3g}, {} trials)\n",
                             est.mean_x, est.mean_x_sq, est.mean_subopt, est.stderr_subopt, est.trials);
    std::ostringstream ecsv;
    write_estimate_csv(ecsv, p, scheme, a.k, a.eta, est);
    csv << ecsv.str();
  }
  if (a.write || !c.out.empty()) {
    RunConfig cfg;
    cfg.seed = seed;
    finish({{"trajectory.csv", csv.str()}}, c, cfg, "simulate");
  }
  return 0;
}

std::vector<OutputFile> sweeps_for(const RunConfig& cfg, std::vector<SweepResult>& out) {
  std::vector<OutputFile> files;
  for (const auto scheme : cfg.schemes) {
    const auto r = scaling_sweep(to_sweep_spec(cfg, scheme));
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    files.push_back({fmt::format("sweep_{}.csv", to_string(scheme)), csv.str()});
    out.push_back(r);
  }
  return files;
}

int run_sweep(const Common& c, const Overrides& o) {
  const auto cfg = resolve(c, &o);
  if (c.dry_run) return echo_dry_run(cfg);
  std::vector<SweepResult> sweeps;
  auto files = sweeps_for(cfg, sweeps);
  for (const auto& s : sweeps) {
    for (const auto& r : s.rows) {
      std::cout << fmt::format("{} {}={:g} eta*={:.6g} error*={:.6g}{}\n", to_string(s.scheme),
                               to_string(s.axis), r.axis_value, r.eta_star, r.error_star,
                               r.diverged ? " (diverged)" : "");
    }
  }
  finish(files, c, cfg, "sweep");
  return 0;
}

int run_fit(const Common& c, const Overrides& o, const std::string& model_name,
            const std::string& input) {
  const auto model = parse_fit_model(model_name);
  const auto cfg = resolve(c, &o);
  if (c.dry_run) return echo_dry_run(cfg);
  std::vector<SweepResult> sweeps;
  std::vector<OutputFile> files;
  if (!input.empty()) {
    sweeps.push_back(sweep_from_csv(read_csv_file(input)));
  } else {
    files = sweeps_for(cfg, sweeps);
  }
  std::ostringstream csv;
  bool header = true;
  for (const auto& s : sweeps) {
    const auto f = fit_rate(s, model);
    write_fit_csv(csv, s.scheme, to_string(s.axis), f, header);
    header = false;
    std::cout << fmt::format("{} exponent in {} = {:.4f} (r^2 = {:.4f}, {} points)\n",
                             to_string(s.scheme), to_string(s.axis), f.exponent, f.r_squared, f.points);
  }
  files.push_back({"fit.csv", csv.str()});
  finish(files, c, cfg, "fit");
  return 0;
}

struct BoundsArgs {
  std::string kind = "lower";
  std::string scheme = "single";
  std::string ns = "8,16,32";
  std::string ks = "8,16,32";
  std::string which = "single";
  int n = 6;
  int k = 64;
  double lambda = 1.0;
  double L = 1.0;
  double G = 1.0;
  int seeds = 20;
  std::int64_t trials = 10000;
  std::string recheck;
};

int run_bounds(const Common& c, const BoundsArgs& a) {
  if (!a.recheck.empty()) {
    const auto reports = bounds_from_csv(read_csv_file(a.recheck));
    bool ok = !reports.empty();
    for (const auto& r : reports) {
      std::cout << fmt::format("{} {}: min ratio {:.6g}, max ratio {:.6g}, {}\n",
                               r.kind == BoundKind::Lower ? "lower" : "upper", to_string(r.scheme),
                               r.min_ratio, r.max_ratio, r.verdict ? "pass" : "FAIL");
      ok = ok && r.verdict;
    }
    return ok ? 0 : 1;
  }
  auto cfg = resolve(c, nullptr);
  if (c.dry_run) return echo_dry_run(cfg);
  std::vector<BoundReport> reports;
  if (a.kind == "lower") {
    reports.push_back(verify_lower_bound(parse_scheme(a.scheme), parse_int_list(a.ns),
                                         parse_int_list(a.ks), cfg.G, cfg.lambda));
  } else if (a.kind == "upper") {
    const auto th = parse_upper_variant(a.which);
    for (int s = 0; s < a.seeds; ++s) {
      reports.push_back(verify_upper_bound(th, a.n, a.k, a.lambda, a.L, a.G, a.trials,
                                           derive_seed(cfg.seed, static_cast<std::uint64_t>(s))));
    }
  } else {
    throw std::invalid_argument(fmt::format("--kind must be lower or upper, got '{}'", a.kind));
  }
  std::ostringstream csv;
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_bound_csv(csv, reports[i], i == 0);
    ok = ok && reports[i].verdict;
  }
  double lo = reports.front().min_ratio, hi = reports.front().max_ratio;
  for (const auto& r : reports) {
    lo = std::min(lo, r.min_ratio);
    hi = std::max(hi, r.max_ratio);
  }
  std::cout << fmt::format("{} bound: {} report(s), ratio range [{:.6g}, {:.6g}], {}\n", a.kind,
                           reports.size(), lo, hi, ok ? "pass" : "FAIL");
  finish({{fmt::format("bounds_{}.csv", a.kind), csv.str()}}, c, cfg, "bounds");
  return ok ? 0 : 1;
}

int run_table(const Common& c, const std::string& schemes) {
  const auto cfg = resolve(c, nullptr);
  if (c.dry_run) return echo_dry_run(cfg);
  TableConfig tc;
  tc.G = 6.0;
  tc.lambda = 1.0;
  tc.seed = cfg.seed;
  tc.threads = cfg.threads;
  if (!schemes.empty() || !c.config_path.empty()) {
    tc.schemes = schemes.empty() ? cfg.schemes : parse_scheme_list(schemes);
  }
  const auto rows = reproduce_rate_table(tc);
  std::ostringstream table;
  write_table_csv(table, rows);
  std::vector<OutputFile> files{{"table.csv", table.str()}};
  bool ok = true;
  for (const auto& row : rows) {
    std::string line = std::string(to_string(row.scheme)) + ":";
    std::ostringstream sweeps;
    bool header = true;
    for (const auto& e : row.entries) {
      line += fmt::format(" {} {:.3f} (target {})", e.axis_label, e.fit.exponent, e.target);
      write_sweep_csv(sweeps, e.sweep, header);
      header = false;
    }
    std::cout << line << "\n";
    for (const auto& d : row.deviations()) std::cout << "  deviation: " << d << "\n";
    ok = ok && row.all_within();
    files.push_back({fmt::format("table_sweeps_{}.csv", to_string(row.scheme)), sweeps.str()});
  }
  finish(files, c, cfg, "table");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-step SGD under shuffled, cyclic and with-replacement sampling."};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(config_reference());
  Common common;
  app.add_option("--config", common.config_path, "config file")->check(CLI::ExistingFile);
  app.add_option("--out", common.out, fmt::format("output directory (default ${} or ./permsgd-out)", kOutputDirEnv));
  app.add_flag("--dry-run", common.dry_run, "echo the resolved configuration and exit");
  app.add_option("--seed", common.seed, "base seed");

  int max_n = 16;
  auto* lemmas = app.add_subcommand("verify-lemmas", "run every analytic oracle comparison");
  lemmas->add_option("--max-n", max_n, "largest n used by the oracles")->check(CLI::Range(2, 64));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run the engine on explicit parameters");
  simulate->add_option("--scheme", sim.scheme, "reshuffle, single, incremental, with_replacement");
  simulate->add_option("--construction", sim.construction, "default: cyclic_split for incremental, else signed_linear");
  simulate->add_option("--order", sim.order, "block_halves or alternating");
  simulate->add_option("--n", sim.n);
  simulate->add_option("--k", sim.k);
  simulate->add_option("--eta", sim.eta);
  simulate->add_option("--lambda", sim.lambda);
  simulate->add_option("--G", sim.G);
  simulate->add_option("--x0", sim.x0);
  simulate->add_option("--trials", sim.trials, "also print a Monte Carlo estimate");
  simulate->add_flag("--write", sim.write, "write trajectory.csv");

  Overrides sweep_o;
  auto* sweep = app.add_subcommand("sweep", "min-over-step-size error along an axis");
  add_overrides(sweep, sweep_o);

  Overrides fit_o;
  std::string model = "pure-power";
  std::string input;
  auto* fit = app.add_subcommand("fit", "fit log-log rates to sweeps");
  add_overrides(fit, fit_o);
  fit->add_option("--model", model, "pure-power or two-term");
  fit->add_option("--input", input, "fit an existing sweep CSV")->check(CLI::ExistingFile);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "check lower or upper bound formulas");
  bounds->add_option("--kind", ba.kind, "lower or upper");
  bounds->add_option("--scheme", ba.scheme, "lower: reshuffle, single or incremental");
  bounds->add_option("--ns", ba.ns, "lower: comma list of n");
  bounds->add_option("--ks", ba.ks, "lower: comma list of k");
  bounds->add_option("--which", ba.which, "upper: single or reshuffle");
  bounds->add_option("--n", ba.n, "upper: components");
  bounds->add_option("--k", ba.k, "upper: epochs");
  bounds->add_option("--lambda", ba.lambda);
  bounds->add_option("--L", ba.L);
  bounds->add_option("--G", ba.G);
  bounds->add_option("--seeds", ba.seeds, "upper: random instances");
  bounds->add_option("--trials", ba.trials, "upper: Monte Carlo trials for n > 8");
  bounds->add_option("--recheck", ba.recheck, "recompute verdicts from a bounds CSV")->check(CLI::ExistingFile);

  std::string table_schemes;
  auto* table = app.add_subcommand("table", "fit every scheme's rate exponents");
  table->add_option("--scheme", table_schemes, "comma list (default: all four)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*lemmas) return run_verify_lemmas(common, max_n);
    if (*simulate) return run_simulate(common, sim);
    if (*sweep) return run_sweep(common, sweep_o);
    if (*fit) return run_fit(common, fit_o, model, input);
    if (*bounds) return run_bounds(common, ba);
    if (*table) return run_table(common, table_schemes);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
