// Command-line front end. Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plurality/config.hpp"
#include "plurality/engine.hpp"
#include "plurality/equilibria.hpp"
#include "plurality/errors.hpp"
#include "plurality/format.hpp"
#include "plurality/output.hpp"
#include "plurality/reports.hpp"
#include "plurality/theory.hpp"

using namespace plurality;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Config keys exposed as flags, e.g. top_h as --top-h.
constexpr const char* kValueKeys[] = {"k",       "k_counts",     "generations", "elections",
                                      "trials",  "initial",      "atoms",       "voters",
                                      "tie_break", "epsilon",    "perturbation", "memory",
                                      "top_h",   "seed",         "probes"};
constexpr const char* kBoolKeys[] = {"symmetry", "allow_combined", "keep_pools"};

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

// A config file plus per-key flag overrides; flags win.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value config file")->check(CLI::ExistingFile);
    for (const char* key : kValueKeys) {
      options[key] = app->add_option(flag_name(key), values[key], std::string("config key ") + key);
    }
    for (const char* key : kBoolKeys) {
      options[key] = app->add_flag(flag_name(key) + "{true}", values[key],
                                   std::string("config key ") + key + " (=false to disable)");
    }
  }

  SimulationConfig resolve(SimulationConfig base = {}) const {
    SimulationConfig cfg = file.empty() ? base : parse_config_file(file, base);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(cfg, key, values.at(key));
    }
    cfg.validate();
    return cfg;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(parse_double(item));
  return out;
}

std::vector<std::uint64_t> trial_keys(const SimulationConfig& cfg) {
  std::vector<std::uint64_t> keys;
  for (std::uint32_t r = 0; r < cfg.trials; ++r) {
    keys.push_back(RandomStream::trial_key(cfg.master_seed, r));
  }
  return keys;
}

void finish(OutputDirectory& out, RunManifest manifest) {
  manifest.finished_utc = utc_timestamp();
  manifest.files = out.files();
  // manifest.json is written last and is not listed in itself.
  OutputDirectory(out.path()).write("manifest.json", manifest_json(manifest));
  for (const auto& f : manifest.files) std::cout << f.sha256 << "  " << f.name << '\n';
}

RunManifest start_manifest(const std::string& command, const SimulationConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.config_text = format_config(cfg);
  m.master_seed = cfg.master_seed;
  m.trial_keys = trial_keys(cfg);
  m.started_utc = utc_timestamp();
  return m;
}

int cmd_run(const ConfigFlags& flags, const std::string& out_dir) {
  const SimulationConfig cfg = flags.resolve();
  auto manifest = start_manifest("run", cfg);
  OutputDirectory out(out_dir);
  const auto runs = run_experiment(cfg);
  write_run_outputs(out, cfg, runs);
  finish(out, std::move(manifest));
  return 0;
}

int cmd_bounds(const ConfigFlags& flags, const std::string& from, const std::string& kind_text,
               const std::string& xs_text, const std::string& out_dir) {
  const BoundKind kind = parse_bound_kind(kind_text);
  const auto xs = parse_list(xs_text);
  if (xs.empty()) throw ParameterError("--x needs at least one value");

  std::vector<Trajectory> runs;
  SimulationConfig cfg;
  OutputDirectory out(out_dir);
  RunManifest manifest;
  if (!from.empty()) {
    runs = load_run_summaries(from);
    cfg = runs.front().config;
    manifest = start_manifest("bounds", cfg);
    manifest.notes.push_back("trajectory read from " + from);
  } else {
    cfg = flags.resolve();
    for (double x : xs) {
      if (std::find(cfg.probes.begin(), cfg.probes.end(), x) == cfg.probes.end()) {
        cfg.probes.push_back(x);
      }
    }
    cfg.validate();
    manifest = start_manifest("bounds", cfg);
    runs = run_experiment(cfg);
    write_run_outputs(out, cfg, runs);
  }
  const auto rows = compare_bounds(runs, kind, xs);
  out.write("bounds.csv", bounds_csv(rows));
  manifest.notes.push_back(std::string("bound kind ") + to_string(kind));
  finish(out, std::move(manifest));
  return 0;
}

int cmd_heatmap(const ConfigFlags& flags, std::uint32_t steps, const std::string& out_dir) {
  SimulationConfig base;
  base.generations = 100;
  base.enhanced_symmetry = true;
  base = flags.resolve(base);
  auto manifest = start_manifest("heatmap", base);
  OutputDirectory out(out_dir);
  const auto result = run_heatmap(base, steps);
  out.write("heatmap.csv", heatmap_csv(result.cells));
  manifest.notes.push_back("grid steps " + std::to_string(steps) +
                           "; cell seed = master seed + row-major cell index");
  for (const auto& s : result.skipped) manifest.notes.push_back("skipped " + s);
  finish(out, std::move(manifest));
  return 0;
}

void print_payoff(const Payoff& p) {
  std::cout << "win_probability=" << format_double(p.win_probability) << " margins=[";
  for (std::size_t i = 0; i < p.expected_margins.size(); ++i) {
    std::cout << (i ? "," : "") << format_double(p.expected_margins[i]);
  }
  std::cout << "]";
}

void print_profile_verdict(const Profile& profile, std::uint32_t grid, double delta) {
  std::cout << "profile=";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::cout << (i ? "," : "") << format_double(profile.positions[i]);
  }
  std::cout << " rule=" << to_string(profile.rule);
  const auto result = is_psne(profile, grid, delta);
  std::cout << " psne=" << (result.is_psne ? "true" : "false") << '\n';
  if (result.witness) {
    const auto& w = *result.witness;
    std::cout << "  deviation candidate=" << w.candidate << " from=" << format_double(w.from)
              << " to=" << format_double(w.to) << "\n  before: ";
    print_payoff(w.before);
    std::cout << "\n  after:  ";
    print_payoff(w.after);
    std::cout << '\n';
  }
}

int cmd_nash(const std::string& positions, const std::string& rule_text,
             std::optional<std::uint32_t> catalog_k, std::optional<std::uint32_t> cox_k,
             std::optional<double> spike_x, std::uint32_t k, const std::string& family,
             std::uint32_t grid, double delta) {
  if (!positions.empty()) {
    print_profile_verdict({parse_list(positions), parse_tie_break(rule_text)}, grid, delta);
  }
  if (catalog_k) {
    for (const auto& p : small_k_psne_catalog(*catalog_k, parse_list(family))) {
      print_profile_verdict(p, grid, delta);
    }
  }
  if (cox_k) print_profile_verdict(cox_profile(*cox_k), grid, delta);
  if (spike_x) {
    const auto r = is_two_spike_smsne(*spike_x, k, grid, delta);
    std::cout << "two-spike x=" << format_double(*spike_x) << " k=" << k
              << " smsne=" << (r.is_smsne ? "true" : "false")
              << " best_deviation=" << format_double(r.best_deviation_position)
              << " win_probability=" << format_double(r.best_deviation_win_probability) << '\n';
  }
  return 0;
}

int cmd_maps(const std::string& name, std::uint32_t k, double epsilon, double x,
             std::optional<double> beta, std::optional<double> p0, std::size_t steps) {
  IteratedMap map = IteratedMap::large_k(5);
  if (name == "quadratic-noisy-k2") {
    map = IteratedMap::quadratic_noisy_k2(epsilon, x);
  } else if (name == "cubic-noisy-k3") {
    map = IteratedMap::cubic_noisy_k3(epsilon);
  } else if (name == "linear-noisy-k4") {
    map = IteratedMap::linear_noisy_k4(epsilon, x, beta ? *beta : k4_beta(x, epsilon, VoterModel::uniform()));
  } else if (name == "large-k") {
    map = IteratedMap::large_k(k);
  } else if (name == "center-mass") {
    map = IteratedMap::center_mass_threshold(k);
  } else if (name == "two-spike") {
    map = IteratedMap::two_spike_threshold(k);
  } else {
    throw ParameterError("unknown map '" + name + "'");
  }
  std::cout << "# " << map.name() << "\nvalue,derivative,stability\n";
  for (const auto& fp : fixed_points(map)) {
    std::cout << format_double(fp.value) << ',' << format_double(fp.derivative) << ','
              << to_string(fp.stability) << '\n';
  }
  if (p0) {
    std::cout << "step,value\n";
    const auto orbit = iterate_map(map, *p0, steps);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      std::cout << i << ',' << format_double(orbit[i]) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicator dynamics of candidate positioning under plurality voting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string out_dir;

  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "simulate and write ecdf.csv, hist.csv, summary.json");
  run_flags.attach(run);
  run->add_option("--out", out_dir, "output directory")->required();

  ConfigFlags bound_flags;
  std::string from, kind_text, xs_text;
  auto* bounds = app.add_subcommand("bounds", "compare simulated ecdf with a bound; writes bounds.csv");
  bound_flags.attach(bounds);
  bounds->add_option("--from", from, "existing run directory instead of simulating");
  bounds->add_option("--kind", kind_text, "k2-exact, k3-upper, k4-upper, k2|k3|k4-noisy-limit")
      ->required();
  bounds->add_option("--x", xs_text, "comma-separated evaluation points")->required();
  bounds->add_option("--out", out_dir, "output directory")->required();

  ConfigFlags heat_flags;
  std::uint32_t steps = 10;
  auto* heat = app.add_subcommand("heatmap", "mode of mixed k = 3, 4, 5 runs; writes heatmap.csv");
  heat_flags.attach(heat);
  heat->add_option("--steps", steps, "grid divisions per axis")->check(CLI::PositiveNumber);
  heat->add_option("--out", out_dir, "output directory")->required();

  std::string positions, rule_text = "left-right", family = "0.3,0.4";
  std::optional<std::uint32_t> catalog_k, cox_k;
  std::optional<double> spike_x;
  std::uint32_t nash_k = 4, grid = kDefaultPsneGrid;
  double delta = kDefaultPsneOffset;
  auto* nash = app.add_subcommand("nash-check", "equilibrium checks for the one-shot game");
  nash->add_option("--positions", positions, "comma-separated profile");
  nash->add_option("--rule", rule_text, "left-right or equal-split");
  nash->add_option("--catalog", catalog_k, "verify the small-k left-right catalog for this k");
  nash->add_option("--family-x", family, "x values for one-parameter catalog families");
  nash->add_option("--cox", cox_k, "verify the paired equal-split profile for this even k");
  nash->add_option("--two-spike", spike_x, "check the 50/50 mixture over x and 1 - x");
  nash->add_option("--k", nash_k, "candidates for --two-spike");
  nash->add_option("--grid", grid, "deviation grid resolution");
  nash->add_option("--delta", delta, "offset around occupied points");

  std::string map_name = "large-k";
  std::uint32_t map_k = 5;
  double map_eps = 0.0, map_x = 0.25;
  std::optional<double> map_beta, p0;
  std::size_t map_steps = 100;
  auto* maps = app.add_subcommand("maps", "fixed points and stability of the iterated maps");
  maps->add_option("--map", map_name,
                   "quadratic-noisy-k2, cubic-noisy-k3, linear-noisy-k4, large-k, center-mass, two-spike");
  maps->add_option("--k", map_k, "k for large-k, center-mass and two-spike");
  maps->add_option("--epsilon", map_eps, "noise level");
  maps->add_option("--x", map_x, "evaluation point");
  maps->add_option("--beta", map_beta, "override the computed beta for linear-noisy-k4");
  maps->add_option("--p0", p0, "also print the orbit from this start");
  maps->add_option("--steps", map_steps, "orbit length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags, out_dir);
    if (*bounds) return cmd_bounds(bound_flags, from, kind_text, xs_text, out_dir);
    if (*heat) return cmd_heatmap(heat_flags, steps, out_dir);
    if (*nash) {
      return cmd_nash(positions, rule_text, catalog_k, cox_k, spike_x, nash_k, family, grid, delta);
    }
    if (*maps) return cmd_maps(map_name, map_k, map_eps, map_x, map_beta, p0, map_steps);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
