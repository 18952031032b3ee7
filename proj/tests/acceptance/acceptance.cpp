// Acceptance suite: one PASS/FAIL line per criterion. Monte Carlo checks use
// 100,000 elections per generation and fixed seeds. An optional argument runs
// only the criteria whose name contains it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "plurality/election.hpp"
#include "plurality/engine.hpp"
#include "plurality/equilibria.hpp"
#include "plurality/output.hpp"
#include "plurality/random.hpp"
#include "plurality/reports.hpp"
#include "plurality/theory.hpp"

using namespace plurality;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kElections = 100000;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

SimulationConfig theory_config(std::uint32_t k, std::uint32_t generations) {
  SimulationConfig cfg;
  cfg.k_counts = {{k, 1.0}};
  cfg.generations = generations;
  cfg.elections = kElections;
  cfg.enhanced_symmetry = true;
  cfg.master_seed = kSeed;
  return cfg;
}

double binomial_se(double p, double n) {
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / n);
}

Outcome k2_exactness() {
  auto cfg = theory_config(2, 6);
  cfg.probes = {0.1, 0.25, 0.4};
  const auto runs = run_experiment(cfg);
  double worst = 0.0;
  bool ok = true;
  for (const auto& row : compare_bounds(runs, BoundKind::K2Exact, cfg.probes)) {
    if (row.t == 0) continue;
    const double z = row.standard_error > 0.0
                         ? std::abs(row.empirical_ecdf_mean - row.bound_value) / row.standard_error
                         : (row.empirical_ecdf_mean == row.bound_value ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    ok = ok && z < kBoundSlackSe;
  }
  return {ok, "max |ecdf - formula| / SE = " + fmt("%.2f", worst) + " over x in {0.1,0.25,0.4}, t=1..6"};
}

Outcome k3_k4_bounds() {
  bool ok = true;
  std::string detail;
  const struct {
    std::uint32_t k;
    BoundKind kind;
    std::vector<double> xs;
  } cases[] = {{3, BoundKind::K3Upper, {0.25, 0.35, 0.45}},
               {4, BoundKind::K4Upper, {0.35, 0.40, 0.45}}};
  for (const auto& c : cases) {
    auto cfg = theory_config(c.k, 50);
    cfg.probes = c.xs;
    double worst = -INFINITY;
    for (const auto& row : compare_bounds(run_experiment(cfg), c.kind, c.xs)) {
      ok = ok && row.satisfied;
      const double se = std::max(row.standard_error, 1e-300);
      worst = std::max(worst, (row.empirical_ecdf_mean - row.bound_value) / se);
    }
    detail += "k=" + std::to_string(c.k) + " max (ecdf - bound)/SE = " + fmt("%.2f", worst) + "; ";
  }
  return {ok, detail + "t=0..50"};
}

Outcome k5_nonconvergence() {
  auto cfg = theory_config(5, 200);
  cfg.trials = 10;
  cfg.probes = {0.45};
  const auto runs = run_experiment(cfg);
  double lowest = 1.0;
  for (const auto& run : runs) lowest = std::min(lowest, run.records.back().summary.probe_ecdf[0]);
  const auto modes = aggregate(runs).back().modes;
  const bool two = modes.size() == 2 && std::abs(modes[0] - 0.25) <= 0.08 &&
                   std::abs(modes[1] - 0.75) <= 0.08;
  std::string m;
  for (double x : modes) m += fmt("%.4f ", x);
  return {lowest >= 0.40 && two,
          "min over 10 trials of ecdf(0.45) at t=200 = " + fmt("%.4f", lowest) +
              "; pooled modes = " + m};
}

Outcome noisy_limits() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.02, 0.05}) {
    for (std::uint32_t k : {2u, 3u, 4u}) {
      auto cfg = theory_config(k, 300);
      cfg.trials = 10;
      cfg.epsilon = eps;
      cfg.probes = k == 2 ? std::vector<double>{0.1, 0.25, 0.4}
                   : k == 3 ? std::vector<double>{0.25, 0.4, 0.45}
                            : std::vector<double>{0.4};
      const auto runs = run_experiment(cfg);
      for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
        const double x = cfg.probes[i];
        double mean = 0.0;
        double samples = 0.0;
        for (const auto& run : runs) {
          for (std::uint32_t t = 251; t <= 300; ++t) {
            mean += run.records[t].summary.probe_ecdf[i];
            samples += 1.0;
          }
        }
        mean /= samples;
        BoundSpec spec;
        spec.x = x;
        spec.epsilon = eps;
        spec.kind = k == 2 ? BoundKind::K2NoisyLimit
                    : k == 3 ? BoundKind::K3NoisyLimit
                             : BoundKind::K4NoisyLimit;
        const double b = cdf_bound(spec);
        const double se = binomial_se(b, samples * static_cast<double>(kElections));
        const bool pass = k == 2 ? std::abs(mean - b) <= kBoundSlackSe * se
                                 : mean <= b + kBoundSlackSe * se;
        ok = ok && pass;
        if (!pass || k == 2) {
          detail += "k=" + std::to_string(k) + " eps=" + fmt("%.2f", eps) + " x=" + fmt("%.2f", x) +
                    ": " + fmt("%.3e", mean) + " vs " + fmt("%.3e", b) + " (" +
                    fmt("%+.2f", se > 0 ? (mean - b) / se : 0.0) + " SE); ";
        }
      }
    }
  }
  return {ok, detail};
}

Outcome noisy_k5() {
  auto cfg = theory_config(5, 200);
  cfg.epsilon = 0.01;
  cfg.probes = {0.45};
  const double v = run_trial(cfg, 0).records.back().summary.probe_ecdf[0];
  return {v >= 0.35, "ecdf(0.45) at t=200 = " + fmt("%.4f", v)};
}

// Count in [0.495, 0.505): the two 200-bin histogram bins adjacent to 1/2.
double center_window(const std::vector<std::uint64_t>& h) {
  return static_cast<double>(h[kHistogramBins / 2 - 1] + h[kHistogramBins / 2]);
}

Outcome density_law() {
  bool ok = true;
  std::string detail;
  for (std::uint32_t k : {3u, 4u, 5u}) {
    auto cfg = theory_config(k, 30);
    cfg.trials = 10;
    cfg.initial = InitialDistribution(VoterModel::uniform_interval(0.25, 0.75));
    const auto agg = aggregate(run_experiment(cfg));
    const double ratio = density_ratio(k);
    const double width = 2.0 / static_cast<double>(kHistogramBins);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t t = 1; t < agg.size(); ++t) {
      const double prev = center_window(agg[t - 1].pooled_histogram);
      const double cur = center_window(agg[t].pooled_histogram);
      // A window cannot hold more than all the mass; stop once the law predicts it would.
      const double predicted_mass = 2.0 * std::pow(ratio, static_cast<double>(t)) * width;
      if (prev <= 500.0 * cfg.trials || cur <= 500.0 * cfg.trials || predicted_mass > 1.0) break;
      worst = std::max(worst, std::abs(cur / prev / ratio - 1.0));
      ++checked;
    }
    ok = ok && checked > 0 && worst <= 0.15;
    detail += "k=" + std::to_string(k) + " ratio err " + fmt("%.3f", worst) + " over " +
              std::to_string(checked) + " gens; ";
    if (k == 4) {
      const double c0 = center_window(agg[0].pooled_histogram);
      double drift = 0.0;
      for (std::size_t t = 1; t <= 30; ++t) {
        drift = std::max(drift, std::abs(center_window(agg[t].pooled_histogram) / c0 - 1.0));
      }
      ok = ok && drift <= 0.20;
      detail += "k=4 max drift " + fmt("%.3f", drift) + " over 30 gens; ";
    }
  }
  return {ok, detail + "10-trial means"};
}

Outcome mass_evacuation() {
  auto cfg = theory_config(5, 200);
  cfg.initial = InitialDistribution(VoterModel::uniform_interval(0.25, 0.75));
  const double core = run_trial(cfg, 0).records.back().summary.core_mass;
  return {core < 0.01, "mass in [0.34,0.66] at t=200 = " + fmt("%.5f", core)};
}

Outcome flanking() {
  RandomStream rand(kSeed, 0, 0);
  const VoterModel voters = VoterModel::uniform();
  std::size_t violations = 0;
  for (std::size_t i = 0; i < 100000; ++i) {
    const std::size_t k = 2 + i % 9;
    std::vector<double> xs(k);
    for (double& x : xs) x = 0.25 + 0.5 * rand.uniform();
    const Slate slate(xs);
    const auto w = plurality_winner(slate, voters, TieBreakRule::LeftRight, rand);
    if (w.position != slate[0] && w.position != slate[k - 1]) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " interior winners in 100000 slates, k=2..10"};
}

Outcome map_oracle() {
  const double ell = limited_support_threshold();
  const double want[] = {0.0, ell, 0.5, 1.0 - ell, 1.0};
  const auto map = IteratedMap::large_k(5);
  const auto fps = fixed_points(map);
  bool ok = fps.size() == 5;
  double err = 0.0;
  for (std::size_t i = 0; ok && i < 5; ++i) err = std::max(err, std::abs(fps[i].value - want[i]));
  ok = ok && err <= 1e-8 && fps[1].stability == Stability::Unstable &&
       fps[2].stability == Stability::Stable;

  const auto orbit = iterate_map(map, 0.3, 500);
  std::size_t hit = orbit.size();
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (std::abs(orbit[i] - 0.5) < 1e-9) {
      hit = i;
      break;
    }
  }
  ok = ok && hit <= 500;

  const double limit = iterate_map(IteratedMap::quadratic_noisy_k2(0.1, 0.25), 0.25, 1000).back();
  const double closed = quadratic_noisy_k2_roots(0.1, 0.25).lower;
  ok = ok && std::abs(limit - closed) <= 1e-9;
  return {ok, "fixed-point err " + fmt("%.1e", err) + ", orbit from 0.3 within 1e-9 at step " +
                  std::to_string(hit) + ", noisy k=2 orbit vs closed form " +
                  fmt("%.1e", std::abs(limit - closed))};
}

Outcome equilibrium_catalog() {
  std::vector<Profile> truths;
  for (std::uint32_t k = 2; k <= 5; ++k) {
    for (auto& p : small_k_psne_catalog(k, {0.3, 0.4})) truths.push_back(std::move(p));
  }
  truths.push_back(cox_profile(4));
  truths.push_back(cox_profile(6));

  std::size_t bad = 0;
  std::size_t perturbed = 0;
  RandomStream rand(kSeed, 0, 1);
  for (const auto& p : truths) {
    if (!is_psne(p).is_psne) ++bad;
    for (int s = 0; s < 20; ++s) {
      Profile q = p;
      const auto i = static_cast<std::size_t>(rand.uniform_index(q.size()));
      const double step = rand.uniform() < 0.5 ? -0.05 : 0.05;
      q.positions[i] = std::clamp(q.positions[i] + step, 0.0, 1.0);
      if (q.positions[i] == p.positions[i]) q.positions[i] -= step;
      ++perturbed;
      if (is_psne(q).is_psne) ++bad;
    }
  }
  for (std::size_t k : {3u, 4u, 5u}) {
    const auto r = is_psne({std::vector<double>(k, 0.5), TieBreakRule::EqualSplit});
    if (r.is_psne || !r.witness || std::abs(r.witness->to - 0.5) > 2e-6) ++bad;
  }
  return {bad == 0, std::to_string(truths.size()) + " equilibria, " + std::to_string(perturbed) +
                        " perturbations, 3 equal-split all-center profiles; " +
                        std::to_string(bad) + " wrong verdicts"};
}

Outcome atom_thresholds() {
  AtomRunOptions opts;
  opts.seed = kSeed;
  opts.generations = 100;
  const auto high = atom_seeded_convergence(AtomKind::CenterMass, 3, 0.9, std::nullopt, opts);
  const auto low = atom_seeded_convergence(AtomKind::CenterMass, 3, 0.3, std::nullopt, opts);
  opts.generations = 200;
  const auto spike = atom_seeded_convergence(AtomKind::TwoSpike, 5, 0.45, 0.3, opts);
  const double h = *std::max_element(high.begin(), high.end());
  const double l = *std::max_element(low.begin(), low.end());
  const double s = *std::max_element(spike.begin(), spike.end());
  return {h > 0.999 && l < 0.999 && s > 0.999,
          "max atom mass: center p=0.9 " + fmt("%.5f", h) + ", center p=0.3 " + fmt("%.5f", l) +
              ", two-spike p=0.45 " + fmt("%.5f", s)};
}

Outcome variant_sanity() {
  bool ok = true;
  std::string detail;
  const auto run_center = [](SimulationConfig cfg) {
    cfg.generations = 200;
    cfg.elections = kElections;
    cfg.master_seed = kSeed;
    std::vector<double> mass;
    for (const auto& r : run_trial(cfg, 0).records) mass.push_back(r.summary.center_mass);
    return mass;
  };
  for (std::uint32_t k : {2u, 3u, 4u}) {
    SimulationConfig mem;
    mem.k_counts = {{k, 1.0}};
    mem.memory = 2;
    SimulationConfig pert;
    pert.k_counts = {{k, 1.0}};
    pert.perturbation = 0.005;
    const double a = run_center(mem).back();
    const double b = run_center(pert).back();
    ok = ok && a > 0.9 && b > 0.9;
    detail += "k=" + std::to_string(k) + " memory " + fmt("%.3f", a) + " perturb " + fmt("%.3f", b) + "; ";
  }
  SimulationConfig mixed;
  mixed.k_counts = {{3, 0.5}, {4, 0.5}};
  const double c = run_center(mixed).back();
  ok = ok && c > 0.9;
  SimulationConfig top;
  top.k_counts = {{3, 1.0}};
  top.top_h = 2;
  const auto traj = run_center(top);
  const double peak = *std::max_element(traj.begin(), traj.end());
  ok = ok && peak < 0.5;
  return {ok, detail + "mixed {3,4} " + fmt("%.3f", c) + "; top-2 k=3 max over t " +
                  fmt("%.3f", peak) + " (center mass in (0.45,0.55) at t=200)"};
}

std::string file_digest(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "plurality_acceptance_determinism";
  fs::remove_all(root);
  const std::string cli = PLURALITY_CLI_PATH;
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"run --k 5 --epsilon 0.01 --generations 20 --elections 20000 --trials 2 --symmetry "
       "--probes 0.3,0.45 --seed 99",
       {"ecdf.csv", "hist.csv", "probes.csv", "summary.json"}},
      {"bounds --k 3 --generations 10 --elections 20000 --kind k3-upper --x 0.25,0.35 --seed 5",
       {"ecdf.csv", "hist.csv", "probes.csv", "bounds.csv"}},
      {"heatmap --steps 2 --generations 5 --elections 5000 --seed 3", {"heatmap.csv"}},
  };
  std::size_t compared = 0;
  bool ok = true;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      dirs.push_back(root / (std::to_string(c) + "_" + std::to_string(rep)));
      const std::string cmd =
          cli + " " + commands[c].first + " --out " + dirs.back().string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    }
    for (const auto& name : commands[c].second) {
      ok = ok && file_digest(dirs[0] / name) == file_digest(dirs[1] / name);
      ++compared;
    }
  }
  // The library path is also independent of the OpenMP thread count.
  auto cfg = theory_config(4, 5);
  cfg.elections = 20000;
  cfg.perturbation = 0.001;
  cfg.probes = {0.4};
  const int saved = omp_get_max_threads();
  const int threads = std::max(saved, 4);
  omp_set_num_threads(threads);
  const auto many = run_experiment(cfg);
  omp_set_num_threads(1);
  const auto one = run_experiment(cfg);
  omp_set_num_threads(saved);
  ok = ok && ecdf_csv(many) == ecdf_csv(one) && hist_csv(many) == hist_csv(one);
  return {ok, std::to_string(compared) + " CSV/JSON digests identical across reruns of run, "
                                         "bounds and heatmap; 1-thread vs " +
                  std::to_string(threads) + "-thread output identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"k2_exactness", k2_exactness},
      {"k3_k4_bound_dominance", k3_k4_bounds},
      {"k5_nonconvergence", k5_nonconvergence},
      {"noisy_limits", noisy_limits},
      {"noisy_k5_nonconvergence", noisy_k5},
      {"limited_support_density_law", density_law},
      {"limited_support_mass_evacuation", mass_evacuation},
      {"flanking_property", flanking},
      {"map_fixed_point_oracle", map_oracle},
      {"equilibrium_catalog", equilibrium_catalog},
      {"atom_thresholds", atom_thresholds},
      {"variant_sanity", variant_sanity},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    if (!filter.empty() && std::string(name).find(filter) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
