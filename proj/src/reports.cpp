#include "plurality/reports.hpp"

#include <algorithm>
#include <cmath>

#include "plurality/errors.hpp"
#include "plurality/format.hpp"

namespace plurality {

namespace {

struct KindRequirement {
  std::uint32_t k;
  bool noisy;
  bool exact;
};

KindRequirement requirement(BoundKind kind) {
  switch (kind) {
    case BoundKind::K2Exact: return {2, false, true};
    case BoundKind::K3Upper: return {3, false, false};
    case BoundKind::K4Upper: return {4, false, false};
    case BoundKind::K2NoisyLimit: return {2, true, false};
    case BoundKind::K3NoisyLimit: return {3, true, false};
    case BoundKind::K4NoisyLimit: return {4, true, false};
    default: break;
  }
  throw ParameterError(std::string(to_string(kind)) + " is not an ecdf bound");
}

void check_compatible(const SimulationConfig& cfg, BoundKind kind) {
  const auto req = requirement(kind);
  const std::string name = to_string(kind);
  if (cfg.k_counts.size() != 1 || cfg.k_counts.front().k != req.k) {
    throw ParameterError(name + " needs every election to have k = " + std::to_string(req.k));
  }
  if (req.noisy != (cfg.epsilon > 0.0)) {
    throw ParameterError(name + (req.noisy ? " needs epsilon > 0" : " needs epsilon = 0"));
  }
  if (cfg.perturbation > 0.0 || cfg.memory > 1 || cfg.top_h > 1) {
    throw ParameterError(name + " applies to the base model only");
  }
  if (!cfg.initial.atoms().empty()) throw ParameterError(name + " needs an atomless F_0");
  if (!(cfg.voters == VoterModel::uniform())) throw ParameterError(name + " needs uniform voters");
}

}  // namespace

double summary_ecdf_at(const GenerationSummary& s, std::span<const double> probes, double x) {
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i] == x) return s.probe_ecdf[i];
  }
  const double scaled = x * static_cast<double>(kEcdfGridSize);
  if (scaled >= 0.0 && scaled < static_cast<double>(kEcdfGridSize) && scaled == std::floor(scaled)) {
    return s.ecdf[static_cast<std::size_t>(scaled)];
  }
  throw ParameterError("x = " + format_double(x) + " is neither a probe nor a grid point");
}

std::vector<BoundRow> compare_bounds(std::span<const Trajectory> runs, BoundKind kind,
                                     std::span<const double> xs) {
  if (runs.empty()) throw ParameterError("no trajectories to compare");
  const SimulationConfig& cfg = runs.front().config;
  check_compatible(cfg, kind);
  const bool exact = requirement(kind).exact;

  std::vector<BoundRow> rows;
  const std::size_t gens = runs.front().records.size();
  for (std::size_t g = 0; g < gens; ++g) {
    for (double x : xs) {
      BoundRow row;
      row.t = runs.front().records[g].t;
      row.x = x;
      double n = 0.0;
      for (const auto& run : runs) {
        const auto& s = run.records.at(g).summary;
        row.empirical_ecdf_mean += summary_ecdf_at(s, run.config.probes, x);
        n += static_cast<double>(s.size);
      }
      row.empirical_ecdf_mean /= static_cast<double>(runs.size());

      BoundSpec spec;
      spec.kind = kind;
      spec.x = x;
      // The exact two-candidate sequence has reached its double-precision limit by t = 60.
      spec.t = kind == BoundKind::K2Exact ? std::min<std::uint32_t>(row.t, 60) : row.t;
      spec.epsilon = cfg.epsilon;
      spec.k = requirement(kind).k;
      spec.f0 = cfg.initial.base();
      row.bound_value = cdf_bound(spec);
      const double b = std::clamp(row.bound_value, 0.0, 1.0);
      row.standard_error = std::sqrt(b * (1.0 - b) / n);
      const double slack = kBoundSlackSe * row.standard_error;
      row.satisfied = exact ? std::abs(row.empirical_ecdf_mean - row.bound_value) <= slack
                            : row.empirical_ecdf_mean <= row.bound_value + slack;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bounds_csv(std::span<const BoundRow> rows) {
  std::string out = "t,x,empirical_ecdf_mean,bound_value,satisfied\n";
  for (const auto& r : rows) {
    out += std::to_string(r.t) + ',' + format_double(r.x) + ',' +
           format_double(r.empirical_ecdf_mean) + ',' + format_double(r.bound_value) + ',' +
           (r.satisfied ? "true" : "false") + '\n';
  }
  return out;
}

double mirrored_mode(std::span<const std::uint64_t> histogram) {
  if (histogram.empty()) throw ParameterError("empty histogram");
  const auto best = static_cast<std::size_t>(
      std::max_element(histogram.begin(), histogram.end()) - histogram.begin());
  const double center = (static_cast<double>(best) + 0.5) / static_cast<double>(histogram.size());
  return std::min(center, 1.0 - center);
}

HeatmapResult run_heatmap(const SimulationConfig& base, std::uint32_t steps) {
  if (steps == 0) throw ParameterError("heatmap steps must be positive");
  HeatmapResult result;
  std::uint64_t cell_index = 0;
  for (std::uint32_t i = 0; i <= steps; ++i) {
    for (std::uint32_t j = 0; j <= steps; ++j, ++cell_index) {
      const double f3 = static_cast<double>(i) / steps;
      const double f4 = static_cast<double>(j) / steps;
      if (i + j > steps) {
        result.skipped.push_back("fraction_k3=" + format_double(f3) + " fraction_k4=" +
                                 format_double(f4) + ": negative k=5 remainder");
        continue;
      }
      const double f5 = static_cast<double>(steps - i - j) / steps;
      SimulationConfig cfg = base;
      cfg.k_counts.clear();
      if (i > 0) cfg.k_counts.push_back({3, f3});
      if (j > 0) cfg.k_counts.push_back({4, f4});
      if (i + j < steps) cfg.k_counts.push_back({5, f5});
      cfg.master_seed = base.master_seed + cell_index;
      cfg.keep_pools = false;

      const auto runs = run_experiment(cfg);
      const auto agg = aggregate(runs);
      result.cells.push_back({f3, f4, f5, cfg.master_seed, mirrored_mode(agg.back().pooled_histogram)});
    }
  }
  return result;
}

std::string heatmap_csv(std::span<const HeatmapCell> cells) {
  std::string out = "fraction_k3,fraction_k4,fraction_k5,seed,mode\n";
  for (const auto& c : cells) {
    out += format_double(c.fraction_k3) + ',' + format_double(c.fraction_k4) + ',' +
           format_double(c.fraction_k5) + ',' + std::to_string(c.seed) + ',' +
           format_double(c.mode) + '\n';
  }
  return out;
}

}  // namespace plurality
