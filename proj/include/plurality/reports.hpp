#pragma once

// Derived tables: simulated ecdf against closed-form bounds (bounds.csv) and
// the mode of mixed-k runs over a grid of k proportions (heatmap.csv).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plurality/engine.hpp"
#include "plurality/theory.hpp"

namespace plurality {

// Bounds are judged with this many binomial standard errors of slack.
inline constexpr double kBoundSlackSe = 4.0;

struct BoundRow {
  std::uint32_t t = 0;
  double x = 0.0;
  double empirical_ecdf_mean = 0.0;
  double bound_value = 0.0;
  double standard_error = 0.0;  // sqrt(b (1 - b) / (n trials)) at the bound value b
  bool satisfied = false;       // exact kinds: two-sided; others: one-sided upper
};

// Exact pool ecdf at x: a configured probe, or a point of the 512 grid.
// Throws ParameterError when x is neither.
double summary_ecdf_at(const GenerationSummary& s, std::span<const double> probes, double x);

// Throws ParameterError when the kind is not an ecdf bound or does not match
// the runs' k, noise or initial distribution.
std::vector<BoundRow> compare_bounds(std::span<const Trajectory> runs, BoundKind kind,
                                     std::span<const double> xs);

// t,x,empirical_ecdf_mean,bound_value,satisfied
std::string bounds_csv(std::span<const BoundRow> rows);

struct HeatmapCell {
  double fraction_k3 = 0.0;
  double fraction_k4 = 0.0;
  double fraction_k5 = 0.0;
  std::uint64_t seed = 0;
  double mode = 0.0;  // mirrored to <= 1/2
};

struct HeatmapResult {
  std::vector<HeatmapCell> cells;
  std::vector<std::string> skipped;  // cells with a negative k = 5 remainder
};

// Center of the highest-count bin (lowest bin on ties), mirrored to <= 1/2.
double mirrored_mode(std::span<const std::uint64_t> histogram);

// Grid fractions i/steps and j/steps for k = 3 and k = 4; k = 5 takes the rest.
// Each cell runs base (k_counts replaced) with seed base.master_seed + cell index
// and reports the mode of the trial-pooled histogram at the last generation.
HeatmapResult run_heatmap(const SimulationConfig& base, std::uint32_t steps);

// fraction_k3,fraction_k4,fraction_k5,seed,mode
std::string heatmap_csv(std::span<const HeatmapCell> cells);

}  // namespace plurality
