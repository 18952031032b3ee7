#pragma once

// The generation loop: candidates copy positions from earlier winners, many
// independent elections run per generation, and their winners form the next pool.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "plurality/distributions.hpp"
#include "plurality/election.hpp"
#include "plurality/random.hpp"

namespace plurality {

struct KShare {
  std::uint32_t k;
  double proportion;
  bool operator==(const KShare&) const = default;
};

struct SimulationConfig {
  std::vector<KShare> k_counts{{2, 1.0}};
  std::uint32_t generations = 1;
  std::uint64_t elections = 100000;
  std::uint32_t trials = 1;
  InitialDistribution initial;
  VoterModel voters = VoterModel::uniform();
  TieBreakRule rule = TieBreakRule::LeftRight;
  bool enhanced_symmetry = false;
  double epsilon = 0.0;
  double perturbation = 0.0;  // variance
  std::uint32_t memory = 1;
  std::uint32_t top_h = 1;
  std::uint64_t master_seed = 1;
  bool allow_combined = false;
  bool keep_pools = false;
  // Extra points at which the exact pool ecdf is recorded every generation.
  std::vector<double> probes;

  // Throws ParameterError naming the offending field.
  void validate() const;

  std::uint32_t min_k() const;
  std::uint32_t max_k() const;
  // Elections per k entry (same order as k_counts sorted ascending by k),
  // by largest remainder; sums to elections.
  std::vector<std::uint64_t> allocation() const;
  // k for election j: contiguous blocks in ascending k.
  std::vector<std::uint32_t> k_per_block() const;

  bool operator==(const SimulationConfig&) const = default;
};

inline constexpr std::size_t kEcdfGridSize = 512;
inline constexpr std::size_t kHistogramBins = 200;
inline constexpr double kCenterLow = 0.45;
inline constexpr double kCenterHigh = 0.55;
inline constexpr double kCoreLow = 0.34;
inline constexpr double kCoreHigh = 0.66;

// Grid point i of the stored ecdf: i / kEcdfGridSize.
constexpr double ecdf_grid_x(std::size_t i) noexcept {
  return static_cast<double>(i) / static_cast<double>(kEcdfGridSize);
}

struct GenerationSummary {
  std::uint32_t t = 0;
  std::uint64_t size = 0;
  std::vector<double> ecdf;              // kEcdfGridSize values
  std::vector<std::uint64_t> histogram;  // kHistogramBins counts
  std::vector<double> probe_ecdf;        // one per config probe
  double center_mass = 0.0;              // fraction in (kCenterLow, kCenterHigh)
  double core_mass = 0.0;                // fraction in [kCoreLow, kCoreHigh]
  std::vector<double> modes;

  bool operator==(const GenerationSummary&) const = default;
};

GenerationSummary summarize(std::span<const double> pool, std::uint32_t t,
                            std::span<const double> probes);

struct GenerationRecord {
  std::uint32_t t = 0;
  WinnerPool winner_pool;
  // Rank pools (rank 0 = winners) when top-h copying is active.
  std::vector<WinnerPool> rank_pools;
  GenerationSummary summary;
};

struct Trajectory {
  std::uint32_t trial = 0;
  SimulationConfig config;
  // generations + 1 entries; pools are released unless config.keep_pools.
  std::vector<GenerationRecord> records;
};

// Copy sources for one generation, most recent first. A record with t = 0
// stands for F_0 itself, which is sampled analytically.
struct CopySources {
  std::vector<const GenerationRecord*> records;
  const InitialDistribution* initial = nullptr;
};

// One candidate position. Draw order on rand: noise coin (and its uniform),
// source generation (if more than one), rank (if h > 1), pool index or F_0
// draw, mirror coin (if enhanced symmetry), normal (if perturbation).
double draw_candidate(const CopySources& sources, const SimulationConfig& cfg,
                      RandomStream& rand);

// Elections of generation t, each with its own stream (trial_key, t, j).
// OpenMP-parallel over elections.
GenerationRecord run_generation(const CopySources& sources, const SimulationConfig& cfg,
                                std::uint32_t t, std::uint64_t trial_key);

// Serial reference built on the public election API; bit-identical to run_generation.
GenerationRecord run_generation_serial(const CopySources& sources, const SimulationConfig& cfg,
                                       std::uint32_t t, std::uint64_t trial_key);

// The t = 0 record: n draws from F_0.
GenerationRecord initial_record(const SimulationConfig& cfg, std::uint64_t trial_key);

// Sees each record while its pools are still alive.
using RecordObserver = std::function<void(const GenerationRecord&)>;

Trajectory run_trial(const SimulationConfig& cfg, std::uint32_t trial,
                     const RecordObserver& observer = {});

std::vector<Trajectory> run_experiment(const SimulationConfig& cfg,
                                       const RecordObserver& observer = {});

struct AggregateSummary {
  std::uint32_t t = 0;
  std::uint32_t trials = 0;
  std::vector<double> mean_ecdf;
  std::vector<double> mean_probe_ecdf;
  std::vector<std::uint64_t> pooled_histogram;
  double mean_center_mass = 0.0;
  double mean_core_mass = 0.0;
  std::vector<double> modes;  // of the pooled histogram
};

std::vector<AggregateSummary> aggregate(std::span<const Trajectory> trajectories);

}  // namespace plurality
