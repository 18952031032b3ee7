#pragma once

// Serialized run artifacts. Every float is written with 17 significant digits.
//
//   ecdf.csv      trial,t,grid_x,ecdf_value        (512 grid points per row set)
//   hist.csv      trial,t,bin_left,count           (200 bins of width 1/200)
//   probes.csv    trial,t,x,ecdf_value             (only when probes are set)
//   summary.json  per-trial and trial-mean masses and modes per generation
//   config.txt    canonical config echo
//   manifest.json version, seeds, UTC times, and a SHA-256 per emitted file

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plurality/engine.hpp"

namespace plurality {

inline constexpr const char* kToolVersion = "1.0.0";

std::string sha256_hex(std::string_view data);
// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string ecdf_csv(std::span<const Trajectory> runs);
std::string hist_csv(std::span<const Trajectory> runs);
std::string probes_csv(std::span<const Trajectory> runs);
std::string summary_json(std::span<const Trajectory> runs);

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

// A directory that records a digest for each file written into it.
class OutputDirectory {
 public:
  // Creates the directory; throws IoError if that fails.
  explicit OutputDirectory(std::filesystem::path dir);

  // Throws IoError on failure.
  const OutputFile& write(const std::string& name, std::string_view content);

  const std::filesystem::path& path() const noexcept { return dir_; }
  const std::vector<OutputFile>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputFile> files_;
};

struct RunManifest {
  std::string command;
  std::string config_text;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> trial_keys;
  std::string started_utc;
  std::string finished_utc;
  std::vector<OutputFile> files;
  std::vector<std::string> notes;
};

std::string manifest_json(const RunManifest& manifest);

// Rebuilds per-generation ecdf and probe summaries from a run directory
// (config.txt, ecdf.csv, optional probes.csv). Pools are not restored.
// Throws IoError for missing or malformed files.
std::vector<Trajectory> load_run_summaries(const std::filesystem::path& dir);

// Writes every trajectory artifact plus config.txt; the manifest is left to the caller.
void write_run_outputs(OutputDirectory& out, const SimulationConfig& cfg,
                       std::span<const Trajectory> runs);

}  // namespace plurality
