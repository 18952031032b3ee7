#include "plurality/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plurality/config.hpp"
#include "plurality/errors.hpp"
#include "plurality/format.hpp"

namespace plurality {

namespace {

using nlohmann::ordered_json;

// Hand-written so every float keeps 17 significant digits.
std::string json_reals(std::span<const double> xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
  return out + "]";
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ecdf_csv(std::span<const Trajectory> runs) {
  std::string out = "trial,t,grid_x,ecdf_value\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      const std::string prefix = std::to_string(run.trial) + ',' + std::to_string(rec.t) + ',';
      for (std::size_t i = 0; i < rec.summary.ecdf.size(); ++i) {
        out += prefix + format_double(ecdf_grid_x(i)) + ',' + format_double(rec.summary.ecdf[i]) +
               '\n';
      }
    }
  }
  return out;
}

std::string hist_csv(std::span<const Trajectory> runs) {
  std::string out = "trial,t,bin_left,count\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      const std::string prefix = std::to_string(run.trial) + ',' + std::to_string(rec.t) + ',';
      const auto& h = rec.summary.histogram;
      for (std::size_t b = 0; b < h.size(); ++b) {
        out += prefix + format_double(static_cast<double>(b) / static_cast<double>(h.size())) +
               ',' + std::to_string(h[b]) + '\n';
      }
    }
  }
  return out;
}

std::string probes_csv(std::span<const Trajectory> runs) {
  std::string out = "trial,t,x,ecdf_value\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      for (std::size_t i = 0; i < run.config.probes.size(); ++i) {
        out += std::to_string(run.trial) + ',' + std::to_string(rec.t) + ',' +
               format_double(run.config.probes[i]) + ',' +
               format_double(rec.summary.probe_ecdf[i]) + '\n';
      }
    }
  }
  return out;
}

std::string summary_json(std::span<const Trajectory> runs) {
  std::ostringstream o;
  o << "{\n  \"center_interval\": {\"low\": " << format_double(kCenterLow)
    << ", \"high\": " << format_double(kCenterHigh) << ", \"closed\": false},\n"
    << "  \"core_interval\": {\"low\": " << format_double(kCoreLow)
    << ", \"high\": " << format_double(kCoreHigh) << ", \"closed\": true},\n"
    << "  \"trials\": [";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    o << (r ? "," : "") << "\n    {\"trial\": " << runs[r].trial << ", \"generations\": [";
    const auto& recs = runs[r].records;
    for (std::size_t g = 0; g < recs.size(); ++g) {
      const auto& s = recs[g].summary;
      o << (g ? "," : "") << "\n      {\"t\": " << s.t << ", \"size\": " << s.size
        << ", \"center_mass\": " << format_double(s.center_mass)
        << ", \"core_mass\": " << format_double(s.core_mass)
        << ", \"modes\": " << json_reals(s.modes) << "}";
    }
    o << "\n    ]}";
  }
  o << "\n  ],\n  \"mean\": [";
  const auto agg = aggregate(runs);
  for (std::size_t g = 0; g < agg.size(); ++g) {
    const auto& a = agg[g];
    o << (g ? "," : "") << "\n    {\"t\": " << a.t << ", \"trials\": " << a.trials
      << ", \"center_mass\": " << format_double(a.mean_center_mass)
      << ", \"core_mass\": " << format_double(a.mean_core_mass)
      << ", \"modes\": " << json_reals(a.modes) << "}";
  }
  o << "\n  ]\n}\n";
  return o.str();
}

OutputDirectory::OutputDirectory(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw IoError("cannot create output directory " + dir_.string());
  }
}

const OutputFile& OutputDirectory::write(const std::string& name, std::string_view content) {
  const auto target = dir_ / name;
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + target.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + target.string());
  files_.push_back({name, sha256_hex(content), content.size()});
  return files_.back();
}

std::string manifest_json(const RunManifest& m) {
  ordered_json root;
  root["tool"] = "plurality";
  root["version"] = kToolVersion;
  root["command"] = m.command;
  root["config"] = m.config_text;
  root["master_seed"] = m.master_seed;
  root["trial_keys"] = m.trial_keys;
  root["started_utc"] = m.started_utc;
  root["finished_utc"] = m.finished_utc;
  ordered_json files = ordered_json::array();
  for (const auto& f : m.files) {
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  root["files"] = std::move(files);
  root["notes"] = m.notes;
  return root.dump(2) + "\n";
}

namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Calls row(trial, t, x, value) for each data row of a trial,t,x,value file.
template <class Row>
void for_each_row(const std::filesystem::path& p, const char* header, Row&& row) {
  std::istringstream in(read_text(p));
  std::string line;
  if (!std::getline(in, line) || line != header) throw IoError(p.string() + ": unexpected header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string f[4];
    for (auto& cell : f) std::getline(cells, cell, ',');
    try {
      row(std::stoul(f[0]), std::stoul(f[1]), parse_double(f[2]), parse_double(f[3]));
    } catch (const std::exception&) {
      throw IoError(p.string() + ": malformed line " + std::to_string(line_no));
    }
  }
}

}  // namespace

std::vector<Trajectory> load_run_summaries(const std::filesystem::path& dir) {
  SimulationConfig cfg;
  try {
    cfg = parse_config_file(dir / "config.txt");
  } catch (const ParameterError& e) {
    throw IoError((dir / "config.txt").string() + ": " + e.what());
  }
  std::vector<Trajectory> runs(cfg.trials);
  for (std::uint32_t r = 0; r < cfg.trials; ++r) {
    runs[r].trial = r;
    runs[r].config = cfg;
    runs[r].records.resize(cfg.generations + 1);
    for (std::uint32_t t = 0; t <= cfg.generations; ++t) {
      auto& s = runs[r].records[t].summary;
      runs[r].records[t].t = t;
      s.t = t;
      s.size = cfg.elections;
      s.ecdf.assign(kEcdfGridSize, 0.0);
      s.probe_ecdf.assign(cfg.probes.size(), 0.0);
    }
  }
  const auto at = [&](std::size_t trial, std::size_t t) -> GenerationSummary& {
    if (trial >= runs.size() || t > cfg.generations) throw IoError("row outside the configured run");
    return runs[trial].records[t].summary;
  };
  for_each_row(dir / "ecdf.csv", "trial,t,grid_x,ecdf_value",
               [&](std::size_t trial, std::size_t t, double x, double v) {
                 const double i = x * static_cast<double>(kEcdfGridSize);
                 if (!(i >= 0.0 && i < static_cast<double>(kEcdfGridSize))) {
                   throw IoError("grid_x out of range");
                 }
                 at(trial, t).ecdf[static_cast<std::size_t>(i)] = v;
               });
  if (!cfg.probes.empty()) {
    for_each_row(dir / "probes.csv", "trial,t,x,ecdf_value",
                 [&](std::size_t trial, std::size_t t, double x, double v) {
                   const auto it = std::find(cfg.probes.begin(), cfg.probes.end(), x);
                   if (it == cfg.probes.end()) throw IoError("unknown probe");
                   at(trial, t).probe_ecdf[static_cast<std::size_t>(it - cfg.probes.begin())] = v;
                 });
  }
  return runs;
}

void write_run_outputs(OutputDirectory& out, const SimulationConfig& cfg,
                       std::span<const Trajectory> runs) {
  out.write("ecdf.csv", ecdf_csv(runs));
  out.write("hist.csv", hist_csv(runs));
  if (!cfg.probes.empty()) out.write("probes.csv", probes_csv(runs));
  out.write("summary.json", summary_json(runs));
  out.write("config.txt", format_config(cfg));
}

}  // namespace plurality
