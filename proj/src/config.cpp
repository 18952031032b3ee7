#include "plurality/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "plurality/errors.hpp"
#include "plurality/format.hpp"

namespace plurality {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParameterError("'" + std::string(text) + "' is not a non-negative integer");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view text) {
  const auto v = parse_unsigned(text);
  if (v > 0xFFFFFFFFull) throw ParameterError("'" + std::string(text) + "' is too large");
  return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParameterError("'" + std::string(text) + "' is not a boolean");
}

std::vector<KShare> parse_k_counts(std::string_view text) {
  std::vector<KShare> out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ParameterError("expected k:proportion, got '" + std::string(item) + "'");
    out.push_back({parse_u32(parts[0]), parse_double(parts[1])});
  }
  if (out.empty()) throw ParameterError("no k entries");
  return out;
}

std::vector<Atom> parse_atoms(std::string_view text) {
  std::vector<Atom> out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ParameterError("expected position:mass, got '" + std::string(item) + "'");
    out.push_back({parse_double(parts[0]), parse_double(parts[1])});
  }
  return out;
}

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

void apply_setting(SimulationConfig& cfg, std::string_view key, std::string_view value) {
  try {
    if (key == "k") {
      cfg.k_counts = {{parse_u32(value), 1.0}};
    } else if (key == "k_counts") {
      cfg.k_counts = parse_k_counts(value);
    } else if (key == "generations") {
      cfg.generations = parse_u32(value);
    } else if (key == "elections") {
      cfg.elections = parse_unsigned(value);
    } else if (key == "trials") {
      cfg.trials = parse_u32(value);
    } else if (key == "initial") {
      const std::vector<Atom> atoms(cfg.initial.atoms().begin(), cfg.initial.atoms().end());
      cfg.initial = InitialDistribution(VoterModel::parse(std::string(trim(value))), atoms);
    } else if (key == "atoms") {
      cfg.initial = InitialDistribution(cfg.initial.base(), parse_atoms(value));
    } else if (key == "voters") {
      cfg.voters = VoterModel::parse(std::string(trim(value)));
    } else if (key == "tie_break") {
      cfg.rule = parse_tie_break(std::string(trim(value)));
    } else if (key == "symmetry") {
      cfg.enhanced_symmetry = parse_bool(value);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(value);
    } else if (key == "perturbation") {
      cfg.perturbation = parse_double(value);
    } else if (key == "memory") {
      cfg.memory = parse_u32(value);
    } else if (key == "top_h") {
      cfg.top_h = parse_u32(value);
    } else if (key == "seed") {
      cfg.master_seed = parse_unsigned(value);
    } else if (key == "allow_combined") {
      cfg.allow_combined = parse_bool(value);
    } else if (key == "keep_pools") {
      cfg.keep_pools = parse_bool(value);
    } else if (key == "probes") {
      cfg.probes = parse_reals(value);
    } else {
      throw ParameterError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const ParameterError& e) {
    if (std::string_view(e.what()).rfind("unknown config key", 0) == 0) throw;
    throw ParameterError(std::string(key) + ": " + e.what());
  }
}

SimulationConfig parse_config_text(std::string_view text, SimulationConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParameterError("line " + std::to_string(line_no) + ": expected key = value");
      }
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  base.validate();
  return base;
}

SimulationConfig parse_config_file(const std::filesystem::path& path, SimulationConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string format_config(const SimulationConfig& cfg) {
  std::ostringstream out;
  out << "k_counts = ";
  for (std::size_t i = 0; i < cfg.k_counts.size(); ++i) {
    out << (i ? "," : "") << cfg.k_counts[i].k << ':' << format_double(cfg.k_counts[i].proportion);
  }
  out << "\ngenerations = " << cfg.generations << "\nelections = " << cfg.elections
      << "\ntrials = " << cfg.trials << "\ninitial = " << cfg.initial.base().to_string() << '\n';
  if (!cfg.initial.atoms().empty()) {
    out << "atoms = ";
    bool first = true;
    for (const Atom& a : cfg.initial.atoms()) {
      out << (first ? "" : ",") << format_double(a.position) << ':' << format_double(a.mass);
      first = false;
    }
    out << '\n';
  }
  out << "voters = " << cfg.voters.to_string() << "\ntie_break = " << to_string(cfg.rule)
      << "\nsymmetry = " << bool_text(cfg.enhanced_symmetry)
      << "\nepsilon = " << format_double(cfg.epsilon)
      << "\nperturbation = " << format_double(cfg.perturbation) << "\nmemory = " << cfg.memory
      << "\ntop_h = " << cfg.top_h << "\nseed = " << cfg.master_seed
      << "\nallow_combined = " << bool_text(cfg.allow_combined)
      << "\nkeep_pools = " << bool_text(cfg.keep_pools) << '\n';
  if (!cfg.probes.empty()) {
    out << "probes = ";
    for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
      out << (i ? "," : "") << format_double(cfg.probes[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace plurality
