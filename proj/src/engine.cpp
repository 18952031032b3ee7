#include "plurality/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "plurality/errors.hpp"
#include "detail/engine_detail.hpp"

namespace plurality {

namespace {

std::vector<KShare> sorted_by_k(std::vector<KShare> ks) {
  std::sort(ks.begin(), ks.end(), [](const KShare& a, const KShare& b) { return a.k < b.k; });
  return ks;
}

void release_pools(GenerationRecord& rec) {
  rec.winner_pool = WinnerPool{};
  rec.rank_pools.clear();
  rec.rank_pools.shrink_to_fit();
}

}  // namespace

// ---------------------------------------------------------------------------
// SimulationConfig

void SimulationConfig::validate() const {
  if (k_counts.empty()) throw ParameterError("k_counts: at least one candidate count required");
  double total = 0.0;
  for (std::size_t i = 0; i < k_counts.size(); ++i) {
    const KShare& e = k_counts[i];
    if (e.k < 1) throw ParameterError("k_counts: every k must be >= 1");
    if (!(e.proportion >= 0.0 && e.proportion <= 1.0)) {
      throw ParameterError("k_counts: proportion for k=" + std::to_string(e.k) +
                           " must lie in [0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (k_counts[j].k == e.k) {
        throw ParameterError("k_counts: k=" + std::to_string(e.k) + " listed twice");
      }
    }
    total += e.proportion;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ParameterError("k_counts: proportions sum to " + std::to_string(total) +
                         ", expected 1");
  }
  if (generations < 1) throw ParameterError("generations: must be >= 1");
  if (elections < 1) throw ParameterError("elections: must be >= 1");
  if (elections > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("elections: must fit in 32 bits");
  }
  if (trials < 1) throw ParameterError("trials: must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon: must lie in [0, 1]");
  if (!(perturbation >= 0.0) || !std::isfinite(perturbation)) {
    throw ParameterError("perturbation: variance must be finite and >= 0");
  }
  if (memory < 1) throw ParameterError("memory: must be >= 1");
  if (top_h < 1 || top_h > min_k()) {
    throw ParameterError("top_h: must satisfy 1 <= h <= min k (" + std::to_string(min_k()) + ")");
  }
  for (double p : probes) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probes: every probe must lie in [0, 1]");
  }
  const int active = (epsilon > 0.0) + (perturbation > 0.0) + (memory > 1) + (top_h > 1) +
                     (k_counts.size() > 1);
  if (active > 1 && !allow_combined) {
    throw ParameterError(
        "variants: epsilon, perturbation, memory, top_h and mixed k_counts are exclusive; "
        "set allow_combined to combine them");
  }
}

std::uint32_t SimulationConfig::min_k() const {
  std::uint32_t m = std::numeric_limits<std::uint32_t>::max();
  for (const KShare& e : k_counts) m = std::min(m, e.k);
  return m;
}

std::uint32_t SimulationConfig::max_k() const {
  std::uint32_t m = 0;
  for (const KShare& e : k_counts) m = std::max(m, e.k);
  return m;
}

std::vector<std::uint64_t> SimulationConfig::allocation() const {
  const std::vector<KShare> ks = sorted_by_k(k_counts);
  double total = 0.0;
  for (const KShare& e : ks) total += e.proportion;
  std::vector<std::uint64_t> counts(ks.size());
  std::vector<double> remainder(ks.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double exact = ks[i].proportion / total * static_cast<double>(elections);
    counts[i] = static_cast<std::uint64_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(ks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < elections; i = (i + 1) % order.size()) {
    ++counts[order[i]];
    ++assigned;
  }
  // Rounding of normalized proportions can overshoot by at most a unit or two.
  for (auto it = order.rbegin(); assigned > elections; ++it) {
    if (it == order.rend()) it = order.rbegin();
    if (counts[*it] > 0) {
      --counts[*it];
      --assigned;
    }
  }
  return counts;
}

std::vector<std::uint32_t> SimulationConfig::k_per_block() const {
  std::vector<std::uint32_t> out;
  for (const KShare& e : sorted_by_k(k_counts)) out.push_back(e.k);
  return out;
}

// ---------------------------------------------------------------------------
// Summaries

GenerationSummary summarize(std::span<const double> pool, std::uint32_t t,
                            std::span<const double> probes) {
  const EmpiricalStats stats(pool);
  GenerationSummary s;
  s.t = t;
  s.size = pool.size();
  s.ecdf.resize(kEcdfGridSize);
  for (std::size_t i = 0; i < kEcdfGridSize; ++i) s.ecdf[i] = stats.ecdf(ecdf_grid_x(i));
  s.histogram = stats.histogram(kHistogramBins);
  s.probe_ecdf.reserve(probes.size());
  for (double x : probes) s.probe_ecdf.push_back(stats.ecdf(x));
  s.center_mass = stats.mass_in(kCenterLow, kCenterHigh);
  s.core_mass = stats.mass_in_closed(kCoreLow, kCoreHigh);
  s.modes = histogram_modes(std::span<const std::uint64_t>(s.histogram));
  return s;
}

// ---------------------------------------------------------------------------
// Candidate draws and generations

double draw_candidate(const CopySources& sources, const SimulationConfig& cfg,
                      RandomStream& rand) {
  if (cfg.epsilon > 0.0) {
    if (rand.uniform() < cfg.epsilon) return rand.uniform();
  }
  const auto& recs = sources.records;
  if (recs.empty()) throw StateError("draw_candidate needs at least one source generation");
  std::size_t g = 0;
  if (recs.size() > 1) g = static_cast<std::size_t>(rand.uniform_index(recs.size()));
  const GenerationRecord& src = *recs[g];
  std::size_t r = 0;
  if (cfg.top_h > 1) r = static_cast<std::size_t>(rand.uniform_index(cfg.top_h));

  double x;
  if (src.t == 0) {
    if (sources.initial == nullptr) throw StateError("copy from t = 0 requires F_0");
    x = sources.initial->sample(rand);
    if (cfg.enhanced_symmetry && rand.coin()) x = 1.0 - x;
  } else {
    const WinnerPool& pool = src.rank_pools.empty() ? src.winner_pool : src.rank_pools[r];
    x = pool_sample(pool, cfg.enhanced_symmetry, rand);
  }
  if (cfg.perturbation > 0.0) {
    x = std::clamp(x + std::sqrt(cfg.perturbation) * rand.normal(), 0.0, 1.0);
  }
  return x;
}

namespace detail {

ElectionLayout::ElectionLayout(const SimulationConfig& cfg)
    : ks(cfg.k_per_block()), max_k(cfg.max_k()) {
  const auto counts = cfg.allocation();
  std::uint64_t end = 0;
  for (std::uint64_t c : counts) {
    end += c;
    block_end.push_back(end);
  }
}

GenerationRecord assemble_record(std::uint32_t t, std::vector<std::vector<double>> ranks,
                                 const SimulationConfig& cfg) {
  GenerationRecord rec;
  rec.t = t;
  rec.summary = summarize(ranks[0], t, cfg.probes);
  if (ranks.size() > 1) {
    rec.winner_pool = WinnerPool(ranks[0], t);
    for (auto& r : ranks) rec.rank_pools.emplace_back(std::move(r), t);
  } else {
    rec.winner_pool = WinnerPool(std::move(ranks[0]), t);
  }
  return rec;
}

}  // namespace detail

GenerationRecord run_generation(const CopySources& sources, const SimulationConfig& cfg,
                                std::uint32_t t, std::uint64_t trial_key) {
  if (t < 1) throw StateError("run_generation requires t >= 1");
  const detail::ElectionLayout layout(cfg);
  const std::size_t h = cfg.top_h;
  const auto n = static_cast<std::int64_t>(cfg.elections);
  std::vector<std::vector<double>> ranks(h, std::vector<double>(cfg.elections));

#pragma omp parallel
  {
    std::vector<double> slate(layout.max_k);
    std::vector<double> shares(layout.max_k);
    std::vector<char> taken(layout.max_k);
#pragma omp for schedule(static)
    for (std::int64_t sj = 0; sj < n; ++sj) {
      const auto j = static_cast<std::uint64_t>(sj);
      const std::size_t k = layout.k_for(j);
      RandomStream rand(trial_key, t, static_cast<std::uint32_t>(j), StreamTag::Election);
      for (std::size_t i = 0; i < k; ++i) slate[i] = draw_candidate(sources, cfg, rand);
      std::sort(slate.begin(), slate.begin() + static_cast<std::ptrdiff_t>(k));
      const std::span<const double> positions(slate.data(), k);
      const std::span<double> out(shares.data(), k);
      kernel::assign_shares(positions, cfg.voters, cfg.rule, kernel::RandomRoles{rand}, out);
      if (h == 1) {
        ranks[0][j] = slate[kernel::select_max(out, {}, rand)];
      } else {
        std::fill(taken.begin(), taken.begin() + static_cast<std::ptrdiff_t>(k), 0);
        const std::span<const char> mask(taken.data(), k);
        for (std::size_t r = 0; r < h; ++r) {
          const std::size_t i = kernel::select_max(out, mask, rand);
          taken[i] = 1;
          ranks[r][j] = slate[i];
        }
      }
    }
  }
  return detail::assemble_record(t, std::move(ranks), cfg);
}

GenerationRecord initial_record(const SimulationConfig& cfg, std::uint64_t trial_key) {
  std::vector<std::vector<double>> ranks(1, std::vector<double>(cfg.elections));
  const auto n = static_cast<std::int64_t>(cfg.elections);
#pragma omp parallel for schedule(static)
  for (std::int64_t sj = 0; sj < n; ++sj) {
    const auto j = static_cast<std::uint64_t>(sj);
    RandomStream rand(trial_key, 0, static_cast<std::uint32_t>(j), StreamTag::InitialSample);
    ranks[0][j] = cfg.initial.sample(rand);
  }
  return detail::assemble_record(0, std::move(ranks), cfg);
}

// ---------------------------------------------------------------------------
// Trials and experiments

Trajectory run_trial(const SimulationConfig& cfg, std::uint32_t trial,
                     const RecordObserver& observer) {
  cfg.validate();
  Trajectory traj;
  traj.trial = trial;
  traj.config = cfg;
  const std::uint64_t key = RandomStream::trial_key(cfg.master_seed, trial);
  traj.records.reserve(static_cast<std::size_t>(cfg.generations) + 1);
  traj.records.push_back(initial_record(cfg, key));
  if (observer) observer(traj.records.back());

  for (std::uint32_t t = 1; t <= cfg.generations; ++t) {
    CopySources sources;
    sources.initial = &traj.config.initial;
    const std::uint32_t available = std::min(cfg.memory, t);
    for (std::uint32_t d = 0; d < available; ++d) {
      sources.records.push_back(&traj.records[t - 1 - d]);
    }
    GenerationRecord rec = run_generation(sources, cfg, t, key);
    traj.records.push_back(std::move(rec));
    if (observer) observer(traj.records.back());
    // Record t - m + 1 is the oldest source of generation t + 1.
    if (!cfg.keep_pools && t >= cfg.memory) release_pools(traj.records[t - cfg.memory]);
  }
  if (!cfg.keep_pools) {
    for (GenerationRecord& rec : traj.records) release_pools(rec);
  }
  return traj;
}

std::vector<Trajectory> run_experiment(const SimulationConfig& cfg,
                                       const RecordObserver& observer) {
  cfg.validate();
  std::vector<Trajectory> out;
  out.reserve(cfg.trials);
  for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
    out.push_back(run_trial(cfg, trial, observer));
  }
  return out;
}

std::vector<AggregateSummary> aggregate(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) return {};
  const std::size_t steps = trajectories.front().records.size();
  for (const Trajectory& tr : trajectories) {
    if (tr.records.size() != steps) {
      throw StateError("aggregate: trajectories have different lengths");
    }
  }
  const auto trials = static_cast<double>(trajectories.size());
  std::vector<AggregateSummary> out(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    AggregateSummary& a = out[t];
    const GenerationSummary& first = trajectories.front().records[t].summary;
    a.t = first.t;
    a.trials = static_cast<std::uint32_t>(trajectories.size());
    a.mean_ecdf.assign(first.ecdf.size(), 0.0);
    a.mean_probe_ecdf.assign(first.probe_ecdf.size(), 0.0);
    a.pooled_histogram.assign(first.histogram.size(), 0);
    for (const Trajectory& tr : trajectories) {
      const GenerationSummary& s = tr.records[t].summary;
      for (std::size_t i = 0; i < s.ecdf.size(); ++i) a.mean_ecdf[i] += s.ecdf[i];
      for (std::size_t i = 0; i < s.probe_ecdf.size(); ++i) a.mean_probe_ecdf[i] += s.probe_ecdf[i];
      for (std::size_t i = 0; i < s.histogram.size(); ++i) a.pooled_histogram[i] += s.histogram[i];
      a.mean_center_mass += s.center_mass;
      a.mean_core_mass += s.core_mass;
    }
    for (double& v : a.mean_ecdf) v /= trials;
    for (double& v : a.mean_probe_ecdf) v /= trials;
    a.mean_center_mass /= trials;
    a.mean_core_mass /= trials;
    a.modes = histogram_modes(std::span<const std::uint64_t>(a.pooled_histogram));
  }
  return out;
}

}  // namespace plurality
