// Serial reference for run_generation: one Slate per election through the
// public election API. Kept for equivalence tests and benchmarks.

#include <vector>

#include "detail/engine_detail.hpp"
#include "plurality/engine.hpp"
#include "plurality/errors.hpp"

namespace plurality {

GenerationRecord run_generation_serial(const CopySources& sources, const SimulationConfig& cfg,
                                       std::uint32_t t, std::uint64_t trial_key) {
  if (t < 1) throw StateError("run_generation requires t >= 1");
  const detail::ElectionLayout layout(cfg);
  const std::size_t h = cfg.top_h;
  std::vector<std::vector<double>> ranks(h, std::vector<double>(cfg.elections));
  for (std::uint64_t j = 0; j < cfg.elections; ++j) {
    const std::size_t k = layout.k_for(j);
    RandomStream rand(trial_key, t, static_cast<std::uint32_t>(j), StreamTag::Election);
    std::vector<double> candidates(k);
    for (double& x : candidates) x = draw_candidate(sources, cfg, rand);
    const Slate slate(std::move(candidates));
    if (h == 1) {
      ranks[0][j] = plurality_winner(slate, cfg.voters, cfg.rule, rand).position;
    } else {
      const auto top = top_h_by_share(slate, cfg.voters, h, cfg.rule, rand);
      for (std::size_t r = 0; r < h; ++r) ranks[r][j] = top[r];
    }
  }
  return detail::assemble_record(t, std::move(ranks), cfg);
}

}  // namespace plurality
