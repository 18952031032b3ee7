#pragma once

// Shared between the parallel kernel and the serial reference.

#include <cstdint>
#include <vector>

#include "plurality/engine.hpp"

namespace plurality::detail {

// Contiguous election blocks, one per k in ascending order.
struct ElectionLayout {
  explicit ElectionLayout(const SimulationConfig& cfg);

  std::size_t k_for(std::uint64_t j) const noexcept {
    std::size_t b = 0;
    while (b + 1 < block_end.size() && j >= block_end[b]) ++b;
    return ks[b];
  }

  std::vector<std::uint32_t> ks;
  std::vector<std::uint64_t> block_end;
  std::size_t max_k;
};

GenerationRecord assemble_record(std::uint32_t t, std::vector<std::vector<double>> ranks,
                                 const SimulationConfig& cfg);

}  // namespace plurality::detail
