#pragma once

// Counter-based random streams.
//
// Every stream is a pure function of (key, counter prefix): the key is derived
// from (master_seed, trial) and the counter carries (generation, election,
// purpose tag).  Draw order within one stream is the only sequencing that
// matters, so results do not depend on thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace plurality {

// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t pa = std::uint64_t{kMulA} * ctr[0];
      const std::uint64_t pb = std::uint64_t{kMulB} * ctr[2];
      const auto hi_a = static_cast<std::uint32_t>(pa >> 32);
      const auto lo_a = static_cast<std::uint32_t>(pa);
      const auto hi_b = static_cast<std::uint32_t>(pb >> 32);
      const auto lo_b = static_cast<std::uint32_t>(pb);
      ctr = {hi_b ^ ctr[1] ^ key[0], lo_b, hi_a ^ ctr[3] ^ key[1], lo_a};
    }
    return ctr;
  }
};

// SplitMix64 finalizer; used to turn (seed, trial) into a Philox key.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Purpose tags occupy the last counter word so different uses never overlap.
enum class StreamTag : std::uint32_t {
  Election = 0,
  InitialSample = 1,
  Auxiliary = 2,
};

class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t key, std::uint32_t generation, std::uint32_t index,
               StreamTag tag = StreamTag::Election) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        generation_(generation),
        index_(index),
        tag_(static_cast<std::uint32_t>(tag)) {}

  // Key for one trial of an experiment.
  static constexpr std::uint64_t trial_key(std::uint64_t master_seed,
                                           std::uint64_t trial) noexcept {
    return splitmix64(master_seed ^ splitmix64(trial + 0x632BE59BD9B4E019ull));
  }

  // Independent child stream; children with different ids never share blocks.
  RandomStream split(std::uint32_t child) const noexcept {
    const std::uint64_t k = (std::uint64_t{key_[1]} << 32) | key_[0];
    return RandomStream(splitmix64(k ^ splitmix64(std::uint64_t{child} + 1)), generation_,
                        index_, static_cast<StreamTag>(tag_));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    if (buffered_ == 0) refill();
    --buffered_;
    return words_[buffered_];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Multiply-shift; bias below 2^-40 for n < 2^24.
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

  bool coin() noexcept { return (next_u64() >> 63) != 0; }

  // Standard normal by Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  void refill() noexcept {
    const auto out = Philox4x32::apply(
        {static_cast<std::uint32_t>(block_), index_, generation_, tag_}, key_);
    ++block_;
    words_[1] = (std::uint64_t{out[1]} << 32) | out[0];
    words_[0] = (std::uint64_t{out[3]} << 32) | out[2];
    buffered_ = 2;
  }

  Philox4x32::Key key_;
  std::uint32_t generation_;
  std::uint32_t index_;
  std::uint32_t tag_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int buffered_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace plurality
