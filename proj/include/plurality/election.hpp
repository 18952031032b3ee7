#pragma once

// Mechanics of one plurality election with a continuum of voters on [0, 1].

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "plurality/distributions.hpp"
#include "plurality/random.hpp"

namespace plurality {

enum class TieBreakRule {
  // One coincident candidate (u.a.r.) takes the left share, a different one the right.
  LeftRight,
  // Coincident candidates split the point's share equally.
  EqualSplit,
};

const char* to_string(TieBreakRule rule) noexcept;
TieBreakRule parse_tie_break(const std::string& text);

// Max-share ties: shares within this absolute distance of the maximum are tied.
inline constexpr double kShareTieTolerance = 1e-12;

// Candidate positions, sorted ascending. Coincidence means bitwise equality.
class Slate {
 public:
  struct Group {
    std::size_t begin;
    std::size_t count;
  };

  explicit Slate(std::vector<double> positions);

  std::span<const double> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double operator[](std::size_t i) const noexcept { return positions_[i]; }
  std::vector<Group> groups() const;

 private:
  std::vector<double> positions_;
};

struct ShareVector {
  std::vector<double> shares;
  double total() const noexcept;
};

struct Winner {
  std::size_t index;
  double position;
};

// Vote share of each candidate (same order as the slate). rand is consumed only
// for LeftRight role assignment at coincident points.
ShareVector vote_shares(const Slate& slate, const VoterModel& voters, TieBreakRule rule,
                        RandomStream& rand);

// Index attaining the maximum share; ties within kShareTieTolerance are broken
// uniformly at random (no draw is consumed when the maximum is unique).
Winner plurality_winner(const Slate& slate, const VoterModel& voters, TieBreakRule rule,
                        RandomStream& rand);

// Top-h positions by descending share, ties broken uniformly at random rank by
// rank. Element 0 coincides with plurality_winner on the same stream state.
std::vector<double> top_h_by_share(const Slate& slate, const VoterModel& voters, std::size_t h,
                                   TieBreakRule rule, RandomStream& rand);

namespace kernel {

// Shares on an already sorted span, written to out. pick(count) returns the
// (left, right) role offsets inside a coincident group of size count >= 2 and
// is only called under LeftRight.
template <class RolePicker>
void assign_shares(std::span<const double> sorted, const VoterModel& voters, TieBreakRule rule,
                   RolePicker&& pick, std::span<double> out) {
  const std::size_t k = sorted.size();
  std::size_t begin = 0;
  double lower = 0.0;  // V(left territory boundary)
  while (begin < k) {
    std::size_t end = begin + 1;
    while (end < k && sorted[end] == sorted[begin]) ++end;
    const double v = sorted[begin];
    const double at = voters.cdf(v);
    const double upper = end == k ? 1.0 : voters.cdf(0.5 * (v + sorted[end]));
    const double left = at - lower;
    const double right = upper - at;
    const std::size_t count = end - begin;
    if (count == 1) {
      out[begin] = left + right;
    } else if (rule == TieBreakRule::EqualSplit) {
      const double each = (left + right) / static_cast<double>(count);
      for (std::size_t i = begin; i < end; ++i) out[i] = each;
    } else {
      for (std::size_t i = begin; i < end; ++i) out[i] = 0.0;
      const auto [li, ri] = pick(count);
      out[begin + li] += left;
      out[begin + ri] += right;
    }
    lower = upper;
    begin = end;
  }
}

// Uniformly random distinct (left, right) roles.
struct RandomRoles {
  RandomStream& rand;
  std::pair<std::size_t, std::size_t> operator()(std::size_t count) const {
    const auto li = static_cast<std::size_t>(rand.uniform_index(count));
    auto ri = static_cast<std::size_t>(rand.uniform_index(count - 1));
    if (ri >= li) ++ri;
    return {li, ri};
  }
};

// Argmax among indices not yet taken; ties broken with rand.
inline std::size_t select_max(std::span<const double> shares, std::span<const char> taken,
                              RandomStream& rand) {
  double best = -1.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!taken.empty() && taken[i]) continue;
    if (shares[i] > best) best = shares[i];
  }
  std::size_t ties = 0;
  std::size_t first = shares.size();
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!taken.empty() && taken[i]) continue;
    if (shares[i] >= best - kShareTieTolerance) {
      if (ties == 0) first = i;
      ++ties;
    }
  }
  if (ties <= 1) return first;
  auto pick = rand.uniform_index(ties);
  for (std::size_t i = first; i < shares.size(); ++i) {
    if (!taken.empty() && taken[i]) continue;
    if (shares[i] >= best - kShareTieTolerance) {
      if (pick == 0) return i;
      --pick;
    }
  }
  return first;
}

}  // namespace kernel

}  // namespace plurality
