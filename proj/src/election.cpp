#include "plurality/election.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "plurality/errors.hpp"

namespace plurality {

const char* to_string(TieBreakRule rule) noexcept {
  return rule == TieBreakRule::LeftRight ? "left-right" : "equal-split";
}

TieBreakRule parse_tie_break(const std::string& text) {
  if (text == "left-right" || text == "LeftRight") return TieBreakRule::LeftRight;
  if (text == "equal-split" || text == "EqualSplit") return TieBreakRule::EqualSplit;
  throw ParameterError("unknown tie-break rule '" + text + "' (left-right | equal-split)");
}

Slate::Slate(std::vector<double> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) throw ParameterError("a slate needs at least one candidate");
  for (double x : positions_) {
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("slate position outside [0, 1]");
  }
  std::sort(positions_.begin(), positions_.end());
}

std::vector<Slate::Group> Slate::groups() const {
  std::vector<Group> out;
  std::size_t begin = 0;
  while (begin < positions_.size()) {
    std::size_t end = begin + 1;
    while (end < positions_.size() && positions_[end] == positions_[begin]) ++end;
    out.push_back({begin, end - begin});
    begin = end;
  }
  return out;
}

double ShareVector::total() const noexcept {
  return std::accumulate(shares.begin(), shares.end(), 0.0);
}

ShareVector vote_shares(const Slate& slate, const VoterModel& voters, TieBreakRule rule,
                        RandomStream& rand) {
  ShareVector sv;
  sv.shares.assign(slate.size(), 0.0);
  kernel::assign_shares(slate.positions(), voters, rule, kernel::RandomRoles{rand}, sv.shares);
  return sv;
}

Winner plurality_winner(const Slate& slate, const VoterModel& voters, TieBreakRule rule,
                        RandomStream& rand) {
  const ShareVector sv = vote_shares(slate, voters, rule, rand);
  const std::size_t i = kernel::select_max(sv.shares, {}, rand);
  return {i, slate[i]};
}

std::vector<double> top_h_by_share(const Slate& slate, const VoterModel& voters, std::size_t h,
                                   TieBreakRule rule, RandomStream& rand) {
  if (h < 1 || h > slate.size()) {
    throw ParameterError("top-h requires 1 <= h <= k (h = " + std::to_string(h) +
                         ", k = " + std::to_string(slate.size()) + ")");
  }
  const ShareVector sv = vote_shares(slate, voters, rule, rand);
  std::vector<char> taken(slate.size(), 0);
  std::vector<double> out;
  out.reserve(h);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t i = kernel::select_max(sv.shares, taken, rand);
    taken[i] = 1;
    out.push_back(slate[i]);
  }
  return out;
}

}  // namespace plurality
