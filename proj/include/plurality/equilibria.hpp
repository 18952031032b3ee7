#pragma once

// Payoffs and equilibrium checks for the one-shot positioning game with
// uniform voters. Candidates rank outcomes lexicographically: win probability
// first, then expected margins against opponents ordered strongest first.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "plurality/election.hpp"

namespace plurality {

struct Profile {
  std::vector<double> positions;  // candidate order; repeated values are point masses
  TieBreakRule rule = TieBreakRule::LeftRight;

  void validate() const;
  std::size_t size() const noexcept { return positions.size(); }
};

struct Payoff {
  double win_probability = 0.0;
  // Entry r: expected (own share - share of the (r+1)-th strongest opponent),
  // where opponents are ranked within each tie-resolution outcome.
  std::vector<double> expected_margins;
};

inline constexpr double kPayoffTolerance = 1e-12;

// Exact: enumerates every left-right role assignment and max-share lottery.
Payoff payoff(const Profile& profile, std::size_t i);
std::vector<Payoff> payoffs(const Profile& profile);

// Lexicographic comparison with kPayoffTolerance per component: -1, 0 or +1.
int compare(const Payoff& a, const Payoff& b);

struct Deviation {
  std::size_t candidate;
  double from;
  double to;
  Payoff before;
  Payoff after;
};

struct PsneResult {
  bool is_psne;
  std::optional<Deviation> witness;
};

inline constexpr std::uint32_t kDefaultPsneGrid = 10000;
inline constexpr double kDefaultPsneOffset = 1e-6;

// Scans p +- delta around every occupied point, the occupied points, then the
// grid j / grid_resolution; returns the first strictly improving deviation.
PsneResult is_psne(const Profile& profile, std::uint32_t grid_resolution = kDefaultPsneGrid,
                   double delta = kDefaultPsneOffset);

struct SmsneResult {
  bool is_smsne;
  double best_deviation_win_probability;
  double best_deviation_position;
};

// Opponents mix 50/50 over {x, 1 - x} under left-right tie-breaking.
SmsneResult is_two_spike_smsne(double x, std::uint32_t k,
                               std::uint32_t grid_resolution = kDefaultPsneGrid,
                               double delta = kDefaultPsneOffset);

// Win probability of a deviant at y against the two-spike mixture.
double two_spike_deviation_win_probability(double y, double x, std::uint32_t k);

// Left-right PSNEs for k in [2, 5], with each one-parameter family
// instantiated at every x in family_x (each must lie in (1/4, 1/2)).
std::vector<Profile> small_k_psne_catalog(std::uint32_t k, const std::vector<double>& family_x);

// Two candidates at each of 1/k, 3/k, ..., (k-1)/k under equal split; k even.
Profile cox_profile(std::uint32_t k);

enum class AtomKind { CenterMass, TwoSpike };

struct AtomRunOptions {
  std::uint32_t generations = 100;
  std::uint64_t elections = 100000;
  std::uint64_t seed = 1;
  std::uint32_t trial = 0;
};

// Runs the engine (left-right ties, no mirroring) from an F_0 with atoms of
// mass p at 1/2 (CenterMass) or at x and 1 - x (TwoSpike) over a uniform
// remainder, and returns the pool fraction bit-equal to the atoms per generation.
std::vector<double> atom_seeded_convergence(AtomKind kind, std::uint32_t k, double p,
                                            std::optional<double> x = std::nullopt,
                                            const AtomRunOptions& options = {});

}  // namespace plurality
