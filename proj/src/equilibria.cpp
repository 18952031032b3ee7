#include "plurality/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "plurality/engine.hpp"
#include "plurality/errors.hpp"

namespace plurality {

namespace {

const VoterModel kUniformVoters = VoterModel::uniform();

// Calls visit(weight, shares) once per equally likely left-right role
// assignment; shares are indexed by candidate.
template <class Visit>
void enumerate_outcomes(const Profile& profile, Visit&& visit) {
  const std::size_t k = profile.size();
  std::vector<std::size_t> owner(k);
  std::iota(owner.begin(), owner.end(), std::size_t{0});
  std::stable_sort(owner.begin(), owner.end(), [&](std::size_t a, std::size_t b) {
    return profile.positions[a] < profile.positions[b];
  });
  std::vector<double> sorted(k);
  for (std::size_t s = 0; s < k; ++s) sorted[s] = profile.positions[owner[s]];

  // Sizes of coincident groups that need roles, in ascending position order.
  std::vector<std::size_t> tied;
  if (profile.rule == TieBreakRule::LeftRight) {
    for (std::size_t b = 0; b < k;) {
      std::size_t e = b + 1;
      while (e < k && sorted[e] == sorted[b]) ++e;
      if (e - b >= 2) tied.push_back(e - b);
      b = e;
    }
  }
  double outcomes = 1.0;
  for (std::size_t c : tied) outcomes *= static_cast<double>(c * (c - 1));
  const double weight = 1.0 / outcomes;

  std::vector<std::size_t> choice(tied.size(), 0);
  std::vector<double> by_slot(k), by_candidate(k);
  while (true) {
    std::size_t g = 0;
    const auto pick = [&](std::size_t count) {
      const std::size_t a = choice[g++];
      const std::size_t li = a / (count - 1);
      std::size_t ri = a % (count - 1);
      if (ri >= li) ++ri;
      return std::pair<std::size_t, std::size_t>{li, ri};
    };
    kernel::assign_shares(sorted, kUniformVoters, profile.rule, pick, by_slot);
    for (std::size_t s = 0; s < k; ++s) by_candidate[owner[s]] = by_slot[s];
    visit(weight, std::as_const(by_candidate));

    // Odometer over the role assignments of every tied group.
    std::size_t d = 0;
    while (d < tied.size()) {
      if (++choice[d] < tied[d] * (tied[d] - 1)) break;
      choice[d] = 0;
      ++d;
    }
    if (d == tied.size()) break;
  }
}

// Adds one outcome's contribution to candidate i's payoff.
void accumulate(Payoff& out, std::size_t i, double weight, const std::vector<double>& shares,
                std::vector<double>& opponents) {
  const double best = *std::max_element(shares.begin(), shares.end());
  std::size_t ties = 0;
  for (double s : shares) ties += s >= best - kShareTieTolerance;
  if (shares[i] >= best - kShareTieTolerance) {
    out.win_probability += weight / static_cast<double>(ties);
  }
  opponents.clear();
  for (std::size_t j = 0; j < shares.size(); ++j) {
    if (j != i) opponents.push_back(shares[j]);
  }
  std::sort(opponents.begin(), opponents.end(), std::greater<>());
  for (std::size_t r = 0; r < opponents.size(); ++r) {
    out.expected_margins[r] += weight * (shares[i] - opponents[r]);
  }
}

}  // namespace

void Profile::validate() const {
  if (positions.size() < 2) throw ParameterError("a profile needs at least two candidates");
  for (double x : positions) {
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("profile position outside [0, 1]");
  }
}

Payoff payoff(const Profile& profile, std::size_t i) {
  profile.validate();
  if (i >= profile.size()) throw ParameterError("candidate index out of range");
  Payoff out;
  out.expected_margins.assign(profile.size() - 1, 0.0);
  std::vector<double> opponents;
  enumerate_outcomes(profile, [&](double w, const std::vector<double>& shares) {
    accumulate(out, i, w, shares, opponents);
  });
  return out;
}

std::vector<Payoff> payoffs(const Profile& profile) {
  profile.validate();
  std::vector<Payoff> out(profile.size());
  for (auto& p : out) p.expected_margins.assign(profile.size() - 1, 0.0);
  std::vector<double> opponents;
  enumerate_outcomes(profile, [&](double w, const std::vector<double>& shares) {
    for (std::size_t i = 0; i < shares.size(); ++i) accumulate(out[i], i, w, shares, opponents);
  });
  return out;
}

int compare(const Payoff& a, const Payoff& b) {
  if (a.win_probability > b.win_probability + kPayoffTolerance) return 1;
  if (a.win_probability < b.win_probability - kPayoffTolerance) return -1;
  const std::size_t n = std::min(a.expected_margins.size(), b.expected_margins.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (a.expected_margins[r] > b.expected_margins[r] + kPayoffTolerance) return 1;
    if (a.expected_margins[r] < b.expected_margins[r] - kPayoffTolerance) return -1;
  }
  return 0;
}

PsneResult is_psne(const Profile& profile, std::uint32_t grid_resolution, double delta) {
  profile.validate();
  if (grid_resolution < 1000) throw ParameterError("grid_resolution must be >= 1000");
  if (!(delta > 0.0 && delta <= 1e-4)) throw ParameterError("offset must lie in (0, 1e-4]");

  std::vector<double> occupied = profile.positions;
  std::sort(occupied.begin(), occupied.end());
  occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());

  std::vector<double> targets;
  for (double p : occupied) {
    if (p - delta >= 0.0) targets.push_back(p - delta);
    if (p + delta <= 1.0) targets.push_back(p + delta);
  }
  targets.insert(targets.end(), occupied.begin(), occupied.end());
  for (std::uint32_t j = 0; j <= grid_resolution; ++j) {
    targets.push_back(static_cast<double>(j) / static_cast<double>(grid_resolution));
  }

  // Candidates sharing a point are interchangeable, so one per point suffices.
  std::vector<double> checked;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double from = profile.positions[i];
    if (std::find(checked.begin(), checked.end(), from) != checked.end()) continue;
    checked.push_back(from);
    const Payoff before = payoff(profile, i);
    Profile moved = profile;
    for (double to : targets) {
      if (to == from) continue;
      moved.positions[i] = to;
      Payoff after = payoff(moved, i);
      if (compare(after, before) > 0) {
        return {false, Deviation{i, from, to, before, std::move(after)}};
      }
    }
  }
  return {true, std::nullopt};
}

double two_spike_deviation_win_probability(double y, double x, std::uint32_t k) {
  const double right = 1.0 - x;
  const std::uint32_t m = k - 1;
  double total = 0.0;
  for (std::uint32_t c = 0; c <= m; ++c) {
    Profile prof;
    prof.rule = TieBreakRule::LeftRight;
    prof.positions.push_back(y);
    prof.positions.insert(prof.positions.end(), c, x);
    prof.positions.insert(prof.positions.end(), m - c, right);
    // Binomial(m, 1/2) weight.
    const double weight =
        std::exp(std::lgamma(m + 1.0) - std::lgamma(c + 1.0) - std::lgamma(m - c + 1.0)) *
        std::ldexp(1.0, -static_cast<int>(m));
    total += weight * payoff(prof, 0).win_probability;
  }
  return total;
}

SmsneResult is_two_spike_smsne(double x, std::uint32_t k, std::uint32_t grid_resolution,
                               double delta) {
  if (!(x > 0.0 && x < 0.5)) throw ParameterError("two-spike check requires x in (0, 1/2)");
  if (k < 2) throw ParameterError("two-spike check requires k >= 2");
  const double right = 1.0 - x;
  std::vector<double> targets = {0.5,         x,           right,         x - delta,
                                 x + delta,   right - delta, right + delta};
  for (std::uint32_t j = 0; j <= grid_resolution; ++j) {
    targets.push_back(static_cast<double>(j) / static_cast<double>(grid_resolution));
  }
  SmsneResult best{true, -1.0, 0.0};
  for (double y : targets) {
    if (y < 0.0 || y > 1.0) continue;
    const double w = two_spike_deviation_win_probability(y, x, k);
    if (w > best.best_deviation_win_probability) {
      best.best_deviation_win_probability = w;
      best.best_deviation_position = y;
    }
  }
  best.is_smsne = best.best_deviation_win_probability <= 1.0 / k + kPayoffTolerance;
  return best;
}

std::vector<Profile> small_k_psne_catalog(std::uint32_t k, const std::vector<double>& family_x) {
  if (k < 2 || k > 5) throw ParameterError("the catalog covers k in [2, 5]");
  for (double x : family_x) {
    if (!(x > 0.25 && x < 0.5)) throw ParameterError("family x must lie in (1/4, 1/2)");
  }
  const auto lr = [](std::vector<double> xs) { return Profile{std::move(xs), TieBreakRule::LeftRight}; };
  std::vector<Profile> out;
  out.push_back(lr(std::vector<double>(k, 0.5)));
  if (k == 4) {
    out.push_back(lr({0.25, 0.25, 0.75, 0.75}));
    for (double x : family_x) out.push_back(lr({x, x, 1.0 - x, 1.0 - x}));
  } else if (k == 5) {
    out.push_back(lr({0.25, 0.25, 0.5, 0.75, 0.75}));
    for (double x : family_x) {
      out.push_back(lr({x, x, 1.0 - x, 1.0 - x, 1.0 - x}));
      out.push_back(lr({x, x, x, 1.0 - x, 1.0 - x}));
    }
  }
  return out;
}

Profile cox_profile(std::uint32_t k) {
  if (k < 2 || k % 2 != 0) throw ParameterError("the paired profile needs an even k");
  Profile p;
  p.rule = TieBreakRule::EqualSplit;
  for (std::uint32_t j = 1; j < k; j += 2) {
    const double x = static_cast<double>(j) / static_cast<double>(k);
    p.positions.push_back(x);
    p.positions.push_back(x);
  }
  return p;
}

std::vector<double> atom_seeded_convergence(AtomKind kind, std::uint32_t k, double p,
                                            std::optional<double> x,
                                            const AtomRunOptions& options) {
  std::vector<Atom> atoms;
  if (kind == AtomKind::CenterMass) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("center-mass run requires p in (0, 1)");
    atoms.push_back({0.5, p});
  } else {
    if (!x) throw ParameterError("two-spike run requires x");
    if (!(*x > 0.25 && *x < 0.5)) throw ParameterError("two-spike run requires x in (1/4, 1/2)");
    if (!(p > 0.0 && p < 0.5)) throw ParameterError("two-spike run requires p in (0, 1/2)");
    atoms.push_back({*x, p});
    atoms.push_back({1.0 - *x, p});
  }

  SimulationConfig cfg;
  cfg.k_counts = {{k, 1.0}};
  cfg.generations = options.generations;
  cfg.elections = options.elections;
  cfg.master_seed = options.seed;
  cfg.rule = TieBreakRule::LeftRight;
  cfg.enhanced_symmetry = false;
  cfg.initial = InitialDistribution(VoterModel::uniform(), atoms);

  std::vector<double> mass;
  run_trial(cfg, options.trial, [&](const GenerationRecord& rec) {
    const auto pool = rec.winner_pool.positions();
    std::size_t hits = 0;
    for (double v : pool) {
      for (const Atom& a : atoms) {
        if (v == a.position) {
          ++hits;
          break;
        }
      }
    }
    mass.push_back(static_cast<double>(hits) / static_cast<double>(pool.size()));
  });
  return mass;
}

}  // namespace plurality
