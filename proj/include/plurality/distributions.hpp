#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "plurality/random.hpp"

namespace plurality {

// A policy coordinate in [0, 1].
class Position {
 public:
  explicit Position(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

  // Clamps into [0, 1] instead of rejecting. NaN is still rejected.
  static Position clamped(double value);

 private:
  double value_;
};

// Analytic symmetric-by-construction distribution on [0, 1].
//
// Beta(2,2) and Beta(0.5,0.5) use closed forms; other Beta shapes go through
// the regularized incomplete beta function. DoubleWeibull is truncated to
// [0, 1] and renormalized.
class VoterModel {
 public:
  enum class Kind { Uniform01, UniformInterval, Beta, DoubleWeibull };

  static VoterModel uniform();
  static VoterModel uniform_interval(double a, double b);
  static VoterModel beta(double alpha, double beta);
  static VoterModel double_weibull(double shape, double location, double scale);

  Kind kind() const noexcept { return kind_; }
  // Parameters in declaration order: (a, b), (alpha, beta), (shape, location, scale).
  std::span<const double> params() const noexcept { return {params_.data(), param_count_}; }

  double cdf(double x) const;
  double quantile(double p) const;
  double pdf(double x) const;
  double sample(RandomStream& rand) const { return quantile(rand.uniform()); }

  // Round-trips through parse().
  std::string to_string() const;
  // "uniform", "uniform:a:b", "beta:a:b", "double-weibull:shape:loc:scale"
  static VoterModel parse(const std::string& text);

  bool operator==(const VoterModel& other) const noexcept;

 private:
  VoterModel(Kind kind, std::initializer_list<double> params);

  double weibull_raw_cdf(double x) const;
  double weibull_raw_quantile(double p) const;

  Kind kind_ = Kind::Uniform01;
  std::array<double, 3> params_{};
  std::size_t param_count_ = 0;
  // DoubleWeibull: untruncated CDF at 0 and mass inside [0, 1].
  double tail_low_ = 0.0;
  double inner_mass_ = 1.0;
};

// Mass below which DoubleWeibull tails outside [0,1] are ignored entirely.
inline constexpr double kWeibullTruncationThreshold = 1e-9;

// Initial candidate distribution: a VoterModel plus optional point masses.
struct Atom {
  double position;
  double mass;
  bool operator==(const Atom&) const = default;
};

class InitialDistribution {
 public:
  InitialDistribution() : base_(VoterModel::uniform()) {}
  explicit InitialDistribution(VoterModel base, std::vector<Atom> atoms = {});

  const VoterModel& base() const noexcept { return base_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double atom_mass() const noexcept { return atom_mass_; }

  double cdf(double x) const;
  double sample(RandomStream& rand) const;

  std::string to_string() const;
  bool operator==(const InitialDistribution& other) const noexcept {
    return base_ == other.base_ && atoms_ == other.atoms_;
  }

 private:
  VoterModel base_;
  std::vector<Atom> atoms_;
  double atom_mass_ = 0.0;
};

// Winners of one generation. Positions are kept raw so resampling is exact.
class WinnerPool {
 public:
  WinnerPool() = default;
  WinnerPool(std::vector<double> positions, std::uint32_t generation);

  std::span<const double> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool empty() const noexcept { return positions_.empty(); }
  std::uint32_t generation() const noexcept { return generation_; }

 private:
  std::vector<double> positions_;
  std::uint32_t generation_ = 0;
};

// Uniform draw from the pool; with mirror, replaced by 1 - x with probability 1/2.
// The coin is always consumed when mirror is set.
double pool_sample(std::span<const double> pool, bool mirror, RandomStream& rand);
double pool_sample(const WinnerPool& pool, bool mirror, RandomStream& rand);

// Finite-sample summaries of a pool.
class EmpiricalStats {
 public:
  explicit EmpiricalStats(std::span<const double> positions);

  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted() const noexcept { return sorted_; }

  // Fraction of positions <= x.
  double ecdf(double x) const;
  // Order statistic at index ceil(p*n)-1 (index 0 for p = 0).
  double quantile(double p) const;
  // Counts over [0,1] split into equal bins; 1.0 lands in the last bin.
  std::vector<std::uint64_t> histogram(std::size_t bins) const;
  // Fraction strictly inside (a, b).
  double mass_in(double a, double b) const;
  // Fraction inside [a, b].
  double mass_in_closed(double a, double b) const;
  // Fraction exactly equal (bitwise) to x.
  double mass_at(double x) const;

 private:
  std::vector<double> sorted_;
};

// Histogram modes: moving-average smoothing (window bins, odd), then every
// maximal run of bins at or above half of the smoothed maximum is one mode,
// located at the centre of its highest smoothed bin.
std::vector<double> histogram_modes(std::span<const std::uint64_t> counts,
                                    std::size_t window = 5);

// Same, on a histogram of real-valued weights (e.g. pooled means).
std::vector<double> histogram_modes(std::span<const double> counts, std::size_t window = 5);

}  // namespace plurality
