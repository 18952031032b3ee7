#pragma once

// Closed-form CDF bounds, noisy limits, iterated maps and their fixed points.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plurality/distributions.hpp"

namespace plurality {

enum class BoundKind {
  K2Exact,        // [2 F0(x)]^(2^t) / 2
  K3Upper,        // F0(x) [3/4 + F0(x)^2]^t
  K4Upper,        // F0(x) [1 - 4 (1/2 - F0(x/3 + 1/3))^3]^t, x in (1/3, 1/2)
  K2NoisyLimit,   // lower fixed point of the noisy quadratic map
  K3NoisyLimit,   // 1.5 eps
  K4NoisyLimit,   // eps / (8 beta^3)
  DensityRatio,   // k (1/2)^(k-2)
  LimitedSupportThreshold,  // (1 - sqrt(3/7)) / 2
};

const char* to_string(BoundKind kind) noexcept;
BoundKind parse_bound_kind(const std::string& text);

struct BoundSpec {
  BoundKind kind = BoundKind::K2Exact;
  double x = 0.25;
  std::uint32_t t = 0;
  double epsilon = 0.0;
  std::uint32_t k = 0;
  VoterModel f0 = VoterModel::uniform();
};

// Throws ParameterError naming the violated constraint.
double cdf_bound(const BoundSpec& spec);

// beta = 1/2 - eps (x/3 + 1/3) - (1 - eps) max{x/3 + 1/3, F0(x/3 + 1/3)}.
double k4_beta(double x, double epsilon, const VoterModel& f0);

double density_ratio(std::uint32_t k);
double limited_support_threshold();

class IteratedMap {
 public:
  enum class Kind {
    QuadraticNoisyK2,
    CubicNoisyK3,
    LinearNoisyK4,
    LargeK,
    CenterMassThreshold,
    TwoSpikeThreshold,
  };

  static IteratedMap quadratic_noisy_k2(double epsilon, double x);
  static IteratedMap cubic_noisy_k3(double epsilon);
  static IteratedMap linear_noisy_k4(double epsilon, double x, double beta);
  static IteratedMap large_k(std::uint32_t k);
  static IteratedMap center_mass_threshold(std::uint32_t k);
  static IteratedMap two_spike_threshold(std::uint32_t k);

  Kind kind() const noexcept { return kind_; }
  double operator()(double p) const noexcept;
  // The interval the map is analysed on; orbits leaving it are errors.
  double domain_low() const noexcept { return 0.0; }
  double domain_high() const noexcept { return high_; }
  std::string name() const;

 private:
  IteratedMap(Kind kind, double epsilon, double x, double beta, std::uint32_t k, double high)
      : kind_(kind), epsilon_(epsilon), x_(x), beta_(beta), k_(k), high_(high) {}

  Kind kind_;
  double epsilon_;
  double x_;
  double beta_;
  std::uint32_t k_;
  double high_;
};

// Orbit p0, f(p0), ..., f^steps(p0). Throws MapDomainError on escape.
std::vector<double> iterate_map(const IteratedMap& map, double p0, std::size_t steps);

enum class Stability { Stable, Unstable, Marginal };
const char* to_string(Stability s) noexcept;

struct FixedPoint {
  double value;
  double derivative;
  Stability stability;
};

inline constexpr std::size_t kFixedPointGrid = 10000;
inline constexpr double kFixedPointTolerance = 1e-12;
inline constexpr double kDerivativeStep = 1e-6;
inline constexpr double kMarginalBand = 1e-4;

// Central difference with step kDerivativeStep.
double map_derivative(const IteratedMap& map, double p);

// All fixed points on the map's domain, ascending.
std::vector<FixedPoint> fixed_points(const IteratedMap& map);

// Closed forms used to cross-check the bisection.
struct QuadraticRoots {
  double lower;
  double upper;
};
QuadraticRoots quadratic_noisy_k2_roots(double epsilon, double x);
// Roots of the cubic noisy map: the small one, the negative one and 1/2.
std::vector<double> cubic_noisy_k3_roots(double epsilon);

}  // namespace plurality
