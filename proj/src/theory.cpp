#include "plurality/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plurality/errors.hpp"
#include "plurality/format.hpp"

namespace plurality {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

void require_k(std::uint32_t k, std::uint32_t min) {
  require(k >= min, "k must be >= " + std::to_string(min) + " (got " + std::to_string(k) + ")");
}

}  // namespace

const char* to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::K2Exact: return "k2-exact";
    case BoundKind::K3Upper: return "k3-upper";
    case BoundKind::K4Upper: return "k4-upper";
    case BoundKind::K2NoisyLimit: return "k2-noisy-limit";
    case BoundKind::K3NoisyLimit: return "k3-noisy-limit";
    case BoundKind::K4NoisyLimit: return "k4-noisy-limit";
    case BoundKind::DensityRatio: return "density-ratio";
    case BoundKind::LimitedSupportThreshold: return "limited-support-threshold";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& text) {
  for (auto kind : {BoundKind::K2Exact, BoundKind::K3Upper, BoundKind::K4Upper,
                    BoundKind::K2NoisyLimit, BoundKind::K3NoisyLimit, BoundKind::K4NoisyLimit,
                    BoundKind::DensityRatio, BoundKind::LimitedSupportThreshold}) {
    if (text == to_string(kind)) return kind;
  }
  throw ParameterError("unknown bound kind '" + text + "'");
}

double k4_beta(double x, double epsilon, const VoterModel& f0) {
  const double y = x / 3.0 + 1.0 / 3.0;
  return 0.5 - epsilon * y - (1.0 - epsilon) * std::max(y, f0.cdf(y));
}

double cdf_bound(const BoundSpec& s) {
  switch (s.kind) {
    case BoundKind::K2Exact: {
      require(s.x >= 0.0 && s.x <= 0.5, "k2-exact requires x in [0, 1/2]");
      require(s.t <= 60, "k2-exact requires t <= 60");
      return std::pow(2.0 * s.f0.cdf(s.x), std::ldexp(1.0, static_cast<int>(s.t))) / 2.0;
    }
    case BoundKind::K3Upper: {
      require(s.x >= 0.0 && s.x < 0.5, "k3-upper requires x in [0, 1/2)");
      const double f = s.f0.cdf(s.x);
      return f * std::pow(0.75 + f * f, static_cast<double>(s.t));
    }
    case BoundKind::K4Upper: {
      require(s.x > 1.0 / 3.0 && s.x < 0.5, "k4-upper requires x in (1/3, 1/2)");
      const double inner = 0.5 - s.f0.cdf(s.x / 3.0 + 1.0 / 3.0);
      return s.f0.cdf(s.x) * std::pow(1.0 - 4.0 * inner * inner * inner, static_cast<double>(s.t));
    }
    case BoundKind::K2NoisyLimit: {
      require(s.epsilon > 0.0 && s.epsilon < 1.0, "k2-noisy-limit requires epsilon in (0, 1)");
      require(s.x >= 0.0 && s.x < 0.5, "k2-noisy-limit requires x in [0, 1/2)");
      return quadratic_noisy_k2_roots(s.epsilon, s.x).lower;
    }
    case BoundKind::K3NoisyLimit: {
      require(s.epsilon > 0.0 && s.epsilon < 1.0 / 3.0,
              "k3-noisy-limit requires epsilon in (0, 1/3)");
      require(s.x >= 0.0 && s.x < 0.5, "k3-noisy-limit requires x in [0, 1/2)");
      return 1.5 * s.epsilon;
    }
    case BoundKind::K4NoisyLimit: {
      require(s.epsilon > 0.0 && s.epsilon <= 1.0, "k4-noisy-limit requires epsilon in (0, 1]");
      require(s.x > 1.0 / 3.0 && s.x < 0.5, "k4-noisy-limit requires x in (1/3, 1/2)");
      const double beta = k4_beta(s.x, s.epsilon, s.f0);
      return s.epsilon / (8.0 * beta * beta * beta);
    }
    case BoundKind::DensityRatio:
      return density_ratio(s.k);
    case BoundKind::LimitedSupportThreshold:
      return limited_support_threshold();
  }
  return 0.0;
}

double density_ratio(std::uint32_t k) {
  require_k(k, 2);
  return static_cast<double>(k) * std::pow(0.5, static_cast<double>(k) - 2.0);
}

double limited_support_threshold() { return (1.0 - std::sqrt(3.0 / 7.0)) / 2.0; }

// ---------------------------------------------------------------------------
// Iterated maps

IteratedMap IteratedMap::quadratic_noisy_k2(double epsilon, double x) {
  require(epsilon > 0.0 && epsilon < 1.0, "quadratic map requires epsilon in (0, 1)");
  require(x >= 0.0 && x < 0.5, "quadratic map requires x in [0, 1/2)");
  return IteratedMap(Kind::QuadraticNoisyK2, epsilon, x, 0.0, 2, 0.5);
}

IteratedMap IteratedMap::cubic_noisy_k3(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "cubic map requires epsilon in (0, 1)");
  return IteratedMap(Kind::CubicNoisyK3, epsilon, 0.0, 0.0, 3, 0.5);
}

IteratedMap IteratedMap::linear_noisy_k4(double epsilon, double x, double beta) {
  require(epsilon > 0.0 && epsilon <= 1.0, "linear map requires epsilon in (0, 1]");
  require(x >= 0.0 && x < 0.5, "linear map requires x in [0, 1/2)");
  require(beta > 0.0 && beta <= 0.5, "linear map requires beta in (0, 1/2]");
  return IteratedMap(Kind::LinearNoisyK4, epsilon, x, beta, 4, 1.0);
}

IteratedMap IteratedMap::large_k(std::uint32_t k) {
  require_k(k, 2);
  return IteratedMap(Kind::LargeK, 0.0, 0.0, 0.0, k, 1.0);
}

IteratedMap IteratedMap::center_mass_threshold(std::uint32_t k) {
  require_k(k, 2);
  return IteratedMap(Kind::CenterMassThreshold, 0.0, 0.0, 0.0, k, 1.0);
}

IteratedMap IteratedMap::two_spike_threshold(std::uint32_t k) {
  require_k(k, 2);
  return IteratedMap(Kind::TwoSpikeThreshold, 0.0, 0.0, 0.0, k, 0.5);
}

double IteratedMap::operator()(double p) const noexcept {
  const double k = static_cast<double>(k_);
  switch (kind_) {
    case Kind::QuadraticNoisyK2: {
      const double e = epsilon_, x = x_;
      return 2.0 * p * p * (1.0 - e) * (1.0 - e) + 4.0 * p * x * e * (1.0 - e) +
             2.0 * x * x * e * e;
    }
    case Kind::CubicNoisyK3: {
      const double q = epsilon_ / 2.0 + (1.0 - epsilon_) * p;
      return 0.75 * q + q * q * q;
    }
    case Kind::LinearNoisyK4: {
      const double c = 1.0 - 4.0 * beta_ * beta_ * beta_;
      return p * (1.0 - epsilon_) * c + epsilon_ * x_ * c;
    }
    case Kind::LargeK:
      return 0.5 + std::pow(p, k) - std::pow(1.0 - p, k) + std::pow(1.0 - 2.0 * p, k) / 2.0;
    case Kind::CenterMassThreshold:
      return std::pow(p, k) + k * std::pow(p, k - 1.0) * (1.0 - p);
    case Kind::TwoSpikeThreshold:
      return std::pow(2.0 * p, k) / 2.0 +
             k * (1.0 - 2.0 * p) * (std::pow(2.0 * p, k - 1.0) - 2.0 * std::pow(p, k - 1.0)) / 2.0;
  }
  return p;
}

std::string IteratedMap::name() const {
  switch (kind_) {
    case Kind::QuadraticNoisyK2:
      return "quadratic-noisy-k2(eps=" + format_double(epsilon_) + ", x=" + format_double(x_) + ")";
    case Kind::CubicNoisyK3:
      return "cubic-noisy-k3(eps=" + format_double(epsilon_) + ")";
    case Kind::LinearNoisyK4:
      return "linear-noisy-k4(eps=" + format_double(epsilon_) + ", x=" + format_double(x_) +
             ", beta=" + format_double(beta_) + ")";
    case Kind::LargeK:
      return "large-k(k=" + std::to_string(k_) + ")";
    case Kind::CenterMassThreshold:
      return "center-mass(k=" + std::to_string(k_) + ")";
    case Kind::TwoSpikeThreshold:
      return "two-spike(k=" + std::to_string(k_) + ")";
  }
  return "?";
}

std::vector<double> iterate_map(const IteratedMap& map, double p0, std::size_t steps) {
  const double lo = map.domain_low(), hi = map.domain_high();
  // Rounding may push an orbit a few ulps past a closed boundary.
  const double slack = 1e-12;
  if (!(p0 >= lo && p0 <= hi)) throw MapDomainError(0, p0);
  std::vector<double> orbit;
  orbit.reserve(steps + 1);
  orbit.push_back(p0);
  double p = p0;
  for (std::size_t i = 1; i <= steps; ++i) {
    p = map(p);
    if (!(p >= lo - slack && p <= hi + slack)) throw MapDomainError(i, p);
    p = std::clamp(p, lo, hi);
    orbit.push_back(p);
  }
  return orbit;
}

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

// Every map is a polynomial, so the stencil may straddle the domain ends.
double map_derivative(const IteratedMap& map, double p) {
  const double h = kDerivativeStep;
  return (map(p + h) - map(p - h)) / (2.0 * h);
}

std::vector<FixedPoint> fixed_points(const IteratedMap& map) {
  const double lo = map.domain_low(), hi = map.domain_high();
  const auto g = [&](double p) { return map(p) - p; };
  // Residuals this small at a grid point count as exact zeros.
  const double zero_band = 1e-15;

  std::vector<double> roots;
  double prev_x = lo;
  double prev_g = g(lo);
  if (std::abs(prev_g) <= zero_band) roots.push_back(lo);
  for (std::size_t i = 1; i <= kFixedPointGrid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kFixedPointGrid);
    const double gx = g(x);
    if (std::abs(gx) <= zero_band) {
      roots.push_back(x);
    } else if (std::abs(prev_g) > zero_band && (prev_g < 0.0) != (gx < 0.0)) {
      double a = prev_x, b = x, ga = prev_g;
      while (b - a > kFixedPointTolerance) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_g = gx;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              roots.end());

  std::vector<FixedPoint> out;
  for (double r : roots) {
    const double d = map_derivative(map, r);
    Stability s = Stability::Marginal;
    if (std::abs(d) < 1.0 - kMarginalBand) s = Stability::Stable;
    if (std::abs(d) > 1.0 + kMarginalBand) s = Stability::Unstable;
    out.push_back({r, d, s});
  }
  return out;
}

QuadraticRoots quadratic_noisy_k2_roots(double epsilon, double x) {
  const double e = epsilon;
  const double disc = 1.0 - 8.0 * e * x * (1.0 - e);
  require(disc >= 0.0, "quadratic map has no real fixed point");
  const double base = 1.0 - 4.0 * x * e * (1.0 - e);
  const double denom = 4.0 * (1.0 - e) * (1.0 - e);
  const double root = std::sqrt(disc);
  // Stable form of the smaller root avoids cancellation for small eps x.
  const double lower = 4.0 * x * x * e * e / (base + root);
  return {lower, (base + root) / denom};
}

std::vector<double> cubic_noisy_k3_roots(double epsilon) {
  const double e = epsilon;
  const double s = 0.25 * std::sqrt((1.0 + 15.0 * e) / std::pow(1.0 - e, 3.0));
  const double c = (1.0 + 2.0 * e) / (4.0 * (1.0 - e));
  return {s - c, -s - c, 0.5};
}

}  // namespace plurality
