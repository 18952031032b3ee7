#include "plurality/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plurality/errors.hpp"
#include "plurality/format.hpp"

namespace plurality {

Position::Position(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ParameterError("position " + format_double(value) + " is outside [0, 1]");
  }
}

Position Position::clamped(double value) {
  if (std::isnan(value)) throw ParameterError("position is NaN");
  return Position(std::clamp(value, 0.0, 1.0));
}

// ---------------------------------------------------------------------------
// VoterModel

VoterModel::VoterModel(Kind kind, std::initializer_list<double> params)
    : kind_(kind), param_count_(params.size()) {
  std::copy(params.begin(), params.end(), params_.begin());
}

VoterModel VoterModel::uniform() { return VoterModel(Kind::Uniform01, {}); }

VoterModel VoterModel::uniform_interval(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) {
    throw ParameterError("uniform interval requires 0 <= a < b <= 1");
  }
  if (a == 0.0 && b == 1.0) return uniform();
  return VoterModel(Kind::UniformInterval, {a, b});
}

VoterModel VoterModel::beta(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw ParameterError("beta distribution requires alpha > 0 and beta > 0");
  }
  return VoterModel(Kind::Beta, {alpha, beta});
}

VoterModel VoterModel::double_weibull(double shape, double location, double scale) {
  if (!(shape > 0.0)) throw ParameterError("double Weibull requires shape > 0");
  if (!(scale > 0.0)) throw ParameterError("double Weibull requires scale > 0");
  if (!std::isfinite(location)) throw ParameterError("double Weibull location must be finite");
  VoterModel m(Kind::DoubleWeibull, {shape, location, scale});
  const double lo = m.weibull_raw_cdf(0.0);
  const double hi = m.weibull_raw_cdf(1.0);
  if (!(hi - lo > 0.0)) throw ParameterError("double Weibull has no mass inside [0, 1]");
  if (1.0 - (hi - lo) > kWeibullTruncationThreshold) {
    m.tail_low_ = lo;
    m.inner_mass_ = hi - lo;
  }
  return m;
}

double VoterModel::weibull_raw_cdf(double x) const {
  const double shape = params_[0], loc = params_[1], scale = params_[2];
  if (x >= loc) return 1.0 - 0.5 * std::exp(-std::pow((x - loc) / scale, shape));
  return 0.5 * std::exp(-std::pow((loc - x) / scale, shape));
}

double VoterModel::weibull_raw_quantile(double q) const {
  const double shape = params_[0], loc = params_[1], scale = params_[2];
  if (q <= 0.0) return -std::numeric_limits<double>::infinity();
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  if (q < 0.5) return loc - scale * std::pow(-std::log(2.0 * q), 1.0 / shape);
  if (q == 0.5) return loc;
  return loc + scale * std::pow(-std::log(2.0 * (1.0 - q)), 1.0 / shape);
}

double VoterModel::cdf(double x) const {
  if (std::isnan(x)) throw ParameterError("cdf argument is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (kind_) {
    case Kind::Uniform01:
      return x;
    case Kind::UniformInterval: {
      const double a = params_[0], b = params_[1];
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    }
    case Kind::Beta: {
      const double a = params_[0], b = params_[1];
      if (a == 2.0 && b == 2.0) return x * x * (3.0 - 2.0 * x);
      if (a == 0.5 && b == 0.5) return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
      return boost::math::ibeta(a, b, x);
    }
    case Kind::DoubleWeibull: {
      const double v = (weibull_raw_cdf(x) - tail_low_) / inner_mass_;
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

double VoterModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  switch (kind_) {
    case Kind::Uniform01:
      return p;
    case Kind::UniformInterval: {
      const double a = params_[0], b = params_[1];
      return std::clamp(a + (b - a) * p, a, b);
    }
    case Kind::Beta: {
      const double a = params_[0], b = params_[1];
      if (p == 0.0) return 0.0;
      if (p == 1.0) return 1.0;
      if (a == 2.0 && b == 2.0) {
        return std::clamp(0.5 - std::sin(std::asin(1.0 - 2.0 * p) / 3.0), 0.0, 1.0);
      }
      if (a == 0.5 && b == 0.5) {
        const double s = std::sin(std::numbers::pi * p / 2.0);
        return std::clamp(s * s, 0.0, 1.0);
      }
      return boost::math::ibeta_inv(a, b, p);
    }
    case Kind::DoubleWeibull: {
      const double v = weibull_raw_quantile(tail_low_ + p * inner_mass_);
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

double VoterModel::pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  switch (kind_) {
    case Kind::Uniform01:
      return 1.0;
    case Kind::UniformInterval: {
      const double a = params_[0], b = params_[1];
      return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    }
    case Kind::Beta: {
      const double a = params_[0], b = params_[1];
      if (a == 2.0 && b == 2.0) return 6.0 * x * (1.0 - x);
      if (a == 0.5 && b == 0.5) {
        return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
      }
      return boost::math::ibeta_derivative(a, b, x);
    }
    case Kind::DoubleWeibull: {
      const double shape = params_[0], loc = params_[1], scale = params_[2];
      const double z = std::abs(x - loc) / scale;
      const double raw = 0.5 * shape / scale * std::pow(z, shape - 1.0) *
                         std::exp(-std::pow(z, shape));
      return raw / inner_mass_;
    }
  }
  return 0.0;
}

std::string VoterModel::to_string() const {
  switch (kind_) {
    case Kind::Uniform01:
      return "uniform";
    case Kind::UniformInterval:
      return "uniform:" + format_double(params_[0]) + ":" + format_double(params_[1]);
    case Kind::Beta:
      return "beta:" + format_double(params_[0]) + ":" + format_double(params_[1]);
    case Kind::DoubleWeibull:
      return "double-weibull:" + format_double(params_[0]) + ":" + format_double(params_[1]) +
             ":" + format_double(params_[2]);
  }
  return "uniform";
}

VoterModel VoterModel::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
  if (parts.empty()) throw ParameterError("empty distribution spec");

  std::vector<double> nums;
  for (std::size_t i = 1; i < parts.size(); ++i) nums.push_back(parse_double(parts[i]));

  const std::string& name = parts[0];
  if (name == "uniform" && nums.empty()) return uniform();
  if (name == "uniform" && nums.size() == 2) return uniform_interval(nums[0], nums[1]);
  if (name == "beta" && nums.size() == 2) return beta(nums[0], nums[1]);
  if (name == "double-weibull" && nums.size() == 3) {
    return double_weibull(nums[0], nums[1], nums[2]);
  }
  throw ParameterError("unrecognised distribution spec '" + text + "'");
}

bool VoterModel::operator==(const VoterModel& other) const noexcept {
  return kind_ == other.kind_ && param_count_ == other.param_count_ &&
         std::equal(params_.begin(), params_.begin() + param_count_, other.params_.begin());
}

// ---------------------------------------------------------------------------
// InitialDistribution

InitialDistribution::InitialDistribution(VoterModel base, std::vector<Atom> atoms)
    : base_(std::move(base)), atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.position >= 0.0 && a.position <= 1.0)) {
      throw ParameterError("atom position must lie in [0, 1]");
    }
    if (!(a.mass > 0.0)) throw ParameterError("atom mass must be positive");
    atom_mass_ += a.mass;
  }
  if (atom_mass_ > 1.0 + 1e-12) throw ParameterError("atom masses sum to more than 1");
}

double InitialDistribution::cdf(double x) const {
  double v = (1.0 - atom_mass_) * base_.cdf(x);
  for (const Atom& a : atoms_) {
    if (a.position <= x) v += a.mass;
  }
  return std::min(v, 1.0);
}

double InitialDistribution::sample(RandomStream& rand) const {
  if (atoms_.empty()) return base_.sample(rand);
  const double u = rand.uniform();
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    acc += a.mass;
    if (u < acc) return a.position;
  }
  return base_.sample(rand);
}

std::string InitialDistribution::to_string() const {
  std::string s = base_.to_string();
  for (const Atom& a : atoms_) {
    s += " + atom(" + format_double(a.position) + ", " + format_double(a.mass) + ")";
  }
  return s;
}

// ---------------------------------------------------------------------------
// WinnerPool and sampling

WinnerPool::WinnerPool(std::vector<double> positions, std::uint32_t generation)
    : positions_(std::move(positions)), generation_(generation) {
  if (positions_.empty()) throw StateError("winner pool must be non-empty");
  for (double x : positions_) {
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("winner pool position outside [0, 1]");
  }
}

double pool_sample(std::span<const double> pool, bool mirror, RandomStream& rand) {
  if (pool.empty()) throw StateError("cannot sample from an empty winner pool");
  const double x = pool[rand.uniform_index(pool.size())];
  if (mirror && rand.coin()) return 1.0 - x;
  return x;
}

double pool_sample(const WinnerPool& pool, bool mirror, RandomStream& rand) {
  return pool_sample(pool.positions(), mirror, rand);
}

// ---------------------------------------------------------------------------
// EmpiricalStats

EmpiricalStats::EmpiricalStats(std::span<const double> positions)
    : sorted_(positions.begin(), positions.end()) {
  if (sorted_.empty()) throw StateError("empirical statistics need at least one position");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalStats::ecdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalStats::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  const auto n = static_cast<double>(sorted_.size());
  auto idx = static_cast<std::ptrdiff_t>(std::ceil(p * n)) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(sorted_.size()) - 1);
  return sorted_[static_cast<std::size_t>(idx)];
}

std::vector<std::uint64_t> EmpiricalStats::histogram(std::size_t bins) const {
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  std::vector<std::uint64_t> counts(bins, 0);
  for (double x : sorted_) {
    auto b = static_cast<std::size_t>(x * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  return counts;
}

double EmpiricalStats::mass_in(double a, double b) const {
  const auto lo = std::upper_bound(sorted_.begin(), sorted_.end(), a);
  const auto hi = std::lower_bound(sorted_.begin(), sorted_.end(), b);
  if (hi <= lo) return 0.0;
  return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

double EmpiricalStats::mass_in_closed(double a, double b) const {
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), a);
  const auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), b);
  if (hi <= lo) return 0.0;
  return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

double EmpiricalStats::mass_at(double x) const {
  const auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

// ---------------------------------------------------------------------------
// Modes

std::vector<double> histogram_modes(std::span<const double> counts, std::size_t window) {
  const std::size_t bins = counts.size();
  if (bins == 0) return {};
  if (window % 2 == 0) ++window;
  const std::size_t half = window / 2;

  std::vector<double> smooth(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(bins - 1, i + half);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += counts[j];
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }
  const double peak = *std::max_element(smooth.begin(), smooth.end());
  if (!(peak > 0.0)) return {};

  const double threshold = 0.5 * peak;
  const double width = 1.0 / static_cast<double>(bins);
  std::vector<double> modes;
  std::size_t i = 0;
  while (i < bins) {
    if (smooth[i] < threshold) {
      ++i;
      continue;
    }
    std::size_t best = i;
    while (i < bins && smooth[i] >= threshold) {
      // Plateaus of the smoothed curve are resolved by the raw counts.
      if (smooth[i] > smooth[best] || (smooth[i] == smooth[best] && counts[i] > counts[best])) {
        best = i;
      }
      ++i;
    }
    modes.push_back((static_cast<double>(best) + 0.5) * width);
  }
  return modes;
}

std::vector<double> histogram_modes(std::span<const std::uint64_t> counts, std::size_t window) {
  std::vector<double> as_double(counts.begin(), counts.end());
  return histogram_modes(std::span<const double>(as_double), window);
}

}  // namespace plurality
