#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "plurality/distributions.hpp"
#include "plurality/errors.hpp"

using namespace plurality;

namespace {

// Independently computed: (1 - sqrt(3/7)) / 2 and its preimage under U(1/4, 3/4).
constexpr double kEll = 0.1726731646460114;
constexpr double kEllPreimage = 0.3363365823230057;

std::vector<VoterModel> named_models() {
  return {VoterModel::uniform(), VoterModel::beta(2, 2), VoterModel::beta(0.5, 0.5),
          VoterModel::double_weibull(4, 0.5, 0.3)};
}

// Kolmogorov-Smirnov statistic of a sample against an analytic cdf.
double ks_statistic(std::vector<double> xs, const VoterModel& m) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = m.cdf(xs[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace

TEST_CASE("positions reject values outside the unit interval") {
  CHECK_THROWS_AS(Position(-0.1), ParameterError);
  CHECK_THROWS_AS(Position(1.5), ParameterError);
  CHECK_THROWS_AS(Position(std::nan("")), ParameterError);
  CHECK(Position(0.0).value() == 0.0);
  CHECK(Position::clamped(1.7).value() == 1.0);
}

TEST_CASE("symmetric models put half their mass below 1/2") {
  for (const auto& m : named_models()) {
    CAPTURE(m.to_string());
    CHECK(m.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.cdf(0.0) == 0.0);
    CHECK(m.cdf(1.0) == 1.0);
  }
}

TEST_CASE("closed-form cdf and quantile values") {
  CHECK(VoterModel::beta(2, 2).cdf(0.4) == doctest::Approx(0.352).epsilon(1e-15));
  const auto interval = VoterModel::uniform_interval(0.25, 0.75);
  CHECK(std::abs(interval.cdf(kEllPreimage) - kEll) < 1e-13);
  CHECK(std::abs(interval.quantile(kEll) - kEllPreimage) < 1e-13);
  CHECK(VoterModel::uniform().quantile(0.25) == 0.25);
  CHECK(VoterModel::beta(2, 2).quantile(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(VoterModel::beta(0.5, 0.5).quantile(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("general beta shapes agree with the closed forms") {
  // (3, 3): cdf = 10x^3 - 15x^4 + 6x^5.
  const auto m = VoterModel::beta(3, 3);
  for (double x : {0.1, 0.3, 0.5, 0.8}) {
    const double ref = 10 * std::pow(x, 3) - 15 * std::pow(x, 4) + 6 * std::pow(x, 5);
    CHECK(m.cdf(x) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(m.quantile(m.cdf(x)) == doctest::Approx(x).epsilon(1e-10));
  }
}

TEST_CASE("cdf is monotone and quantile inverts it") {
  const std::vector<VoterModel> models = {
      VoterModel::uniform(), VoterModel::uniform_interval(0.25, 0.75), VoterModel::beta(2, 2),
      VoterModel::beta(0.5, 0.5), VoterModel::double_weibull(4, 0.5, 0.3)};
  for (const auto& m : models) {
    CAPTURE(m.to_string());
    double prev = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      const double f = m.cdf(x);
      REQUIRE(f >= prev);
      prev = f;
      // cdf o quantile is exact up to rounding everywhere.
      REQUIRE(std::abs(m.cdf(m.quantile(f)) - f) < 1e-10);
      // quantile o cdf is an identity wherever the density is not vanishing.
      if (i > 0 && i < 10000 && m.pdf(x) > 1e-3) REQUIRE(std::abs(m.quantile(f) - x) < 1e-8);
    }
  }
}

TEST_CASE("samples pass a one-sample KS test at significance 0.001") {
  const std::vector<VoterModel> models = {
      VoterModel::uniform(), VoterModel::uniform_interval(0.25, 0.75), VoterModel::beta(2, 2),
      VoterModel::beta(0.5, 0.5), VoterModel::double_weibull(4, 0.5, 0.3)};
  const int n = 100000;
  const double critical = 1.9495 / std::sqrt(static_cast<double>(n));
  std::uint32_t idx = 0;
  for (const auto& m : models) {
    CAPTURE(m.to_string());
    RandomStream r(99, 0, idx++);
    std::vector<double> xs(n);
    for (double& x : xs) {
      x = m.sample(r);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
    }
    CHECK(ks_statistic(xs, m) < critical);
  }
}

TEST_CASE("sample moments") {
  RandomStream r(5, 0, 0);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += VoterModel::uniform().sample(r);
  CHECK(std::abs(sum / n - 0.5) < 0.002);

  const auto beta = VoterModel::beta(2, 2);
  int below = 0;
  for (int i = 0; i < n; ++i) below += beta.sample(r) <= 0.5;
  CHECK(std::abs(below / static_cast<double>(n) - 0.5) < 0.002);

  const auto interval = VoterModel::uniform_interval(0.25, 0.75);
  for (int i = 0; i < 10000; ++i) {
    const double x = interval.sample(r);
    REQUIRE(x > 0.25);
    REQUIRE(x < 0.75);
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(VoterModel::beta(0, 1), ParameterError);
  CHECK_THROWS_AS(VoterModel::beta(1, -2), ParameterError);
  CHECK_THROWS_AS(VoterModel::double_weibull(4, 0.5, 0), ParameterError);
  CHECK_THROWS_AS(VoterModel::uniform_interval(0.6, 0.4), ParameterError);
  CHECK_THROWS_AS(VoterModel::parse("gamma:1:2"), ParameterError);
}

TEST_CASE("distribution specs round-trip through text") {
  for (const auto& m : named_models()) CHECK(VoterModel::parse(m.to_string()) == m);
  CHECK(VoterModel::parse("uniform:0.25:0.75") == VoterModel::uniform_interval(0.25, 0.75));
}

TEST_CASE("truncated double Weibull is renormalized onto [0, 1]") {
  const auto m = VoterModel::double_weibull(4, 0.5, 0.3);
  CHECK(m.cdf(1e-12) >= 0.0);
  CHECK(m.cdf(1.0 - 1e-12) <= 1.0);
  // Symmetric truncation leaves the median in place.
  CHECK(m.quantile(0.5) == doctest::Approx(0.5));
}

TEST_CASE("pool sampling") {
  RandomStream r(8, 0, 0);
  const std::vector<double> centre = {0.5, 0.5, 0.5};
  for (int i = 0; i < 100; ++i) {
    CHECK(pool_sample(centre, true, r) == 0.5);
    CHECK(pool_sample(centre, false, r) == 0.5);
  }

  const std::vector<double> single = {0.3};
  int mirrored = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = pool_sample(single, true, r);
    REQUIRE((x == 0.3 || x == 1.0 - 0.3));
    mirrored += x != 0.3;
  }
  CHECK(std::abs(mirrored / static_cast<double>(n) - 0.5) < 0.01);

  const std::vector<double> pair = {0.2, 0.8};
  int low = 0;
  for (int i = 0; i < n; ++i) low += pool_sample(pair, false, r) == 0.2;
  CHECK(std::abs(low / static_cast<double>(n) - 0.5) < 0.01);

  CHECK_THROWS_AS(pool_sample(std::vector<double>{}, false, r), StateError);
  CHECK_THROWS_AS(WinnerPool({}, 0), StateError);
}

TEST_CASE("mirrored pool draws are reflection invariant") {
  RandomStream r(9, 0, 0);
  std::vector<double> pool;
  RandomStream src(10, 0, 0);
  for (int i = 0; i < 1000; ++i) pool.push_back(VoterModel::beta(2, 5).sample(src));
  const int n = 100000;
  std::vector<double> draws(n);
  for (double& x : draws) x = pool_sample(pool, true, r);
  const EmpiricalStats stats(draws);
  for (double a = 0.0; a < 0.5; a += 0.05) {
    const double b = a + 0.05;
    const double left = stats.mass_in(a, b);
    const double right = stats.mass_in(1.0 - b, 1.0 - a);
    const double p = 0.5 * (left + right);
    const double se = std::sqrt(2.0 * p * (1.0 - p) / n) + 1e-12;
    CHECK(std::abs(left - right) < 4.0 * se);
  }
}

TEST_CASE("empirical statistics") {
  const std::vector<double> xs = {0.1, 0.2, 0.2, 0.5, 0.9};
  const EmpiricalStats s(xs);
  CHECK(s.ecdf(0.0) == 0.0);
  CHECK(s.ecdf(0.2) == doctest::Approx(0.6));
  CHECK(s.ecdf(1.0) == 1.0);
  CHECK(s.quantile(0.0) == 0.1);
  CHECK(s.quantile(0.4) == 0.2);
  CHECK(s.quantile(0.41) == 0.2);
  CHECK(s.quantile(0.61) == 0.5);
  CHECK(s.quantile(1.0) == 0.9);
  for (double x : xs) CHECK(s.quantile(s.ecdf(x)) <= x);
  CHECK(s.mass_in(0.1, 0.5) == doctest::Approx(0.4));
  CHECK(s.mass_in_closed(0.1, 0.5) == doctest::Approx(0.8));
  CHECK(s.mass_at(0.2) == doctest::Approx(0.4));
  const auto h = s.histogram(10);
  CHECK(h[1] == 1);
  CHECK(h[2] == 2);
  CHECK(h[9] == 1);
  std::uint64_t total = 0;
  for (auto c : h) total += c;
  CHECK(total == xs.size());
  CHECK(EmpiricalStats(std::vector<double>{1.0}).histogram(4)[3] == 1);
}

TEST_CASE("initial distribution with atoms") {
  const InitialDistribution f0(VoterModel::uniform(), {{0.5, 0.9}});
  CHECK(f0.cdf(0.49) == doctest::Approx(0.1 * 0.49));
  CHECK(f0.cdf(0.5) == doctest::Approx(0.95));
  RandomStream r(12, 0, 0);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += f0.sample(r) == 0.5;
  CHECK(std::abs(hits / static_cast<double>(n) - 0.9) < 0.005);
  CHECK_THROWS_AS(InitialDistribution(VoterModel::uniform(), {{0.5, 0.7}, {0.2, 0.7}}),
                  ParameterError);
}

TEST_CASE("histogram modes") {
  std::vector<std::uint64_t> two(200, 0);
  for (int i = 45; i <= 54; ++i) two[i] = 100;
  for (int i = 145; i <= 154; ++i) two[i] = 90;
  const auto modes = histogram_modes(two);
  REQUIRE(modes.size() == 2);
  CHECK(modes[0] == doctest::Approx(0.25).epsilon(0.05));
  CHECK(modes[1] == doctest::Approx(0.75).epsilon(0.05));

  std::vector<std::uint64_t> one(200, 0);
  one[100] = 1000;
  one[20] = 10;  // below half the peak: not a mode
  const auto single = histogram_modes(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(0.5025));
}
