#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "plurality/random.hpp"

using namespace plurality;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::apply(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of key and counter prefix") {
  RandomStream a(42, 3, 7);
  RandomStream b(42, 3, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c(42, 3, 8);
  RandomStream d(42, 4, 7);
  RandomStream e(42, 3, 7, StreamTag::InitialSample);
  RandomStream f(43, 3, 7);
  const auto ref = RandomStream(42, 3, 7).next_u64();
  CHECK(c.next_u64() != ref);
  CHECK(d.next_u64() != ref);
  CHECK(e.next_u64() != ref);
  CHECK(f.next_u64() != ref);
}

TEST_CASE("trial keys and split children differ") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    keys.insert(RandomStream::trial_key(7, trial));
  }
  CHECK(keys.size() == 1000);

  RandomStream parent(11, 0, 0);
  auto c0 = parent.split(0);
  auto c1 = parent.split(1);
  CHECK(c0.next_u64() != c1.next_u64());
}

TEST_CASE("uniform draws are in range with the right first two moments") {
  RandomStream r(1, 0, 0);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(sq / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
}

TEST_CASE("uniform_index covers its range evenly") {
  RandomStream r(2, 0, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.uniform_index(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("normal draws have unit variance") {
  RandomStream r(3, 0, 0);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("two 64-bit words are consumed per block") {
  RandomStream r(5, 0, 0);
  r.next_u64();
  CHECK(r.blocks_used() == 1);
  r.next_u64();
  CHECK(r.blocks_used() == 1);
  r.next_u64();
  CHECK(r.blocks_used() == 2);
}
