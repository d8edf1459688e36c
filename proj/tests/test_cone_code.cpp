#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "deepcore/cone_code.hpp"

using deepcore::ConeCode;

TEST_CASE("cone code round-trips through its string form") {
  const ConeCode code = ConeCode::fromString("1011001");
  CHECK(code.size() == 7);
  CHECK(code.toString() == "1011001");
  CHECK(code.test(0));
  CHECK_FALSE(code.test(1));
  CHECK(code.countOnes() == 4);
}

TEST_CASE("flip toggles exactly one bit") {
  ConeCode code = ConeCode::fromString("0000");
  code.flip(2);
  CHECK(code.toString() == "0010");
  code.flip(2);
  CHECK(code.toString() == "0000");
  CHECK(code.withFlipped(0).toString() == "1000");
  CHECK(code.toString() == "0000");
}

TEST_CASE("complement flips every bit and leaves the length intact") {
  const ConeCode code = ConeCode::fromString("10110");
  const ConeCode mirror = code.complemented();
  CHECK(mirror.toString() == "01001");
  CHECK(mirror.complemented() == code);
  CHECK(code.countOnes() + mirror.countOnes() == code.size());
}

TEST_CASE("complement stays clean across the 64-bit word boundary") {
  ConeCode code(70);
  code.set(0, true);
  code.set(69, true);
  const ConeCode mirror = code.complemented();
  CHECK(mirror.size() == 70);
  CHECK(mirror.countOnes() == 68);
  CHECK_FALSE(mirror.test(0));
  CHECK_FALSE(mirror.test(69));
  CHECK(mirror.complemented() == code);
}

TEST_CASE("difference iteration reports exactly the differing positions") {
  const ConeCode a = ConeCode::fromString("110010");
  const ConeCode b = ConeCode::fromString("010011");
  std::vector<std::size_t> diff;
  a.forEachDifference(b, [&](std::size_t i) { diff.push_back(i); });
  CHECK(diff == std::vector<std::size_t>{0, 5});
  CHECK(a.hammingDistance(b) == 2);
  CHECK(a.hammingDistance(a) == 0);
}

TEST_CASE("ordering is a strict total order usable for set storage") {
  std::set<ConeCode> seen;
  seen.insert(ConeCode::fromString("01"));
  seen.insert(ConeCode::fromString("10"));
  seen.insert(ConeCode::fromString("01"));
  CHECK(seen.size() == 2);
  CHECK(seen.count(ConeCode::fromString("10")) == 1);
}
