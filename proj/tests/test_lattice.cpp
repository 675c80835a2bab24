#include <set>
#include <sstream>

#include "doctest.h"
#include "dasep/lattice.hpp"

using namespace dasep;

namespace {
HeightWindow line(Site lo, Site hi, int slope) {
  std::vector<Height> h;
  for (Site x = lo; x <= hi; ++x) h.push_back(slope * x);
  return HeightWindow(lo, h);
}
}  // namespace

TEST_CASE("window invariants are enforced") {
  CHECK_THROWS_AS(HeightWindow(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(HeightWindow(0, {1}), std::invalid_argument);
  CHECK_THROWS_AS(HeightWindow(0, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(HeightWindow(0, {0, 1}).at(2), std::out_of_range);
  CHECK_NOTHROW(HeightWindow(-1, {1, 0, 1}));
}

TEST_CASE("occupation and N") {
  for (int e : to_occupation(line(-3, 3, -1))) CHECK(e == 1);
  for (int e : to_occupation(line(-3, 3, 1))) CHECK(e == 0);
  const HeightWindow step(-2, {2, 1, 0, 1, 2});
  CHECK(to_occupation(step) == std::vector<int>{1, 1, 0, 0});
  CHECK(to_N(step) == std::vector<std::int64_t>{2, 1, 0, 0, 0});
  for (auto n : to_N(line(-4, 4, 1))) CHECK(n == 0);
  CHECK(step.N(-2) == 2);
}

TEST_CASE("from_occupation round-trips") {
  const HeightWindow w(-3, {1, 0, -1, 0, 1, 2});
  const auto eta = to_occupation(w);
  CHECK(from_occupation(-3, 1, eta) == w);
  CHECK_THROWS_AS(from_occupation(0, 1, eta), std::invalid_argument);
  CHECK_THROWS_AS(from_occupation(0, 0, std::vector<int>{2}), std::invalid_argument);
}

TEST_CASE("enumeration") {
  CHECK(enumerate_windows(0, 0, 1).size() == 1);
  for (std::size_t len : {4u, 10u}) {
    const auto all = enumerate_windows(-2, 4, len);
    CHECK(all.size() == (std::size_t{1} << (len - 1)));
    std::set<std::string> distinct;
    for (const auto& w : all) {
      distinct.insert(format_window(w));
      CHECK(w.x_left() == -2);
      CHECK(w[-2] == 4);
    }
    CHECK(distinct.size() == all.size());
  }
  CHECK_THROWS_AS(window_at(0, 0, 3, 4), std::out_of_range);
}

TEST_CASE("local extrema and flips") {
  HeightWindow w(0, {0, 1, 0, -1, 0});
  CHECK(w.is_local_max(1));
  CHECK(w.is_local_min(3));
  CHECK_FALSE(w.is_local_max(2));
  CHECK_FALSE(w.is_local_max(0));
  CHECK(w.flipped(1, -2) == HeightWindow(0, {0, -1, 0, -1, 0}));
  CHECK_THROWS(w.flip(2, 2));
  CHECK_THROWS(w.flip(0, -2));
}

TEST_CASE("text format") {
  const HeightWindow w(-2, {2, 1, 0, 1, 2});
  CHECK(format_window(w) == "-2 2 1 0 1 2");
  CHECK(parse_window("-2 2 1 0 1 2") == w);
  CHECK_THROWS_AS(parse_window(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_window("0 0 x"), std::invalid_argument);
  std::ostringstream os;
  os << ParticleConfig({3, 1, -4});
  CHECK(os.str() == "(3,1,-4)");
}

TEST_CASE("particle configurations") {
  const ParticleConfig x({2, 0, -1});
  CHECK(x.label(1) == 2);
  CHECK(x[2] == -1);
  CHECK(x.moved(0, 1) == ParticleConfig({3, 0, -1}));
  CHECK(x.shifted(-1) == ParticleConfig({1, -1, -2}));
  CHECK_THROWS_AS(ParticleConfig({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(ParticleConfig({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ParticleConfig(std::vector<Site>{}), std::invalid_argument);
}
