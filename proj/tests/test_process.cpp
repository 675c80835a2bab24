#include <cmath>

#include "doctest.h"
#include "dasep/process.hpp"
#include "oracles.hpp"

using namespace dasep;

TEST_CASE("flip rates") {
  const ModelParams p{0.5, 1.0};
  const auto at_max = flip_rates(-1, 0, -1, p);
  CHECK(at_max.down == doctest::Approx(2.0 / 3.0));
  CHECK(at_max.up == 0.0);
  const auto slope = flip_rates(-1, 0, 1, p);
  CHECK(slope.down == 0.0);
  CHECK(slope.up == 0.0);
  const ModelParams tiny{0.3, 1e-12};
  CHECK(flip_rates(2, 3, 2, tiny).down == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(flip_rates(4, 3, 4, tiny).up == doctest::Approx(1.0).epsilon(1e-9));
  const ExactParams e{Rational(2, 3), Rational(5, 7)};
  for (Height s = -5; s <= 5; ++s) {
    CHECK(flip_rates(s - 1, s, s - 1, e).down == oracle::rate_down_at_max(s, e.q, e.alpha));
    CHECK(flip_rates(s + 1, s, s + 1, e).up == oracle::rate_up_at_min(s, e.q, e.alpha));
  }
}

TEST_CASE("generators annihilate constants") {
  const ModelParams p{0.4, 2.0};
  const HeightWindow w(-3, {1, 0, 1, 0, -1, 0, 1});
  CHECK(apply_dynamic_generator([](const HeightWindow&) { return 3.0; }, w, p) == 0.0);
  CHECK(asep_generator_apply([](const ParticleConfig&) { return 3.0; }, ParticleConfig({2, 1, -3}), 1.0, 0.4) == 0.0);
  const HeightWindow rigid(0, {0, 1, 2, 3});
  CHECK(apply_dynamic_generator([](const HeightWindow& v) { return double(v[1]); }, rigid, p) == 0.0);
}

TEST_CASE("generators against hand-computed values") {
  const ModelParams p{0.5, 1.0};
  const HeightWindow w(0, {0, 1, 0});
  const double g = apply_dynamic_generator([](const HeightWindow& v) { return double(v[1]); }, w, p);
  CHECK(g == doctest::Approx(-2 * 0.75));
  // One particle: dx = -1 at rate 1, +1 at rate q.
  const double a = asep_generator_apply([](const ParticleConfig& x) { return double(x[0]); }, ParticleConfig({0}), 1.0, 0.5);
  CHECK(a == doctest::Approx(-0.5));
  // Blocked jumps are removed.
  const double b = asep_generator_apply([](const ParticleConfig& x) { return double(x[0] + x[1]); }, ParticleConfig({1, 0}),
                                        1.0, 0.5);
  CHECK(b == doctest::Approx(-1 + 0.5));
}

TEST_CASE("simulation contracts") {
  const ModelParams p{0.5, 1.0};
  const HeightWindow w(-5, {5, 4, 3, 2, 1, 0, 1, 2, 3, 4, 5});
  CHECK(simulate_dynamic_asep(w, 0.0, p, 1).events.empty());
  const auto a = simulate_dynamic_asep(w, 5.0, p, 7);
  const auto b = simulate_dynamic_asep(w, 5.0, p, 7);
  const auto c = simulate_dynamic_asep(w, 5.0, p, 8);
  CHECK(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].site == b.events[i].site);
  }
  CHECK(a.final_state() == b.final_state());
  bool differ = a.events.size() != c.events.size();
  for (std::size_t i = 0; !differ && i < a.events.size(); ++i) differ = a.events[i].time != c.events[i].time;
  CHECK(differ);
  const HeightWindow end = a.final_state();
  CHECK(end[-5] == 5);
  CHECK(end[5] == 5);
  CHECK(a.state_at(0.0) == w);
  CHECK_THROWS_AS(simulate_dynamic_asep(w, -1.0, p, 1), std::invalid_argument);
  CHECK(simulate_asep(ParticleConfig({3, 1}), 1.0, 0.5, 0.0, 4) == ParticleConfig({3, 1}));
}

TEST_CASE("first flip time is exponential with the total rate") {
  const ModelParams p{0.5, 1.0};
  const HeightWindow w(0, {0, 1, 0});
  Rng rng(11);
  const int m = 40000;
  double sum = 0;
  for (int i = 0; i < m; ++i) sum += first_flip_time(w, p, rng);
  const double mean = sum / m;
  const double expected = 1 / 0.75;
  CHECK(std::abs(mean - expected) < 4 * expected / std::sqrt(m));
  CHECK(std::isinf(first_flip_time(HeightWindow(0, {0, 1, 2}), p, rng)));
}

TEST_CASE("single-particle ASEP drift") {
  const int m = 40000;
  double sum = 0;
  for (int i = 0; i < m; ++i) sum += double(simulate_asep(ParticleConfig({0}), 1.0, 0.5, 2.0, i)[0]);
  const double mean = sum / m;
  const double sd = std::sqrt(1.5 * 2.0);
  CHECK(std::abs(mean - (-1.0)) < 4 * sd / std::sqrt(m));
}
