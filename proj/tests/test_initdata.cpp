#include <cmath>
#include <map>

#include "doctest.h"
#include "dasep/duality.hpp"
#include "dasep/initdata.hpp"
#include "dasep/sweeps.hpp"
#include "oracles.hpp"

using namespace dasep;

TEST_CASE("step data") {
  CHECK(step_heights(-2, 2) == HeightWindow(-2, {2, 1, 0, 1, 2}));
  CHECK_THROWS_AS(step_heights(1, 3), std::invalid_argument);
}

TEST_CASE("step evaluation, exact") {
  for (const ExactParams p : {ExactParams{Rational(1, 2), Rational(1, 3)}, ExactParams{Rational(3, 4), Rational(5)}}) {
    const HeightWindow w = step_heights(-7, 7);
    for (std::size_t n = 1; n <= 4; ++n)
      for (const auto& x : decreasing_tuples(-5, 3, n)) {
        const Rational z = duality_Z(ParticleConfig(x), w, p);
        const Rational expected = oracle::poch(Rational(-1 / p.alpha), p.q, static_cast<int>(n)) * oracle::step_product(x, p.q);
        CHECK(z == expected);
        CHECK(step_closed_form(ParticleConfig(x), p) == expected);
      }
  }
}

TEST_CASE("regression: multiplying Z by the prefactor does not give the product") {
  // The relation holds with Z divided by (-1/alpha;q)_n, not multiplied.
  const ExactParams p{Rational(1, 2), Rational(1, 3)};
  const HeightWindow w = step_heights(-5, 5);
  const ParticleConfig x({-1, -2});
  const Rational multiplied_lhs = q_pochhammer(Rational(-1 / p.alpha), p.q, 2) * duality_Z(x, w, p);
  CHECK(multiplied_lhs != oracle::step_product(std::vector<Site>{-1, -2}, p.q));
}

TEST_CASE("K operator") {
  const ModelParams p{0.5, 1.3};
  for (Height s = -6; s <= 6; ++s) {
    CHECK(K_apply([](Height) { return 1.0; }, s, p) == doctest::Approx(1.0));
    const auto h3 = [&](Height v) { return hermite_qinv(3, f_map(v, p) / 2, p.q); };
    const double expect = std::pow(p.q, 1.5) * h3(s);
    CHECK(std::abs(K_apply(h3, s, p) - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("eigenrelation and iteration identity") {
  const ModelParams p{0.5, 1.0};
  CHECK(eigencheck_hermite(0, -20, 20, p) == 0.0);
  for (int n = 0; n <= 8; ++n) CHECK(eigencheck_hermite(n, -20, 20, p) < 1e-9);
  CHECK(eigencheck_hermite(3, -20, 20, p, 1.0) > 1e-2);
  for (int l = 0; l <= 5; ++l)
    for (int d = 1; d <= 6; ++d) CHECK(keyit_residual(l, d, -10, 10, p) < 1e-9);
}

TEST_CASE("half-stationary sampling") {
  const ModelParams p{0.5, 1.0};
  const HeightWindow w = sample_half_stationary(-6, 4, p, 3);
  for (Site x = 1; x <= 4; ++x) CHECK(w[x] == x);
  CHECK(sample_half_stationary(-6, 4, p, 3) == w);
  CHECK_THROWS_AS(sample_half_stationary(1, 4, p, 3), std::invalid_argument);
  // Empirical E[Z] for one particle at 0 is (q - 1)/alpha.
  Rng rng(5);
  double sum = 0;
  const int m = 40000;
  for (int i = 0; i < m; ++i) sum += duality_Z(ParticleConfig({0}), sample_half_stationary(-1, 1, p, rng), p);
  CHECK(std::abs(sum / m - (-0.5)) < 0.02);
}

TEST_CASE("half-stationary expectation") {
  const ModelParams p{0.5, 1.0};
  CHECK(half_expectation_Z(ParticleConfig({1}), p) == 0.0);
  CHECK(half_expectation_Z(ParticleConfig({0}), p) == doctest::Approx(-0.5));
  const ExactParams e{Rational(1, 2), Rational(3, 2)};
  for (std::size_t n = 1; n <= 2; ++n)
    for (const auto& x : decreasing_tuples(-4, 2, n)) {
      const Rational exact = oracle::half_expectation(x, e.q, e.alpha);
      CHECK(std::abs(half_expectation_Z(ParticleConfig(x), to_float(e)) - to_double(exact)) < 1e-12);
      const Rational scaled = ipow(e.alpha, static_cast<std::int64_t>(n)) / ipow(e.q, static_cast<std::int64_t>(n * (n - 1) / 2)) * exact;
      CHECK(std::abs(to_double(scaled) - half_closed_form(ParticleConfig(x), 0.5)) < 1e-12);
    }
}

TEST_CASE("stationary weights") {
  for (double q : {0.3, 0.8})
    for (double a : {0.3, 3.0}) {
      const ModelParams p{q, a};
      CHECK(std::abs(stationary_normalizer(p) - q_pochhammer_inf_product({-1 / a, -q * a, q}, q)) < 1e-12 * stationary_normalizer(p));
      const auto ref = oracle::stationary_weights(q, a, 40);
      for (std::int64_t n = -5; n <= 5; ++n) CHECK(std::abs(m_weight(n, p) - double(ref.at(n))) < 1e-14);
      const StationaryMeasure m(p);
      CHECK(std::abs(m.total() - 1) < 1e-12);
      CHECK(m.weight(m.n_max() + 100) == 0.0);
    }
  CHECK_THROWS_AS(StationaryMeasure({0.5, 1.0}, 2.0), std::invalid_argument);
}

TEST_CASE("stationary sampling marginals") {
  const ModelParams p{0.5, 1.0};
  const StationaryMeasure even(p);
  const StationaryMeasure odd = StationaryMeasure::odd_site(p);
  Rng rng(9);
  std::map<Height, int> at1;
  const int m = 40000;
  for (int i = 0; i < m; ++i) {
    const HeightWindow w = sample_stationary(-2, 2, even, odd, rng);
    ++at1[w[1]];
    CHECK(w[2] % 2 == 0);
  }
  for (const auto& [h, c] : at1) {
    const double expected = odd.weight((h - 1) / 2);
    const double sd = std::sqrt(expected * (1 - expected) / m);
    CHECK(std::abs(double(c) / m - expected) < 5 * sd + 1e-12);
  }
  CHECK_THROWS_AS(sample_stationary(2, 1, p, 0), std::invalid_argument);
}

TEST_CASE("detailed balance") {
  const ExactParams p{Rational(1, 2), Rational(2, 3)};
  for (Height s = -6; s <= 6; ++s) {
    CHECK(detailed_balance_residual(s, p) == 0);
    // Reference: pi(peak) * down = pi(valley) * up with pi from the height chain.
    const Rational peak = oracle::up(s, p.q, p.alpha) * (1 - oracle::up(s + 1, p.q, p.alpha));
    const Rational valley = (1 - oracle::up(s, p.q, p.alpha)) * oracle::up(s - 1, p.q, p.alpha);
    CHECK(peak * oracle::rate_down_at_max(s + 1, p.q, p.alpha) == valley * oracle::rate_up_at_min(s - 1, p.q, p.alpha));
  }
  const ExactParams swapped{p.q, p.q * p.alpha};
  bool broken = false;
  for (Height s = -6; s <= 6; ++s) broken |= detailed_balance_residual(s, p, swapped) != 0;
  CHECK(broken);
  for (double q : {0.3, 0.5, 0.8})
    for (double a : {0.3, 1.0, 3.0})
      for (Height s = -6; s <= 6; ++s) CHECK(detailed_balance_relative(s, ModelParams{q, a}) < 1e-13);
}

TEST_CASE("zeta moments and orthogonality") {
  for (double q : {0.3, 0.5, 0.8}) {
    const ModelParams p{q, 0.7};
    CHECK(zeta_moment_from_measure(0, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(zeta_moment_from_measure(1, p)) < 1e-10);
    CHECK(std::abs(zeta_moment_from_measure(2, p) - (1 / q - 1)) < 1e-8);
    CHECK(zeta_moment_forced(2, q) == doctest::Approx(1 / q - 1));
    CHECK(zeta_moment_binomial(2, q) == doctest::Approx((1 / q - 1) * (1 / q - 1)));
    CHECK(std::abs(orthogonality_check(0, 0, p)) < 1e-10);
    CHECK(std::abs(orthogonality_check(0, 1, p)) < 1e-8);
    CHECK(std::abs(orthogonality_value(1, 1, p) - (1 - q) / q) < 1e-8);
    CHECK(orthogonality_norm(3, q) == doctest::Approx(oracle::poch(q, q, 3) / std::pow(q, 6)));
  }
}

TEST_CASE("stationarity experiment bookkeeping") {
  const auto rep = stationarity_experiment({0.5, 1.0}, 3, 0.5, 2000, 1, 1);
  std::uint64_t total = rep.outside;
  for (auto c : rep.counts) total += c;
  CHECK(total == 2000);
  CHECK(rep.expected.size() == rep.counts.size());
  const auto again = stationarity_experiment({0.5, 1.0}, 3, 0.5, 2000, 1, 2);
  CHECK(again.counts == rep.counts);
}
