#include <cmath>
#include <complex>

#include "doctest.h"
#include "dasep/qspecial.hpp"
#include "oracles.hpp"

using namespace dasep;

TEST_CASE("q_pochhammer examples") {
  CHECK(q_pochhammer(0.3, 0.7, 0) == 1.0);
  CHECK(q_pochhammer(0.5, 0.5, 2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(q_pochhammer(1.0, 0.4, 3) == 0.0);
  CHECK_THROWS_AS(q_pochhammer(0.5, 0.5, -1), std::invalid_argument);
}

TEST_CASE("q_pochhammer step relation is exact") {
  const Rational q(2, 7);
  const Rational a(-3, 5);
  for (int n = 0; n < 12; ++n) CHECK(q_pochhammer(a, q, n) * (1 - ipow(q, n) * a) == q_pochhammer(a, q, n + 1));
}

TEST_CASE("infinite q_pochhammer converges to the finite product") {
  const auto v = q_pochhammer_inf(0.4, 0.6);
  CHECK(std::abs(v.value - oracle::poch(0.4L, 0.6L, 400)) < 1e-13);
  CHECK(v.error_bound < 1e-12);
  CHECK(std::abs(q_pochhammer_inf_product({-2.0, -0.25, 0.5}, 0.5) -
                 static_cast<double>(oracle::triple_product(0.5L, 0.5L))) < 1e-12);
}

TEST_CASE("q_binomial") {
  CHECK(q_binomial(7, 0, 0.3) == 1.0);
  CHECK(q_binomial(2, 1, 0.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(q_binomial(3, 4, 0.5), std::invalid_argument);
  const Rational q(3, 4);
  for (int n = 1; n <= 20; ++n)
    for (int j = 1; j < n; ++j)
      CHECK(q_binomial(n, j, q) == q_binomial(n - 1, j - 1, q) + ipow(q, j) * q_binomial(n - 1, j, q));
  for (int n = 0; n <= 10; ++n)
    for (int j = 0; j <= n; ++j) CHECK(q_binomial(n, j, q) == oracle::gauss_binom(n, j, q));
}

TEST_CASE("basic_2phi1") {
  CHECK(basic_2phi1(0.3, 0.2, 0.1, 0.5, 0.0) == 1.0);
  // q-binomial theorem: 2phi1(a, 0; 0; q, z) = (az;q)_inf / (z;q)_inf.
  const double a = 0.4, q = 0.5, z = 0.3;
  const double expected = q_pochhammer_inf(a * z, q).value / q_pochhammer_inf(z, q).value;
  CHECK(std::abs(basic_2phi1(a, 0.0, 0.0, q, z) - expected) < 1e-13);
  // Terminating: a = q^{-2} stops after three terms.
  const Rational rq(1, 3);
  const Rational t = basic_2phi1(ipow(rq, -2), Rational(0), Rational(1, 7), rq, Rational(2));
  Rational direct = 0;
  for (int k = 0; k <= 2; ++k)
    direct += oracle::poch(ipow(rq, -2), rq, k) / (oracle::poch(Rational(1, 7), rq, k) * oracle::poch(rq, rq, k)) *
              ipow(Rational(2), k);
  CHECK(t == direct);
  CHECK_THROWS_AS(basic_2phi1(0.5, 0.5, 0.5, 0.5, 1.5), SeriesError);
}

TEST_CASE("hermite_qinv") {
  CHECK(hermite_qinv(0, 0.7, 0.4) == 1.0);
  CHECK(hermite_qinv(1, 0.7, 0.4) == doctest::Approx(1.4));
  CHECK(hermite_qinv(2, 1.0, 0.5) == doctest::Approx(3.0));
  for (int n = 1; n < 10; ++n)
    for (double x : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
      const double q = 0.6;
      const double hn1 = hermite_qinv(n + 1, x, q);
      const double r = 2 * x * hermite_qinv(n, x, q) - hn1 - (std::pow(q, -n) - 1) * hermite_qinv(n - 1, x, q);
      CHECK(std::abs(r) < 1e-10 * std::max(1.0, std::abs(hn1)));
    }
  const auto table = hermite_qinv_table(8, 0.37, 0.45);
  const auto ref = oracle::hermite_inv(8, 0.37L, 0.45L);
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(table[n] - static_cast<double>(ref[n])) < 1e-12 * std::max(1.0L, std::abs(ref[n])));
}

TEST_CASE("h_n(x|q) = i^{-n} H_n(ix | 1/q)") {
  using C = std::complex<double>;
  const double q = 0.55;
  for (double x : {-1.2, 0.1, 0.9})
    for (int n = 0; n <= 8; ++n) {
      const C big = hermite_q(n, C(0, x), 1 / q);
      const C rotated = big * std::pow(C(0, 1), -n);
      const double h = hermite_qinv(n, x, q);
      CHECK(std::abs(rotated.real() - h) < 1e-10 * std::max(1.0, std::abs(h)));
      CHECK(std::abs(rotated.imag()) < 1e-10 * std::max(1.0, std::abs(h)));
    }
  CHECK(hermite_q(0, 0.3, 0.5) == 1.0);
  CHECK(hermite_q(1, 0.3, 0.5) == doctest::Approx(0.6));
}

TEST_CASE("f_map") {
  CHECK(f_map(0, {0.4, 1.0}) == 0.0);
  CHECK(std::abs(f_map(3, {0.5, 0.125})) < 1e-15);
  CHECK(f_map(1, {0.25, 1.0}) == doctest::Approx(1.5));
}

TEST_CASE("summation identity") {
  CHECK(sumid_lhs(0, {0.3, 2.0}) == doctest::Approx(1.0));
  for (double a : {0.2, 1.0, 7.0}) CHECK(std::abs(sumid_lhs(1, {0.45, a}) - 1) < 1e-14);
  CHECK(std::abs(sumid_lhs(5, {0.7, 2.0}) - 1) < 1e-9);
  CHECK(std::abs(sumid_lhs(12, {0.3, 0.3}) - 1) < 1e-9);
  CHECK(sumid_lhs_exact(6, Rational(2, 3), Rational(5, 2)) == 1);
  CHECK_THROWS_AS(sumid_lhs(-1, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("generating-function route agrees with direct summation") {
  for (double q : {0.3, 0.5, 0.8})
    for (double a : {0.3, 1.0, 3.0})
      for (int n = 0; n <= 10; ++n) {
        const ModelParams p{q, a};
        const double scaled = std::pow(a, n) * std::pow(q, -0.5 * n * (n + 1)) * sumid_generating_closed_form(n, p);
        CHECK(std::abs(scaled - sumid_lhs(n, p)) < 1e-8);
      }
}
