#include "dasep/qspecial.hpp"

#include <cmath>

namespace dasep {

SeriesValue q_pochhammer_inf(double a, double q, const SeriesControl& ctl) {
  ctl.validate();
  if (!(std::abs(q) < 1)) throw SeriesError("q_pochhammer_inf: diverges for |q| >= 1");
  SeriesValue out;
  double product = 1;
  double qk_a = a;
  for (int k = 0; k < ctl.max_terms; ++k) {
    if (std::abs(qk_a) < ctl.tail_tolerance) {
      // Remaining factors (1 - q^j a), j >= k: |log| <= sum |q^j a| / (1 - |q^j a|).
      const double tail = std::abs(qk_a) / (1 - std::abs(q)) / (1 - std::abs(qk_a));
      out.value = product;
      out.error_bound = std::abs(product) * std::expm1(tail);
      out.terms = k;
      return out;
    }
    product *= 1 - qk_a;
    qk_a *= q;
  }
  throw SeriesError("q_pochhammer_inf: max_terms exceeded");
}

double q_pochhammer_inf_product(std::initializer_list<double> as, double q,
                                const SeriesControl& ctl) {
  double product = 1;
  for (double a : as) product *= q_pochhammer_inf(a, q, ctl).value;
  return product;
}

double f_map(std::int64_t s, const ModelParams& params) {
  const double half = std::pow(params.q, 0.5 * static_cast<double>(s));
  const double root_alpha = std::sqrt(params.alpha);
  return root_alpha / half - half / root_alpha;
}

double sumid_lhs(int n, const ModelParams& params) {
  if (n < 0) throw std::invalid_argument("sumid_lhs: n must be non-negative");
  validate(params);
  const Extended q = params.q;
  const Extended alpha = params.alpha;
  const Extended root_q = sqrt(q);
  const Extended root_alpha = sqrt(alpha);
  const Extended f1 = root_alpha / root_q - root_q / root_alpha;
  const auto h = hermite_qinv_table<Extended>(n, f1 / 2, q);
  const Extended step = 1 / (root_q * root_alpha);
  Extended sum = 0;
  Extended power = 1;  // (q alpha)^{-j/2}
  for (int j = 0; j <= n; ++j) {
    Extended term = q_binomial<Extended>(n, j, q) * ipow(root_q, static_cast<std::int64_t>(j) * (j + 1)) * power *
                    h[static_cast<std::size_t>(j)];
    if (j % 2 != 0) term = -term;
    sum += term;
    power *= step;
  }
  return to_double(ipow(alpha, n) / ipow(root_q, static_cast<std::int64_t>(n) * (n + 1)) * sum);
}

Rational sumid_lhs_exact(int n, const Rational& Q, const Rational& A) {
  if (n < 0) throw std::invalid_argument("sumid_lhs_exact: n must be non-negative");
  if (Q <= 0 || Q >= 1 || A <= 0) throw std::invalid_argument("sumid_lhs_exact: need 0 < Q < 1, A > 0");
  const Rational q = Q * Q;
  const Rational alpha = A * A;
  const Rational f1 = A / Q - Q / A;  // f(1) with q^{1/2} = Q, alpha^{1/2} = A
  const auto h = hermite_qinv_table<Rational>(n, f1 / 2, q);
  Rational sum = 0;
  for (int j = 0; j <= n; ++j) {
    Rational term = q_binomial<Rational>(n, j, q) * ipow(Q, static_cast<std::int64_t>(j) * (j + 1)) *
                    ipow(Rational(Q * A), -j) * h[static_cast<std::size_t>(j)];
    if (j % 2 != 0) term = -term;
    sum += term;
  }
  return ipow(alpha, n) / ipow(Q, static_cast<std::int64_t>(n) * (n + 1)) * sum;
}

double sumid_generating_closed_form(int n, const ModelParams& params) {
  if (n < 0) throw std::invalid_argument("sumid_generating_closed_form: n must be non-negative");
  validate(params);
  const Extended q = params.q;
  const Extended base = 1 / q;
  const Extended qn = ipow(q, n);
  const Extended c = -qn / Extended(params.alpha);
  return to_double(q_pochhammer(c, base, n) * basic_2phi1(qn, Extended(0), c, base, base));
}

}  // namespace dasep
