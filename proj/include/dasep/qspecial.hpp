#pragma once

// q-deformed special functions: q-Pochhammer symbols, q-binomials, the basic
// hypergeometric series 2phi1 and the continuous q^{-1}-Hermite / q-Hermite
// polynomials.  Everything here is a pure function of its arguments.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dasep/numeric.hpp"
#include "dasep/params.hpp"

namespace dasep {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite q-Pochhammer symbol (a;q)_n = prod_{k<n} (1 - q^k a).
template <class Real>
Real q_pochhammer(const Real& a, const Real& q, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("q_pochhammer: n must be non-negative");
  Real result{1};
  Real qk{1};
  for (std::int64_t k = 0; k < n; ++k) {
    result *= Real{1} - qk * a;
    qk *= q;
  }
  return result;
}

/// Value of a truncated infinite product or series with a bound on what was dropped.
struct SeriesValue {
  double value = 0;
  double error_bound = 0;
  int terms = 0;
};

/// (a;q)_infinity.  Truncates once |q^k a| < tail_tolerance; the dropped factors
/// differ from 1 by at most exp(sum of the geometric tail) - 1 in relative terms.
SeriesValue q_pochhammer_inf(double a, double q, const SeriesControl& ctl = {});

/// Product of infinite q-Pochhammer symbols (a_1,...,a_k;q)_infinity.
double q_pochhammer_inf_product(std::initializer_list<double> as, double q,
                                const SeriesControl& ctl = {});

/// Gaussian binomial via the product form prod_{i=1}^{j} (1-q^{n-j+i})/(1-q^i).
template <class Real>
Real q_binomial(int n, int j, const Real& q) {
  if (n < 0 || j < 0 || j > n) throw std::invalid_argument("q_binomial: need 0 <= j <= n");
  if (j > n - j) j = n - j;
  Real num{1};
  Real den{1};
  for (int i = 1; i <= j; ++i) {
    num *= Real{1} - ipow(q, n - j + i);
    den *= Real{1} - ipow(q, i);
  }
  return num / den;
}

namespace detail {

inline bool vanishes(double v, double reference) {
  return std::abs(v) <= 256 * std::numeric_limits<double>::epsilon() * (1 + std::abs(reference));
}
inline bool vanishes(long double v, long double reference) {
  return std::abs(v) <= 256 * std::numeric_limits<long double>::epsilon() * (1 + std::abs(reference));
}
inline bool vanishes(const Rational& v, const Rational&) { return v == 0; }
inline bool vanishes(const Extended& v, const Extended& reference) {
  return abs(v) <= Extended("1e-80") * (1 + abs(reference));
}

inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(long double v) { return static_cast<double>(std::abs(v)); }
inline double abs_value(const Rational& v) { return magnitude(v); }
inline double abs_value(const Extended& v) { return magnitude(v); }

}  // namespace detail

/// 2phi1(a, b; c; q, z) = sum_n (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n.
///
/// A factor 1 - a q^k (or 1 - b q^k) that vanishes terminates the series; the
/// base may then be any non-zero value.  Otherwise |q| < 1 and |z| < 1 are
/// required and the sum stops once a term drops below tail_tolerance relative
/// to the partial sum.
template <class Real>
Real basic_2phi1(const Real& a, const Real& b, const Real& c, const Real& q, const Real& z,
                 const SeriesControl& ctl = {}) {
  ctl.validate();
  Real sum{1};
  Real term{1};
  Real qk{1};
  const bool convergent = detail::abs_value(q) < 1 && detail::abs_value(z) < 1;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const Real na = Real{1} - a * qk;
    const Real nb = Real{1} - b * qk;
    if (detail::vanishes(na, a * qk) || detail::vanishes(nb, b * qk)) return sum;
    const Real dc = Real{1} - c * qk;
    if (detail::vanishes(dc, c * qk))
      throw SeriesError("basic_2phi1: denominator (c;q)_n vanishes before termination");
    qk *= q;
    term = term * na * nb / (dc * (Real{1} - qk)) * z;
    sum += term;
    if (convergent && detail::abs_value(term) <= ctl.tail_tolerance * (1 + detail::abs_value(sum)))
      return sum;
  }
  if (!convergent) throw SeriesError("basic_2phi1: non-terminating series does not converge");
  throw SeriesError("basic_2phi1: max_terms exceeded");
}

namespace detail {
template <class T>
struct accumulator {
  using type = T;
};
template <>
struct accumulator<double> {
  using type = long double;
};
template <>
struct accumulator<std::complex<double>> {
  using type = std::complex<long double>;
};
}  // namespace detail

/// Continuous q^{-1}-Hermite polynomial h_n(x|q) from
/// 2x h_n = h_{n+1} + (q^{-n} - 1) h_{n-1}, h_{-1} = 0, h_0 = 1.
/// Double inputs are accumulated in long double.
template <class Real>
Real hermite_qinv(int n, const Real& x, const Real& q) {
  if (n < 0) throw std::invalid_argument("hermite_qinv: n must be non-negative");
  using Acc = typename detail::accumulator<Real>::type;
  const Acc ax = static_cast<Acc>(x);
  const Acc aq = static_cast<Acc>(q);
  Acc prev{0};
  Acc cur{1};
  Acc q_inv_k{1};  // q^{-k}
  for (int k = 0; k < n; ++k) {
    Acc next = Acc{2} * ax * cur - (q_inv_k - Acc{1}) * prev;
    prev = cur;
    cur = next;
    q_inv_k /= aq;
  }
  return static_cast<Real>(cur);
}

/// All of h_0..h_n at one point.
template <class Real>
std::vector<Real> hermite_qinv_table(int n, const Real& x, const Real& q) {
  if (n < 0) throw std::invalid_argument("hermite_qinv_table: n must be non-negative");
  using Acc = typename detail::accumulator<Real>::type;
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  const Acc ax = static_cast<Acc>(x);
  const Acc aq = static_cast<Acc>(q);
  Acc prev{0};
  Acc cur{1};
  Acc q_inv_k{1};
  out.push_back(static_cast<Real>(cur));
  for (int k = 0; k < n; ++k) {
    Acc next = Acc{2} * ax * cur - (q_inv_k - Acc{1}) * prev;
    prev = cur;
    cur = next;
    q_inv_k /= aq;
    out.push_back(static_cast<Real>(cur));
  }
  return out;
}

/// Continuous q-Hermite polynomial H_n(x|q) from
/// 2x H_n = H_{n+1} + (1 - q^n) H_{n-1}.  X may be complex.
template <class X, class Real>
X hermite_q(int n, const X& x, const Real& q) {
  if (n < 0) throw std::invalid_argument("hermite_q: n must be non-negative");
  using Acc = typename detail::accumulator<X>::type;
  using AccReal = typename detail::accumulator<Real>::type;
  const Acc ax = static_cast<Acc>(x);
  const AccReal aq = static_cast<AccReal>(q);
  Acc prev{0};
  Acc cur{1};
  AccReal qk{1};
  for (int k = 0; k < n; ++k) {
    Acc next = Acc{2} * ax * cur - Acc(AccReal{1} - qk) * prev;
    prev = cur;
    cur = next;
    qk *= aq;
  }
  return static_cast<X>(cur);
}

/// f(s) = q^{-s/2} alpha^{1/2} - q^{s/2} alpha^{-1/2}.
double f_map(std::int64_t s, const ModelParams& params);

/// The alternating sum
///   alpha^n q^{-n(n+1)/2} sum_j (-1)^j [n j]_q q^{j(j+1)/2} (q alpha)^{-j/2} h_j(f(1)/2 | q),
/// which equals 1 for every n.  Evaluated in Extended precision since the
/// prefactor amplifies cancellation in the sum.
double sumid_lhs(int n, const ModelParams& params);

/// Same sum evaluated exactly with q = Q^2 and alpha = A^2, so every half power
/// becomes an integer power of Q or A.
Rational sumid_lhs_exact(int n, const Rational& Q, const Rational& A);

/// Closed form of the terminating generating function at the point where it
/// reproduces the alternating sum without the alpha^n q^{-n(n+1)/2} prefactor:
///   (-q^n/alpha; 1/q)_n * 2phi1(q^n, 0; -q^n/alpha; 1/q, 1/q).
double sumid_generating_closed_form(int n, const ModelParams& params);

}  // namespace dasep
