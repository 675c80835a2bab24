#pragma once

// Step, half-stationary and stationary initial data: samplers, the kernel K,
// exact transfer-operator expectations and identities of the stationary measure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dasep/lattice.hpp"
#include "dasep/params.hpp"
#include "dasep/process.hpp"
#include "dasep/qspecial.hpp"
#include "dasep/rng.hpp"

namespace dasep {

/// s_x = |x| on [x_left, x_right]; requires x_left <= 0 <= x_right.
HeightWindow step_heights(Site x_left, Site x_right);

/// Probability that the half-stationary chain steps up, s_{x-1} = s_x + 1.
template <class Real>
Real up_probability(Height s, const Params<Real>& p) {
  const Real qs = ipow(p.q, s);
  return qs / (p.alpha + qs);
}

/// 1 - up_probability, written without the subtraction.
template <class Real>
Real down_probability(Height s, const Params<Real>& p) {
  return p.alpha / (p.alpha + ipow(p.q, s));
}

/// (K f)(s) = q^s/(alpha+q^s) f(s+1) + alpha/(alpha+q^s) f(s-1).
template <class Real, class F>
Real K_apply(F&& f, Height s, const Params<Real>& p) {
  const Real qs = ipow(p.q, s);
  return qs / (p.alpha + qs) * Real(f(s + 1)) + p.alpha / (p.alpha + qs) * Real(f(s - 1));
}

/// s_x = x for x >= 1; below, the chain with up-probability q^s/(alpha+q^s).
HeightWindow sample_half_stationary(Site x_left, Site x_right, const ModelParams& p, std::uint64_t seed);
HeightWindow sample_half_stationary(Site x_left, Site x_right, const ModelParams& p, Rng& rng);

/// E[Z_n(x; s)] under half-stationary data, by propagating the exact law of s_x
/// from s_1 = 1 leftwards.  No truncation.
double half_expectation_Z(const ParticleConfig& x, const ModelParams& p);

/// prod_{k=1}^n (q^{(1-x_k) 1{x_k <= 1}} - q^{k-1}).
double half_closed_form(const ParticleConfig& x, double q);

/// prod_{k=1}^n (q^{-x_k 1{x_k <= 0}} - q^{k-1}).
template <class Real>
Real step_product(const ParticleConfig& x, const Real& q) {
  Real out{1};
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    out *= ipow(q, xk <= 0 ? -xk : 0) - ipow(q, static_cast<std::int64_t>(k) - 1);
  }
  return out;
}

/// Z_n on step data in closed form: (-1/alpha; q)_n times step_product.
template <class Real>
Real step_closed_form(const ParticleConfig& x, const Params<Real>& p) {
  return q_pochhammer(Real(Real{-1} / p.alpha), p.q, static_cast<std::int64_t>(x.size())) * step_product(x, p.q);
}

/// max over s in [s_lo, s_hi] of
///   |K h_n(f(.)/2) - q^{n * eigen_power} h_n(f(s)/2)| / max(1, |h_n(f(s)/2)|).
/// The true relation has eigen_power = 1/2.
double eigencheck_hermite(int n, Height s_lo, Height s_hi, const ModelParams& p, double eigen_power = 0.5);

/// max over s in [s_lo, s_hi] of the relative residual of
///   K^d [f h_l(f/2)](s) = q^{d(l+1)/2} h_{l+1}(f(s)/2) + (q^{-l} - 1) q^{d(l-1)/2} h_{l-1}(f(s)/2),
/// with K^d applied by exact iteration over the 2d+1 reachable heights.
double keyit_residual(int l, int d, Height s_lo, Height s_hi, const ModelParams& p);

/// m_n = alpha^{-2n} q^{n(2n-1)} (1 + alpha^{-1} q^{2n}) / (-1/alpha, -q alpha, q; q)_inf.
double m_weight(std::int64_t n, const ModelParams& p);
double stationary_normalizer(const ModelParams& p);

/// Sums term(n) over n in Z outward from 0 until both tails fall below
/// tolerance * max(1, |partial sum|) for several consecutive n.  Terms are
/// assumed to decay eventually (super-geometrically here).
template <class Term>
long double sum_over_integers(Term&& term, long double tolerance = 1e-22L, std::int64_t max_n = 100'000) {
  long double sum = term(0);
  int quiet_up = 0;
  int quiet_down = 0;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    const long double up = term(n);
    const long double down = term(-n);
    sum += up + down;
    const long double scale = std::max(1.0L, sum < 0 ? -sum : sum);
    quiet_up = (std::abs(up) < tolerance * scale) ? quiet_up + 1 : 0;
    quiet_down = (std::abs(down) < tolerance * scale) ? quiet_down + 1 : 0;
    if (quiet_up >= 3 && quiet_down >= 3) return sum;
  }
  throw SeriesError("sum_over_integers: tail did not decay");
}

/// One-point law of s_0 / 2 under the stationary data, truncated to the
/// integers whose weight is at least cut_ratio times the largest weight.
class StationaryMeasure {
 public:
  explicit StationaryMeasure(const ModelParams& p, double cut_ratio = 1e-16);

  /// The same family with alpha replaced by alpha/q (law of (s_1 - 1)/2).
  static StationaryMeasure odd_site(const ModelParams& p, double cut_ratio = 1e-16);

  const ModelParams& params() const { return params_; }
  double normalizer() const { return normalizer_; }
  std::int64_t n_min() const { return n_min_; }
  std::int64_t n_max() const { return n_max_; }
  std::span<const double> weights() const { return weights_; }
  /// m_n inside the cut, 0 outside.
  double weight(std::int64_t n) const;
  double total() const;

  /// Inverse-CDF draw of n.
  std::int64_t sample(Rng& rng) const;

 private:
  ModelParams params_;
  double normalizer_ = 0;
  std::int64_t n_min_ = 0;
  std::int64_t n_max_ = 0;
  std::vector<double> weights_;
  std::vector<double> cdf_;
};

/// Both displayed marginal-propagation identities, as the largest absolute
/// residual over n in [n_lo, n_hi].
struct MarginalResiduals {
  double even_to_odd;  // m~_n against (m_n, m_{n+1})
  double odd_to_even;  // m_n against (m~_{n-1}, m~_n)
};
MarginalResiduals marginal_propagation_residuals(const ModelParams& p, std::int64_t n_lo, std::int64_t n_hi);

/// Window with s_{x_right} drawn from its stationary marginal and the kernel
/// run leftwards.
HeightWindow sample_stationary(Site x_left, Site x_right, const ModelParams& p, std::uint64_t seed);
HeightWindow sample_stationary(Site x_left, Site x_right, const StationaryMeasure& even, const StationaryMeasure& odd,
                               Rng& rng);

/// |rate(s-1 -> s+1) / rate(s+1 -> s-1) - P(peak) / P(valley)|, where the
/// peak (s, s+1, s) and valley (s, s-1, s) probabilities come from the kernel
/// with parameters `measure`.  Vanishes when measure == rates.
template <class Real>
Real detailed_balance_residual(Height s, const Params<Real>& rates, const Params<Real>& measure) {
  const Real up = flip_rates(s, s - 1, s, rates).up;
  const Real down = flip_rates(s, s + 1, s, rates).down;
  const Real peak = up_probability(s, measure) * down_probability(s + 1, measure);
  const Real valley = down_probability(s, measure) * up_probability(s - 1, measure);
  const Real r = up / down - peak / valley;
  return r < 0 ? Real(-r) : r;
}

template <class Real>
Real detailed_balance_residual(Height s, const Params<Real>& p) {
  return detailed_balance_residual(s, p, p);
}

/// Float residual divided by max(1, P(peak)/P(valley)); the ratio grows
/// geometrically for negative s.
double detailed_balance_relative(Height s, const ModelParams& p);

/// sum_n m_n x_n^k with x_n = f(2n) = alpha^{1/2} q^{-n} - alpha^{-1/2} q^n.
double zeta_moment_from_measure(int k, const ModelParams& p);

/// k-th moment of any orthogonality probability measure for the three-term
/// recursion x h_l(x/2) = h_{l+1} + (q^{-l} - 1) h_{l-1}.
double zeta_moment_forced(int k, double q);

/// (1 - q^{-1})^{k/2} sum_{i=-k/2}^{k/2} C(k, k/2+i) (-1)^i q^{-i(i-1)/2} for even k, 0 for odd k.
double zeta_moment_binomial(int k, double q);

/// sum_n m_n h_a(f(2n)/2) h_b(f(2n)/2).
double orthogonality_value(int a, int b, const ModelParams& p);
/// (q;q)_a / q^{a(a+1)/2}.
double orthogonality_norm(int a, double q);
/// orthogonality_value - delta_{ab} orthogonality_norm.
double orthogonality_check(int a, int b, const ModelParams& p);

/// Histogram of the centre height after running the dynamics from stationary data.
struct StationarityReport {
  std::int64_t n_min = 0;                   // bin k holds s_centre = 2 (n_min + k)
  std::vector<std::uint64_t> counts;
  std::vector<double> expected;             // m_n per bin
  std::uint64_t trials = 0;
  std::uint64_t outside = 0;                // samples outside the bins

  /// Largest |freq - m_n| / sigma over bins with expected count >= min_expected.
  double max_z_score(double min_expected = 5.0) const;
};

/// Windows [-half_width, half_width] (centre 0), evolved to time t.
StationarityReport stationarity_experiment(const ModelParams& p, Site half_width, double t, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads = 0);

}  // namespace dasep
