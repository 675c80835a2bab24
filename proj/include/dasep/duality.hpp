#pragma once

// The duality functional between the dynamic ASEP (acting on heights) and the
// n-particle ASEP with left rate 1 and right rate q (acting on positions), and
// the exact checks of the generator identity and its cluster telescoping.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dasep/lattice.hpp"
#include "dasep/params.hpp"
#include "dasep/process.hpp"
#include "dasep/qspecial.hpp"

namespace dasep {

/// k-th factor (k is the 1-based particle label) of the duality functional at
/// position x and height s:
///   q^{-x} - alpha^{-1} q^{2(k-1)} - q^{k-1} (q^{(-s-x)/2} - alpha^{-1} q^{(s-x)/2}).
template <class Real>
Real duality_factor(std::size_t k, Site x, Height s, const Params<Real>& p) {
  if (((s - x) % 2) != 0) throw std::invalid_argument("duality_factor: s - x must be even");
  const auto km1 = static_cast<std::int64_t>(k) - 1;
  const Real inv_alpha = Real{1} / p.alpha;
  return ipow(p.q, -x) - inv_alpha * ipow(p.q, 2 * km1) -
         ipow(p.q, km1) * (ipow(p.q, (-s - x) / 2) - inv_alpha * ipow(p.q, (s - x) / 2));
}

/// Z_n(x; s) = prod_k duality_factor(k, x_k, s_{x_k}).
template <class Real>
Real duality_Z(const ParticleConfig& x, const HeightWindow& w, const Params<Real>& p) {
  Real z{1};
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    if (!w.contains(xk)) throw std::out_of_range("duality_Z: particle outside window");
    z *= duality_factor(k, xk, w[xk], p);
  }
  return z;
}

/// Caches q^j and q^j / alpha for |j| <= range so that repeated evaluations of
/// the functional cost a handful of multiplications.  Falls back to ipow
/// outside the cached range.
template <class Real>
class DualityEvaluator {
 public:
  DualityEvaluator(const Params<Real>& p, std::int64_t range) : params_(p), range_(range) {
    if (range < 0) throw std::invalid_argument("DualityEvaluator: range must be non-negative");
    const Real inv_alpha = Real{1} / p.alpha;
    q_.reserve(static_cast<std::size_t>(2 * range + 1));
    for (std::int64_t j = -range; j <= range; ++j) {
      q_.push_back(ipow(p.q, j));
      q_over_alpha_.push_back(q_.back() * inv_alpha);
    }
  }

  const Params<Real>& params() const { return params_; }

  Real factor(std::size_t k, Site x, Height s) const {
    if (((s - x) % 2) != 0) throw std::invalid_argument("duality_factor: s - x must be even");
    const auto c = static_cast<std::int64_t>(k) - 1;
    return qp(-x) - qa(2 * c) - qp(c) * (qp((-s - x) / 2) - qa((s - x) / 2));
  }

  Real Z(const ParticleConfig& x, const HeightWindow& w) const {
    Real z{1};
    for (std::size_t k = 1; k <= x.size(); ++k) {
      const Site xk = x.label(k);
      if (!w.contains(xk)) throw std::out_of_range("duality_Z: particle outside window");
      z *= factor(k, xk, w[xk]);
    }
    return z;
  }

 private:
  Real qp(std::int64_t j) const {
    if (j < -range_ || j > range_) return ipow(params_.q, j);
    return q_[static_cast<std::size_t>(j + range_)];
  }
  Real qa(std::int64_t j) const {
    if (j < -range_ || j > range_) return ipow(params_.q, j) / params_.alpha;
    return q_over_alpha_[static_cast<std::size_t>(j + range_)];
  }

  Params<Real> params_;
  std::int64_t range_;
  std::vector<Real> q_;
  std::vector<Real> q_over_alpha_;
};

/// Partial product over the labels in `labels` (1-based), written with N_x:
///   q^{-x} - alpha^{-1} q^{2(k-1)} - q^{k-1} (q^{-N_x - x} - alpha^{-1} q^{N_x}).
template <class Real>
Real duality_Z_subset(std::span<const std::size_t> labels, const ParticleConfig& x, const HeightWindow& w,
                      const Params<Real>& p) {
  const Real inv_alpha = Real{1} / p.alpha;
  Real z{1};
  for (std::size_t k : labels) {
    if (k < 1 || k > x.size()) throw std::out_of_range("duality_Z_subset: label out of range");
    const Site xk = x.label(k);
    if (!w.contains(xk)) throw std::out_of_range("duality_Z_subset: particle outside window");
    const std::int64_t n_x = w.N(xk);
    const auto km1 = static_cast<std::int64_t>(k) - 1;
    z *= ipow(p.q, -xk) - inv_alpha * ipow(p.q, 2 * km1) -
         ipow(p.q, km1) * (ipow(p.q, -n_x - xk) - inv_alpha * ipow(p.q, n_x));
  }
  return z;
}

/// Labels 1..n.
std::vector<std::size_t> all_labels(std::size_t n);

/// Limit functional as alpha -> 0: prod_k (q^{k-1} - q^{N_{x_k}}).
double duality_Z_alpha0(const ParticleConfig& x, const HeightWindow& w, double q);

/// prod_k (-alpha q^{1-k}) * Z_n, which tends to duality_Z_alpha0 as alpha -> 0.
double alpha0_scaled_Z(const ParticleConfig& x, const HeightWindow& w, const ModelParams& p);

enum class Normalization { raw, step, half };

/// Z_n with one of the prefactors used for the initial-data evaluations:
/// step divides by (-1/alpha; q)_n, half multiplies by alpha^n / q^{n(n-1)/2}.
struct DualityObservable {
  std::size_t n;
  ModelParams params;
  Normalization normalization = Normalization::raw;

  double prefactor() const;
  double operator()(const ParticleConfig& x, const HeightWindow& w) const;
};

/// The generator identity residual for any functional of (positions, heights):
///   (L_{q,alpha} F(x; .))(w) - (L^n_{1,q} F(.; w))(x).
/// Every x_k needs one site of margin inside the window.
template <class Real, class Functional>
Real duality_residual(Functional&& fn, const ParticleConfig& x, const HeightWindow& w, const Params<Real>& p) {
  for (Site xk : x.positions())
    if (!(xk - 1 >= w.x_left() && xk + 1 <= w.x_right()))
      throw std::out_of_range("duality check: particles need one site of margin inside the window");
  const Real lhs = apply_dynamic_generator([&](const HeightWindow& s) { return Real(fn(x, s)); }, w, p);
  const Real rhs = asep_generator_apply([&](const ParticleConfig& y) { return Real(fn(y, w)); }, x, Real{1}, p.q);
  return lhs - rhs;
}

template <class Real>
Real check_duality_identity(const ParticleConfig& x, const HeightWindow& w, const Params<Real>& p) {
  return duality_residual<Real>(
      [&](const ParticleConfig& y, const HeightWindow& s) { return duality_Z(y, s, p); }, x, w, p);
}

/// Same residual; Z only reads heights at particle sites, so flips elsewhere
/// contribute exactly zero and are skipped.
template <class Real>
Real check_duality_identity(const ParticleConfig& x, const HeightWindow& w, const DualityEvaluator<Real>& ev) {
  for (Site xk : x.positions())
    if (!(xk - 1 >= w.x_left() && xk + 1 <= w.x_right()))
      throw std::out_of_range("duality check: particles need one site of margin inside the window");
  const Real base = ev.Z(x, w);
  Real lhs{0};
  for (Site xk : x.positions()) {
    const auto r = flip_rates_at(w, xk, ev.params());
    if (w.is_local_max(xk)) lhs += r.down * (ev.Z(x, w.flipped(xk, -2)) - base);
    if (w.is_local_min(xk)) lhs += r.up * (ev.Z(x, w.flipped(xk, +2)) - base);
  }
  const Real rhs = asep_generator_apply([&](const ParticleConfig& y) { return ev.Z(y, w); }, x, Real{1}, ev.params().q);
  return lhs - rhs;
}

/// Size of the residual before cancellation: every Z entering the generator
/// identity is replaced by the product of the absolute values of its terms.
/// The float backend compares the residual against this scale.
double duality_scale(const ParticleConfig& x, const HeightWindow& w, const ModelParams& p);

/// Maximal runs of adjacent particles, as 1-based label ranges [first, last].
struct LabelRange {
  std::size_t first;
  std::size_t last;
  friend bool operator==(const LabelRange&, const LabelRange&) = default;
};
std::vector<LabelRange> clusters(const ParticleConfig& x);

/// sum_i Z_{complement of I_i} * (L^{I_i} Z_{I_i}) over the clusters I_i, where
/// L^{I} moves only the particles with labels in I (left rate 1, right rate q).
template <class Real>
Real cluster_decomposed_generator(const ParticleConfig& x, const HeightWindow& w, const Params<Real>& p) {
  const auto parts = clusters(x);
  const std::size_t n = x.size();
  Real total{0};
  for (const auto& part : parts) {
    std::vector<std::size_t> inside;
    std::vector<std::size_t> outside;
    for (std::size_t k = 1; k <= n; ++k) (k >= part.first && k <= part.last ? inside : outside).push_back(k);
    const Real z_out = duality_Z_subset<Real>(outside, x, w, p);
    const Real z_in = duality_Z_subset<Real>(inside, x, w, p);
    Real gen{0};
    // Leftmost particle of the cluster can step left, rightmost can step right.
    gen += duality_Z_subset<Real>(inside, x.moved(part.last - 1, -1), w, p) - z_in;
    gen += p.q * (duality_Z_subset<Real>(inside, x.moved(part.first - 1, +1), w, p) - z_in);
    total += z_out * gen;
  }
  return total;
}

/// Per-site and boundary terms of the single-cluster identity
/// sum_{sites} L = A + B, evaluated along one route.
template <class Real>
struct TelescopingTerms {
  std::vector<Real> site_terms;  // flips at x+a, ..., x+b
  Real left_move;                // A: leftmost particle steps left (rate 1)
  Real right_move;               // B: rightmost particle steps right (rate q)

  Real residual() const {
    Real sum{0};
    for (const auto& t : site_terms) sum += t;
    return sum - left_move - right_move;
  }
};

template <class Real>
struct TelescopingReport {
  TelescopingTerms<Real> direct;  // ratios of the functional, divided by Z
  TelescopingTerms<Real> table;   // closed-form case formulas in N and eta
  Real direct_residual;
  Real table_residual;
  Real route_gap;  // max over terms of |direct - table|
};

/// Single cluster with labels a..b of an n-particle system placed at
/// x_i = x_anchor + a + b - i, so the cluster occupies sites x_anchor + a .. x_anchor + b.
/// Throws std::invalid_argument on bad labels, std::out_of_range when the window
/// lacks a site of margin on either side, and std::domain_error when the
/// cluster functional vanishes (ratios undefined).
template <class Real>
TelescopingReport<Real> verify_cluster_telescoping(std::size_t a, std::size_t b, std::size_t n, Site x_anchor,
                                                   const HeightWindow& w, const Params<Real>& p);

/// True when the cluster functional is nonzero, i.e. no N_{x_k} equals k - 1.
bool cluster_is_nondegenerate(std::size_t a, std::size_t b, Site x_anchor, const HeightWindow& w);

extern template TelescopingReport<double> verify_cluster_telescoping(std::size_t, std::size_t, std::size_t, Site,
                                                                     const HeightWindow&, const Params<double>&);
extern template TelescopingReport<Rational> verify_cluster_telescoping(std::size_t, std::size_t, std::size_t, Site,
                                                                       const HeightWindow&,
                                                                       const Params<Rational>&);

}  // namespace dasep
