#include "dasep/duality.hpp"

#include <cmath>

namespace dasep {

std::vector<std::size_t> all_labels(std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = k + 1;
  return labels;
}

double duality_Z_alpha0(const ParticleConfig& x, const HeightWindow& w, double q) {
  double z = 1;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    if (!w.contains(xk)) throw std::out_of_range("duality_Z_alpha0: particle outside window");
    z *= ipow(q, static_cast<std::int64_t>(k) - 1) - ipow(q, w.N(xk));
  }
  return z;
}

double alpha0_scaled_Z(const ParticleConfig& x, const HeightWindow& w, const ModelParams& p) {
  double z = 1;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    if (!w.contains(xk)) throw std::out_of_range("alpha0_scaled_Z: particle outside window");
    z *= -p.alpha * ipow(p.q, 1 - static_cast<std::int64_t>(k)) * duality_factor(k, xk, w[xk], p);
  }
  return z;
}

double DualityObservable::prefactor() const {
  switch (normalization) {
    case Normalization::raw:
      return 1.0;
    case Normalization::step:
      return 1.0 / q_pochhammer(-1.0 / params.alpha, params.q, static_cast<std::int64_t>(n));
    case Normalization::half: {
      const auto nn = static_cast<std::int64_t>(n);
      return ipow(params.alpha, nn) / std::pow(params.q, 0.5 * static_cast<double>(nn * (nn - 1)));
    }
  }
  return 1.0;
}

double DualityObservable::operator()(const ParticleConfig& x, const HeightWindow& w) const {
  if (x.size() != n) throw std::invalid_argument("DualityObservable: particle count mismatch");
  return prefactor() * duality_Z(x, w, params);
}

namespace {

// Product over particles of the summed absolute values of the four terms in
// each factor: the size of Z before any cancellation.
double term_bound(const ParticleConfig& x, const HeightWindow& w, const ModelParams& p) {
  double b = 1;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    const Height s = w.at(xk);
    const auto c = static_cast<std::int64_t>(k) - 1;
    b *= ipow(p.q, -xk) + ipow(p.q, 2 * c) / p.alpha +
         ipow(p.q, c) * (ipow(p.q, (-s - xk) / 2) + ipow(p.q, (s - xk) / 2) / p.alpha);
  }
  return b;
}

}  // namespace

double duality_scale(const ParticleConfig& x, const HeightWindow& w, const ModelParams& p) {
  const double z0 = term_bound(x, w, p);
  double scale = 0;
  for (Site y = w.x_left() + 1; y < w.x_right(); ++y) {
    const auto r = flip_rates_at(w, y, p);
    if (r.down > 0) scale += r.down * (term_bound(x, w.flipped(y, -2), p) + z0);
    if (r.up > 0) scale += r.up * (term_bound(x, w.flipped(y, +2), p) + z0);
  }
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((i + 1 == n) || x[i + 1] != x[i] - 1) scale += term_bound(x.moved(i, -1), w, p) + z0;
    if ((i == 0) || x[i - 1] != x[i] + 1) scale += p.q * (term_bound(x.moved(i, +1), w, p) + z0);
  }
  return scale;
}

std::vector<LabelRange> clusters(const ParticleConfig& x) {
  std::vector<LabelRange> out;
  std::size_t first = 1;
  for (std::size_t k = 2; k <= x.size(); ++k) {
    if (x.label(k) != x.label(k - 1) - 1) {
      out.push_back({first, k - 1});
      first = k;
    }
  }
  out.push_back({first, x.size()});
  return out;
}

bool cluster_is_nondegenerate(std::size_t a, std::size_t b, Site x_anchor, const HeightWindow& w) {
  for (std::size_t i = a; i <= b; ++i) {
    const Site pos = x_anchor + static_cast<Site>(a + b - i);
    if (w.N(pos) == static_cast<std::int64_t>(i) - 1) return false;
  }
  return true;
}

namespace {

template <class Real>
Real absolute(const Real& v) {
  return v < 0 ? Real(-v) : v;
}

template <class Real>
class ClusterFunctional {
 public:
  ClusterFunctional(std::size_t a, std::size_t b, Site x_anchor, const Params<Real>& p)
      : a_(a), b_(b), params_(p) {
    for (std::size_t i = a; i <= b; ++i) positions_.push_back(x_anchor + static_cast<Site>(a + b - i));
  }

  // Position of label i after an optional move of one label.
  Real operator()(const HeightWindow& w, std::size_t moved_label = 0, Site delta = 0) const {
    Real z{1};
    for (std::size_t i = a_; i <= b_; ++i) {
      Site pos = positions_[i - a_];
      if (i == moved_label) pos += delta;
      z *= duality_factor(i, pos, w.at(pos), params_);
    }
    return z;
  }

 private:
  std::size_t a_;
  std::size_t b_;
  Params<Real> params_;
  std::vector<Site> positions_;
};

// Closed-form case formulas.  They are naturally indexed by an offset m with
// label n - m sitting at site x' + m; for a cluster with labels a..b at
// x_i = x + a + b - i this is x' = x + a + b - n and m runs over
// n - b .. n - a.
template <class Real>
class CaseTables {
 public:
  CaseTables(std::size_t n, Site x_prime, const HeightWindow& w, const Params<Real>& p)
      : n_(static_cast<std::int64_t>(n)), xp_(x_prime), w_(w), p_(p) {}

  // eta at the half-integer site y + 1/2.
  int eta(Site y) const { return static_cast<int>((1 + w_.at(y) - w_.at(y + 1)) / 2); }

  // Hole-type boundary term at offset j.
  Real hole(std::int64_t j) const {
    const Real qa = p_.q * p_.alpha;
    return (Real{1} - p_.q) * qa / (ipow(p_.q, n_ + xp_ + w_.N(xp_ + j)) + qa);
  }

  // Particle-type boundary term at offset j.
  Real particle(std::int64_t j) const {
    const Real num = ipow(p_.q, j + 1 + w_.N(xp_ + j));
    return (Real{1} - p_.q) * num / (num - ipow(p_.q, n_));
  }

  Real boundary(int occupied, std::int64_t j) const { return occupied ? particle(j) : hole(j); }

  // L(m, n): written as the telescoping difference of boundary terms.
  Real site(std::int64_t m) const { return boundary(eta(xp_ + m), m + 1) - boundary(eta(xp_ + m - 1), m); }

  Real left_move(std::int64_t a_prime) const { return -boundary(eta(xp_ + a_prime - 2), a_prime - 1); }

  Real right_move(std::int64_t b_prime) const { return boundary(eta(xp_ + b_prime - 1), b_prime); }

 private:
  std::int64_t n_;
  Site xp_;
  const HeightWindow& w_;
  const Params<Real>& p_;
};

}  // namespace

template <class Real>
TelescopingReport<Real> verify_cluster_telescoping(std::size_t a, std::size_t b, std::size_t n, Site x_anchor,
                                                   const HeightWindow& w, const Params<Real>& p) {
  if (a < 1 || a > b || b > n) throw std::invalid_argument("verify_cluster_telescoping: need 1 <= a <= b <= n");
  const Site lo = x_anchor + static_cast<Site>(a);
  const Site hi = x_anchor + static_cast<Site>(b);
  if (!(lo - 1 >= w.x_left() && hi + 1 <= w.x_right()))
    throw std::out_of_range("verify_cluster_telescoping: window must cover the cluster with one site of margin");
  if (!cluster_is_nondegenerate(a, b, x_anchor, w))
    throw std::domain_error("verify_cluster_telescoping: cluster functional vanishes");

  const ClusterFunctional<Real> zc(a, b, x_anchor, p);
  const Real z0 = zc(w);

  TelescopingReport<Real> report;
  for (Site y = lo; y <= hi; ++y) {
    const auto r = flip_rates_at(w, y, p);
    Real term{0};
    if (r.down != 0) term += r.down * (zc(w.flipped(y, -2)) / z0 - Real{1});
    if (r.up != 0) term += r.up * (zc(w.flipped(y, +2)) / z0 - Real{1});
    report.direct.site_terms.push_back(term);
  }
  report.direct.left_move = zc(w, b, -1) / z0 - Real{1};
  report.direct.right_move = p.q * (zc(w, a, +1) / z0 - Real{1});

  const auto nn = static_cast<std::int64_t>(n);
  const Site x_prime = x_anchor + static_cast<Site>(a + b) - nn;
  const std::int64_t a_prime = nn - static_cast<std::int64_t>(b) + 1;
  const std::int64_t b_prime = nn - static_cast<std::int64_t>(a) + 1;
  const CaseTables<Real> tables(n, x_prime, w, p);
  for (std::int64_t m = a_prime - 1; m <= b_prime - 1; ++m) report.table.site_terms.push_back(tables.site(m));
  report.table.left_move = tables.left_move(a_prime);
  report.table.right_move = tables.right_move(b_prime);

  report.direct_residual = report.direct.residual();
  report.table_residual = report.table.residual();
  Real gap = absolute(Real(report.direct.left_move - report.table.left_move));
  const Real right_gap = absolute(Real(report.direct.right_move - report.table.right_move));
  if (right_gap > gap) gap = right_gap;
  for (std::size_t i = 0; i < report.direct.site_terms.size(); ++i) {
    const Real d = absolute(Real(report.direct.site_terms[i] - report.table.site_terms[i]));
    if (d > gap) gap = d;
  }
  report.route_gap = gap;
  return report;
}

template TelescopingReport<double> verify_cluster_telescoping(std::size_t, std::size_t, std::size_t, Site,
                                                              const HeightWindow&, const Params<double>&);
template TelescopingReport<Rational> verify_cluster_telescoping(std::size_t, std::size_t, std::size_t, Site,
                                                                const HeightWindow&, const Params<Rational>&);

}  // namespace dasep
