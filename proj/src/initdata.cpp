#include "dasep/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dasep/duality.hpp"
#include "dasep/parallel.hpp"

namespace dasep {

namespace {

long double f_long(Height s, const ModelParams& p) {
  const long double q = p.q;
  const long double sa = std::sqrt(static_cast<long double>(p.alpha));
  return sa * std::pow(q, -0.5L * s) - std::pow(q, 0.5L * s) / sa;
}

long double m_weight_long(std::int64_t n, const ModelParams& p, long double normalizer) {
  const long double lq = std::log(static_cast<long double>(p.q));
  const long double la = std::log(static_cast<long double>(p.alpha));
  const long double nn = static_cast<long double>(n);
  const long double log_main = -2 * nn * la + nn * (2 * nn - 1) * lq;
  const long double tail = 1 + std::exp(2 * nn * lq - la);
  return std::exp(log_main) * tail / normalizer;
}

// (-1/alpha, -q alpha, q; q)_inf in long double, truncated once every factor
// is within 1e-22 of 1.
long double normalizer_long(const ModelParams& p) {
  validate(p);
  const long double q = p.q;
  const long double a = p.alpha;
  long double prod = 1;
  long double qk = 1;
  for (int k = 0; k < 100'000; ++k) {
    const long double t1 = qk / a;
    const long double t2 = qk * q * a;
    const long double t3 = qk * q;
    prod *= (1 + t1) * (1 + t2) * (1 - t3);
    if (std::max({t1, t2, t3}) < 1e-22L) return prod;
    qk *= q;
  }
  throw SeriesError("stationary normalizer: product did not converge");
}

int parity(Site x) { return static_cast<int>(((x % 2) + 2) % 2); }

}  // namespace

HeightWindow step_heights(Site x_left, Site x_right) {
  if (!(x_left <= 0 && 0 <= x_right)) throw std::invalid_argument("step_heights: need x_left <= 0 <= x_right");
  std::vector<Height> h;
  h.reserve(static_cast<std::size_t>(x_right - x_left + 1));
  for (Site x = x_left; x <= x_right; ++x) h.push_back(x < 0 ? -x : x);
  return HeightWindow(x_left, std::move(h));
}

HeightWindow sample_half_stationary(Site x_left, Site x_right, const ModelParams& p, Rng& rng) {
  validate(p);
  if (!(x_left <= 0 && x_right >= 1)) throw std::invalid_argument("sample_half_stationary: window must contain 0 and 1");
  std::vector<Height> h(static_cast<std::size_t>(x_right - x_left + 1));
  const auto idx = [&](Site x) { return static_cast<std::size_t>(x - x_left); };
  for (Site x = 1; x <= x_right; ++x) h[idx(x)] = x;
  Height s = 1;
  for (Site x = 1; x > x_left; --x) {
    s += rng.bernoulli(up_probability(s, p)) ? 1 : -1;
    h[idx(x - 1)] = s;
  }
  return HeightWindow(x_left, std::move(h));
}

HeightWindow sample_half_stationary(Site x_left, Site x_right, const ModelParams& p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_half_stationary(x_left, x_right, p, rng);
}

double half_expectation_Z(const ParticleConfig& x, const ModelParams& p) {
  validate(p);
  const Params<long double> lp{p.q, p.alpha};
  const std::size_t n = x.size();
  long double deterministic = 1;
  std::size_t k = 1;
  for (; k <= n && x.label(k) >= 1; ++k) deterministic *= duality_factor(k, x.label(k), x.label(k), lp);
  if (k > n) return static_cast<double>(deterministic);

  // weights[i] is the signed mass at height site + 2i.
  std::vector<long double> weights{deterministic};
  Site site = 1;
  for (;;) {
    const Height s_low = site;
    for (; k <= n && x.label(k) == site; ++k) {
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0) continue;
        weights[i] *= duality_factor(k, site, s_low + 2 * static_cast<Height>(i), lp);
      }
    }
    if (k > n) break;
    std::vector<long double> next(weights.size() + 1, 0.0L);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] == 0) continue;
      const Height s = s_low + 2 * static_cast<Height>(i);
      const long double up = up_probability(s, lp);
      next[i + 1] += weights[i] * up;
      next[i] += weights[i] * (1 - up);
    }
    weights = std::move(next);
    --site;
  }
  long double total = 0;
  for (long double w : weights) total += w;
  return static_cast<double>(total);
}

double half_closed_form(const ParticleConfig& x, double q) {
  long double out = 1;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const Site xk = x.label(k);
    out *= ipow(static_cast<long double>(q), xk <= 1 ? 1 - xk : 0) -
           ipow(static_cast<long double>(q), static_cast<std::int64_t>(k) - 1);
  }
  return static_cast<double>(out);
}

double eigencheck_hermite(int n, Height s_lo, Height s_hi, const ModelParams& p, double eigen_power) {
  validate(p);
  if (n < 0) throw std::invalid_argument("eigencheck_hermite: n must be non-negative");
  const Params<long double> lp{p.q, p.alpha};
  const long double q = p.q;
  const auto h = [&](Height s) { return hermite_qinv<long double>(n, f_long(s, p) / 2, q); };
  const long double eigenvalue = std::pow(q, static_cast<long double>(n) * eigen_power);
  long double worst = 0;
  for (Height s = s_lo; s <= s_hi; ++s) {
    const long double hs = h(s);
    const long double lhs = K_apply(h, s, lp);
    worst = std::max(worst, std::abs(lhs - eigenvalue * hs) / std::max(1.0L, std::abs(hs)));
  }
  return static_cast<double>(worst);
}

double keyit_residual(int l, int d, Height s_lo, Height s_hi, const ModelParams& p) {
  validate(p);
  if (l < 0 || d < 0) throw std::invalid_argument("keyit_residual: need l, d >= 0");
  const Params<long double> lp{p.q, p.alpha};
  const long double q = p.q;
  long double worst = 0;
  for (Height s0 = s_lo; s0 <= s_hi; ++s0) {
    // values[i] at height s0 - d + i + j after j applications; only every other entry matters.
    std::vector<long double> values;
    for (Height s = s0 - d; s <= s0 + d; ++s) {
      const long double fs = f_long(s, p);
      values.push_back(fs * hermite_qinv<long double>(l, fs / 2, q));
    }
    for (int j = 0; j < d; ++j) {
      std::vector<long double> next(values.size() - 2);
      for (std::size_t i = 0; i < next.size(); ++i) {
        const Height s = s0 - d + j + 1 + static_cast<Height>(i);
        const long double up = up_probability(s, lp);
        next[i] = up * values[i + 2] + (1 - up) * values[i];
      }
      values = std::move(next);
    }
    const long double lhs = values.front();
    const long double x = f_long(s0, p) / 2;
    const long double hp = hermite_qinv<long double>(l + 1, x, q);
    const long double hm = l > 0 ? hermite_qinv<long double>(l - 1, x, q) : 0.0L;
    const long double rhs = std::pow(q, 0.5L * d * (l + 1)) * hp +
                            (std::pow(q, -static_cast<long double>(l)) - 1) * std::pow(q, 0.5L * d * (l - 1)) * hm;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0L, std::abs(rhs)));
  }
  return static_cast<double>(worst);
}

double stationary_normalizer(const ModelParams& p) { return static_cast<double>(normalizer_long(p)); }

double m_weight(std::int64_t n, const ModelParams& p) {
  return static_cast<double>(m_weight_long(n, p, normalizer_long(p)));
}

StationaryMeasure::StationaryMeasure(const ModelParams& p, double cut_ratio) : params_(p) {
  validate(p);
  if (!(cut_ratio > 0 && cut_ratio < 1)) throw std::invalid_argument("StationaryMeasure: cut_ratio must lie in (0,1)");
  const long double z = normalizer_long(p);
  normalizer_ = static_cast<double>(z);
  const auto w = [&](std::int64_t n) { return static_cast<double>(m_weight_long(n, p, z)); };
  constexpr std::int64_t limit = 100'000;

  // The weights are unimodal in n; locate the mode, then extend both ways.
  std::int64_t mode = 0;
  while (mode < limit && w(mode + 1) > w(mode)) ++mode;
  while (mode > -limit && w(mode - 1) > w(mode)) --mode;
  const double peak = w(mode);
  if (!(peak > 0) || !std::isfinite(peak)) throw SeriesError("StationaryMeasure: weights not representable");
  n_min_ = mode;
  n_max_ = mode;
  while (w(n_min_) >= cut_ratio * peak) {
    if (--n_min_ < mode - limit) throw SeriesError("StationaryMeasure: tail truncation unachievable");
  }
  while (w(n_max_) >= cut_ratio * peak) {
    if (++n_max_ > mode + limit) throw SeriesError("StationaryMeasure: tail truncation unachievable");
  }
  double acc = 0;
  for (std::int64_t n = n_min_; n <= n_max_; ++n) {
    weights_.push_back(w(n));
    acc += weights_.back();
    cdf_.push_back(acc);
  }
}

StationaryMeasure StationaryMeasure::odd_site(const ModelParams& p, double cut_ratio) {
  return StationaryMeasure(ModelParams{p.q, p.alpha / p.q}, cut_ratio);
}

double StationaryMeasure::weight(std::int64_t n) const {
  if (n < n_min_ || n > n_max_) return 0.0;
  return weights_[static_cast<std::size_t>(n - n_min_)];
}

double StationaryMeasure::total() const { return cdf_.back(); }

std::int64_t StationaryMeasure::sample(Rng& rng) const {
  const double target = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  const auto i = std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
  return n_min_ + i;
}

MarginalResiduals marginal_propagation_residuals(const ModelParams& p, std::int64_t n_lo, std::int64_t n_hi) {
  const ModelParams pt{p.q, p.alpha / p.q};
  const long double z = normalizer_long(p);
  const long double zt = normalizer_long(pt);
  const auto m = [&](std::int64_t n) { return m_weight_long(n, p, z); };
  const auto mt = [&](std::int64_t n) { return m_weight_long(n, pt, zt); };
  const long double q = p.q;
  const long double a = p.alpha;
  MarginalResiduals r{0, 0};
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const long double q2n = std::pow(q, static_cast<long double>(2 * n));
    const long double e1 = mt(n) - (q2n / (a + q2n) * m(n) + a / (a + q2n * q * q) * m(n + 1));
    const long double e2 = m(n) - (q2n / q / (a + q2n / q) * mt(n - 1) + a / (a + q2n * q) * mt(n));
    r.even_to_odd = std::max(r.even_to_odd, static_cast<double>(std::abs(e1)));
    r.odd_to_even = std::max(r.odd_to_even, static_cast<double>(std::abs(e2)));
  }
  return r;
}

HeightWindow sample_stationary(Site x_left, Site x_right, const StationaryMeasure& even, const StationaryMeasure& odd,
                               Rng& rng) {
  if (x_left > x_right) throw std::invalid_argument("sample_stationary: empty window");
  const ModelParams& p = even.params();
  std::vector<Height> h(static_cast<std::size_t>(x_right - x_left + 1));
  Height s = parity(x_right) == 0 ? 2 * even.sample(rng) : 2 * odd.sample(rng) + 1;
  h.back() = s;
  for (Site x = x_right; x > x_left; --x) {
    s += rng.bernoulli(up_probability(s, p)) ? 1 : -1;
    h[static_cast<std::size_t>(x - 1 - x_left)] = s;
  }
  return HeightWindow(x_left, std::move(h));
}

HeightWindow sample_stationary(Site x_left, Site x_right, const ModelParams& p, std::uint64_t seed) {
  const StationaryMeasure even(p);
  const auto odd = StationaryMeasure::odd_site(p);
  Rng rng(seed);
  return sample_stationary(x_left, x_right, even, odd, rng);
}

double detailed_balance_relative(Height s, const ModelParams& p) {
  const double peak = up_probability(s, p) * down_probability(s + 1, p);
  const double valley = down_probability(s, p) * up_probability(s - 1, p);
  return detailed_balance_residual(s, p) / std::max(1.0, peak / valley);
}

double zeta_moment_from_measure(int k, const ModelParams& p) {
  if (k < 0) throw std::invalid_argument("zeta_moment_from_measure: k must be non-negative");
  const long double z = normalizer_long(p);
  const long double sum = sum_over_integers([&](std::int64_t n) {
    const long double w = m_weight_long(n, p, z);
    return w == 0 ? 0.0L : w * std::pow(f_long(2 * n, p), static_cast<long double>(k));
  });
  return static_cast<double>(sum);
}

double zeta_moment_forced(int k, double q) {
  if (k < 0) throw std::invalid_argument("zeta_moment_forced: k must be non-negative");
  // Coefficients of x^j in the h-basis; the measure integrates h_0 to 1 and h_l (l > 0) to 0.
  std::vector<long double> c(static_cast<std::size_t>(k) + 2, 0.0L);
  c[0] = 1;
  const long double lq = q;
  for (int j = 0; j < k; ++j) {
    std::vector<long double> next(c.size(), 0.0L);
    for (std::size_t l = 0; l + 1 < c.size(); ++l) {
      if (c[l] == 0) continue;
      next[l + 1] += c[l];
      if (l > 0) next[l - 1] += c[l] * (std::pow(lq, -static_cast<long double>(l)) - 1);
    }
    c = std::move(next);
  }
  return static_cast<double>(c[0]);
}

double zeta_moment_binomial(int k, double q) {
  if (k < 0) throw std::invalid_argument("zeta_moment_binomial: k must be non-negative");
  if (k % 2 == 1) return 0.0;
  const int h = k / 2;
  long double sum = 0;
  for (int i = -h; i <= h; ++i) {
    long double binom = 1;
    for (int j = 1; j <= h + i; ++j) binom = binom * (k - j + 1) / j;
    const long double sign = (i % 2 == 0) ? 1.0L : -1.0L;
    sum += binom * sign * std::pow(static_cast<long double>(q), -0.5L * i * (i - 1));
  }
  return static_cast<double>(std::pow(1 - 1 / static_cast<long double>(q), static_cast<long double>(h)) * sum);
}

namespace {

long double orthogonality_sum(int a, int b, const ModelParams& p) {
  if (a < 0 || b < 0) throw std::invalid_argument("orthogonality: degrees must be non-negative");
  const long double z = normalizer_long(p);
  const long double q = p.q;
  const int top = std::max(a, b);
  return sum_over_integers([&](std::int64_t n) {
    const long double w = m_weight_long(n, p, z);
    if (w == 0) return 0.0L;
    const auto h = hermite_qinv_table<long double>(top, f_long(2 * n, p) / 2, q);
    return w * h[static_cast<std::size_t>(a)] * h[static_cast<std::size_t>(b)];
  });
}

long double orthogonality_norm_long(int a, long double q) {
  return q_pochhammer(q, q, a) / std::pow(q, 0.5L * a * (a + 1));
}

}  // namespace

double orthogonality_value(int a, int b, const ModelParams& p) {
  return static_cast<double>(orthogonality_sum(a, b, p));
}

double orthogonality_norm(int a, double q) { return static_cast<double>(orthogonality_norm_long(a, q)); }

double orthogonality_check(int a, int b, const ModelParams& p) {
  const long double value = orthogonality_sum(a, b, p);
  return static_cast<double>(a == b ? value - orthogonality_norm_long(a, p.q) : value);
}

double StationarityReport::max_z_score(double min_expected) const {
  double worst = 0;
  const double t = static_cast<double>(trials);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double m = expected[i];
    if (m * t < min_expected) continue;
    const double sigma = std::sqrt(m * (1 - m) / t);
    worst = std::max(worst, std::abs(static_cast<double>(counts[i]) / t - m) / sigma);
  }
  return worst;
}

StationarityReport stationarity_experiment(const ModelParams& p, Site half_width, double t, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads) {
  if (half_width < 1) throw std::invalid_argument("stationarity_experiment: half_width must be >= 1");
  if (trials == 0) throw std::invalid_argument("stationarity_experiment: trials must be >= 1");
  const StationaryMeasure even(p);
  const auto odd = StationaryMeasure::odd_site(p);
  std::vector<Height> centre(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    HeightWindow w = sample_stationary(-half_width, half_width, even, odd, rng);
    evolve_dynamic_asep(w, t, p, rng);
    centre[i] = w[0];
  });
  StationarityReport report;
  report.n_min = even.n_min();
  report.trials = trials;
  report.expected.assign(even.weights().begin(), even.weights().end());
  report.counts.assign(report.expected.size(), 0);
  for (Height s : centre) {
    const std::int64_t n = s / 2;
    if (n < even.n_min() || n > even.n_max()) {
      ++report.outside;
      continue;
    }
    ++report.counts[static_cast<std::size_t>(n - even.n_min())];
  }
  return report;
}

}  // namespace dasep
