#include "dasep/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "dasep/duality.hpp"
#include "dasep/initdata.hpp"
#include "dasep/parallel.hpp"
#include "dasep/process.hpp"

namespace dasep {

namespace {

struct Circle {
  std::vector<Complex> nodes;
  std::vector<Complex> weights;  // includes 1/(2 pi i) and the trapezoid step
};

Circle make_circle(const ContourSpec& spec) {
  Circle c;
  const auto m = static_cast<std::size_t>(spec.nodes);
  const long double r = spec.radius;
  for (std::size_t j = 0; j < m; ++j) {
    const long double theta = 2 * std::numbers::pi_v<long double> * static_cast<long double>(j) / static_cast<long double>(m);
    const Complex e = std::polar(1.0L, theta);
    c.nodes.push_back(static_cast<long double>(spec.center) + r * e);
    c.weights.push_back(r * e / static_cast<long double>(m));
  }
  return c;
}

Complex kernel(Complex a, Complex b, long double q) { return (a - b) / (a - q * b); }

bool strictly_decreasing(std::span<const Site> x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] < x[i - 1])) return false;
  return true;
}

}  // namespace

ContourSpec ContourSpec::defaults(double q) { return ContourSpec{1.0, 0.4 * (1 - q) / (1 + q), 256}; }

void ContourSpec::validate(double q) const {
  if (!(q >= 0 && q < 1)) throw std::invalid_argument("contour: q must lie in [0,1)");
  if (center != 1.0) throw std::invalid_argument("contour: circles must be centred at 1");
  if (!(radius > 0 && radius < (1 - q) / (1 + q)))
    throw std::invalid_argument("contour: radius must lie in (0, (1-q)/(1+q))");
  if (nodes < 8) throw std::invalid_argument("contour: need at least 8 nodes");
}

Complex free_solution(std::int64_t x, double t, double q, Complex y) {
  const long double lq = q;
  const Complex one{1.0L, 0.0L};
  const Complex u = (one - y) / (one - lq * y);
  const long double c = (1 - lq) * (1 - lq) * static_cast<long double>(t);
  return std::pow(u, static_cast<int>(x)) * std::exp(c * y / ((one - y) * (one - lq * y)));
}

Complex step_integrand(std::span<const Site> x, double t, double q, std::span<const Complex> y) {
  if (x.size() != y.size()) throw std::invalid_argument("step_integrand: size mismatch");
  const std::size_t n = x.size();
  const long double lq = q;
  Complex v = std::pow(lq, 0.5L * static_cast<long double>(n * (n - 1)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) v *= kernel(y[i], y[j], lq);
    v *= free_solution(x[i], t, q, y[i]) / y[i];
  }
  return v;
}

Complex contour_integral(std::size_t n, const ContourSpec& spec, double q,
                         const std::function<Complex(std::span<const Complex>)>& integrand) {
  spec.validate(q);
  if (n == 0) throw std::invalid_argument("contour_integral: n must be positive");
  const Circle c = make_circle(spec);
  const std::size_t m = c.nodes.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<Complex> y(n);
  Complex total{0, 0};
  for (;;) {
    Complex w{1, 0};
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = c.nodes[idx[i]];
      w *= c.weights[idx[i]];
    }
    total += w * integrand(y);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < m) break;
      idx[pos] = 0;
      if (pos == 0) return total;
    }
  }
}

ContourResult contour_E_step_full(std::span<const Site> x, double t, double q, const ContourSpec& spec,
                                  unsigned threads) {
  spec.validate(q);
  const std::size_t n = x.size();
  if (n < 1 || n > 3) throw std::invalid_argument("contour_E_step: need 1 <= n <= 3");
  if (t < 0) throw std::invalid_argument("contour_E_step: t must be non-negative");
  const Circle c = make_circle(spec);
  const std::size_t m = c.nodes.size();
  const long double lq = q;

  std::vector<std::vector<Complex>> g(n, std::vector<Complex>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      g[i][a] = c.weights[a] * free_solution(x[i], t, q, c.nodes[a]) / c.nodes[a];

  Complex total{0, 0};
  if (n == 1) {
    for (std::size_t a = 0; a < m; ++a) total += g[0][a];
  } else {
    std::vector<Complex> k(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) k[a * m + b] = kernel(c.nodes[a], c.nodes[b], lq);
    std::vector<Complex> partial(m);
    parallel_for(m, threads, [&](std::size_t a) {
      Complex row{0, 0};
      for (std::size_t b = 0; b < m; ++b) {
        Complex inner = g[1][b] * k[a * m + b];
        if (n == 3) {
          Complex third{0, 0};
          for (std::size_t cc = 0; cc < m; ++cc) third += g[2][cc] * k[a * m + cc] * k[b * m + cc];
          inner *= third;
        }
        row += inner;
      }
      partial[a] = g[0][a] * row;
    });
    for (const auto& v : partial) total += v;
  }
  total *= std::pow(lq, 0.5L * static_cast<long double>(n * (n - 1)));
  return {static_cast<double>(total.real()), static_cast<double>(total.imag()), strictly_decreasing(x)};
}

double contour_E_step(const ParticleConfig& x, double t, double q, const ContourSpec& spec, unsigned threads) {
  const auto r = contour_E_step_full(x.positions(), t, q, spec, threads);
  if (!(std::abs(r.imag) < kImagTolerance))
    throw ContourError("contour_E_step: imaginary part " + std::to_string(r.imag) + " above tolerance");
  return r.value;
}

double contour_E_step(const ParticleConfig& x, double t, double q) {
  return contour_E_step(x, t, q, ContourSpec::defaults(q));
}

double contour_E_half(const ParticleConfig& x, double t, double q, const ContourSpec& spec, unsigned threads) {
  return contour_E_step(x.shifted(-1), t, q, spec, threads);
}

double contour_E_half(const ParticleConfig& x, double t, double q) {
  return contour_E_half(x, t, q, ContourSpec::defaults(q));
}

double check_free_evolution(std::int64_t x, double t, double q, Complex y) {
  const long double lq = q;
  const Complex one{1.0L, 0.0L};
  const Complex f = free_solution(x, t, q, y);
  const Complex dfdt = (1 - lq) * (1 - lq) * y / ((one - y) * (one - lq * y)) * f;
  Complex generator = free_solution(x - 1, t, q, y) - f;
  if (q != 0) generator += lq * (free_solution(x + 1, t, q, y) - f);
  return static_cast<double>(std::abs(dfdt - generator) / std::max(1.0L, std::abs(f)));
}

double check_boundary_condition(Site x_lower, double t, double q, const ContourSpec& spec, BoundaryVariant variant) {
  const long double lq = q;
  const bool numerator = variant != BoundaryVariant::no_numerator;
  const long double sign = variant == BoundaryVariant::minus_sign ? -1.0L : 1.0L;
  const auto integrand_at = [&](Site x1, Site x2, std::span<const Complex> y) {
    Complex v = lq / (y[0] - lq * y[1]);
    if (numerator) v *= y[0] - y[1];
    return v * free_solution(x1, t, q, y[0]) / y[0] * free_solution(x2, t, q, y[1]) / y[1];
  };
  const Site x1 = x_lower + 1;
  const Site x2 = x_lower;
  const Complex total = contour_integral(2, spec, q, [&](std::span<const Complex> y) {
    const Complex base = integrand_at(x1, x2, y);
    const Complex left = integrand_at(x1 - 1, x2, y) - base;   // nabla^-_1
    const Complex right = integrand_at(x1, x2 + 1, y) - base;  // nabla^+_2
    return left + sign * lq * right;
  });
  return static_cast<double>(std::abs(total));
}

double evolution_residual(const ParticleConfig& x, double t, double q, const ContourSpec& spec, double dt) {
  if (x.size() > 2) throw std::invalid_argument("evolution_residual: n must be at most 2");
  if (!(dt > 0 && t >= dt)) throw std::invalid_argument("evolution_residual: need 0 < dt <= t");
  const double forward = contour_E_step(x, t + dt, q, spec);
  const double backward = contour_E_step(x, t - dt, q, spec);
  const double derivative = (forward - backward) / (2 * dt);
  const double generator = asep_generator_apply(
      [&](const ParticleConfig& y) { return contour_E_step(y, t, q, spec); }, x, 1.0, q);
  return std::abs(derivative - generator);
}

InitialData parse_initial_data(std::string_view text) {
  if (text == "step") return InitialData::step;
  if (text == "half") return InitialData::half;
  if (text == "stationary") return InitialData::stationary;
  throw std::invalid_argument("unknown initial data '" + std::string(text) + "'");
}

std::string to_string(InitialData init) {
  switch (init) {
    case InitialData::step:
      return "step";
    case InitialData::half:
      return "half";
    case InitialData::stationary:
      return "stationary";
  }
  return "?";
}

McReport mc_duality_estimate(const ParticleConfig& x, double t, const ModelParams& p, InitialData init,
                             std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  validate(p);
  if (trials == 0) throw std::invalid_argument("mc_duality_estimate: trials must be >= 1");
  if (t < 0) throw std::invalid_argument("mc_duality_estimate: t must be non-negative");
  Site reach = 0;
  for (Site xk : x.positions()) reach = std::max(reach, xk < 0 ? -xk : xk);
  const Site radius = window_radius_for(reach + 1, p.q, t);

  const Normalization norm = init == InitialData::step   ? Normalization::step
                             : init == InitialData::half ? Normalization::half
                                                         : Normalization::raw;
  const DualityObservable observable{x.size(), p, norm};
  std::optional<StationaryMeasure> even;
  std::optional<StationaryMeasure> odd;
  if (init == InitialData::stationary) {
    even.emplace(p);
    odd.emplace(StationaryMeasure::odd_site(p));
  }
  const HeightWindow step = step_heights(-radius, radius);

  std::vector<double> samples(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    HeightWindow w = init == InitialData::step   ? step
                     : init == InitialData::half ? sample_half_stationary(-radius, radius, p, rng)
                                                 : sample_stationary(-radius, radius, *even, *odd, rng);
    evolve_dynamic_asep(w, t, p, rng);
    samples[i] = observable(x, w);
  });

  long double mean = 0;
  for (double v : samples) mean += v;
  mean /= static_cast<long double>(trials);
  long double var = 0;
  for (double v : samples) var += (v - mean) * (v - mean);
  McReport report;
  report.estimate = static_cast<double>(mean);
  report.std_error =
      trials > 1 ? static_cast<double>(std::sqrt(var / static_cast<long double>(trials - 1) / static_cast<long double>(trials)))
                 : 0.0;
  report.trials = trials;
  report.seed = seed;
  return report;
}

}  // namespace dasep
