#pragma once

// Nested contour-integral formulas for the dual expectations, checks of the
// equations they solve, and Monte Carlo estimates of the same quantities.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dasep/lattice.hpp"
#include "dasep/params.hpp"

namespace dasep {

using Complex = std::complex<long double>;

class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All n variables run over the circle |y - center| = radius, sampled at
/// `nodes` equally spaced angles.
struct ContourSpec {
  double center = 1.0;
  double radius = 0.0;
  int nodes = 256;

  /// radius = 0.4 (1 - q) / (1 + q).
  static ContourSpec defaults(double q);
  /// Requires center 1, 0 < radius < (1 - q) / (1 + q) and at least 8 nodes.
  void validate(double q) const;
};

/// Imaginary parts above this are treated as a failed evaluation.
inline constexpr double kImagTolerance = 1e-9;

struct ContourResult {
  double value = 0;
  double imag = 0;
  /// False for coincident positions, where the formula is an unverified extension.
  bool strictly_ordered = true;
};

/// F(x, t; y) = ((1 - y)/(1 - q y))^x exp{(1 - q)^2 y t / ((1 - y)(1 - q y))}.
Complex free_solution(std::int64_t x, double t, double q, Complex y);

/// The full integrand of the step formula, without the 1/(2 pi i)^n and the
/// differentials: q^{n(n-1)/2} prod_{i<j} (y_i - y_j)/(y_i - q y_j) prod_i F(x_i, t; y_i) / y_i.
Complex step_integrand(std::span<const Site> x, double t, double q, std::span<const Complex> y);

/// (1 / (2 pi i)^n) times the n-fold trapezoid sum of `integrand` over the
/// common circle.  Cost nodes^n; intended for n <= 3.
Complex contour_integral(std::size_t n, const ContourSpec& spec, double q,
                         const std::function<Complex(std::span<const Complex>)>& integrand);

/// The step formula at arbitrary (possibly coincident) positions, using the
/// product structure of the integrand.  `threads` only affects speed.
ContourResult contour_E_step_full(std::span<const Site> x, double t, double q, const ContourSpec& spec,
                                  unsigned threads = 1);

/// E_step(t; x); throws ContourError when |imag| exceeds kImagTolerance.
double contour_E_step(const ParticleConfig& x, double t, double q, const ContourSpec& spec, unsigned threads = 1);
double contour_E_step(const ParticleConfig& x, double t, double q);

/// E_half(t; x) = E_step(t; x - 1).
double contour_E_half(const ParticleConfig& x, double t, double q, const ContourSpec& spec, unsigned threads = 1);
double contour_E_half(const ParticleConfig& x, double t, double q);

/// |dF/dt - L^1_{1,q} F| / max(1, |F|) at one (x, t, y).
double check_free_evolution(std::int64_t x, double t, double q, Complex y);

enum class BoundaryVariant {
  standard,      // (nabla^-_1 + q nabla^+_2), the operator the exclusion rule requires
  minus_sign,    // (nabla^-_1 - q nabla^+_2)
  no_numerator,  // standard operator, (y_1 - y_2) removed from the kernel
};

/// |integral of the two-body boundary operator applied to the n = 2 integrand|
/// at x_1 = x_lower + 1, x_2 = x_lower.
double check_boundary_condition(Site x_lower, double t, double q, const ContourSpec& spec,
                                BoundaryVariant variant = BoundaryVariant::standard);

/// |(E(t+dt) - E(t-dt)) / (2 dt) - (L^n_{1,q} E)(t)| with E = contour_E_step;
/// n <= 2 and t >= dt.
double evolution_residual(const ParticleConfig& x, double t, double q, const ContourSpec& spec, double dt);

enum class InitialData { step, half, stationary };
InitialData parse_initial_data(std::string_view text);
std::string to_string(InitialData init);

struct McReport {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo mean of the normalized duality observable at time t:
/// step uses Z / (-1/alpha; q)_n, half uses alpha^n q^{-n(n-1)/2} Z and
/// stationary the raw Z.  Trial i uses Rng(seed, i); the reduction runs in
/// trial order, so the result does not depend on `threads`.
McReport mc_duality_estimate(const ParticleConfig& x, double t, const ModelParams& p, InitialData init,
                             std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace dasep
