#pragma once

// Continuous-time dynamics on a finite window with frozen endpoints: the
// dynamic ASEP in height-function form, n-particle standard ASEP, and exact
// generator application for identity checks.

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dasep/lattice.hpp"
#include "dasep/params.hpp"
#include "dasep/rng.hpp"

namespace dasep {

template <class Real>
struct FlipRates {
  Real down;  // s -> s - 2, nonzero only at a local maximum
  Real up;    // s -> s + 2, nonzero only at a local minimum
};

/// Rates of the two possible flips at a site with heights (s_prev, s, s_next).
template <class Real>
FlipRates<Real> flip_rates(Height s_prev, Height s, Height s_next, const Params<Real>& p) {
  const Height dl = s - s_prev;
  const Height dr = s - s_next;
  if ((dl != 1 && dl != -1) || (dr != 1 && dr != -1))
    throw std::invalid_argument("flip_rates: neighbouring heights must differ by 1");
  FlipRates<Real> r{Real{0}, Real{0}};
  const Real a_qs = p.alpha * ipow(p.q, -s);  // alpha q^{-s}
  if (dl == 1 && dr == 1) {
    r.down = p.q * (Real{1} + a_qs) / (Real{1} + a_qs * p.q);
  } else if (dl == -1 && dr == -1) {
    r.up = (Real{1} + a_qs) / (Real{1} + a_qs / p.q);
  }
  return r;
}

/// Rates at an interior site of a window.
template <class Real>
FlipRates<Real> flip_rates_at(const HeightWindow& w, Site x, const Params<Real>& p) {
  if (!w.is_interior(x)) return {Real{0}, Real{0}};
  return flip_rates(w[x - 1], w[x], w[x + 1], p);
}

/// (L_{q,alpha} F)(w) = sum over interior x of rate(w -> w^x) (F(w^x) - F(w)).
template <class Real, class F>
  requires std::invocable<F&, const HeightWindow&>
Real apply_dynamic_generator(F&& fn, const HeightWindow& w, const Params<Real>& p) {
  Real total{0};
  const Real base = fn(w);
  for (Site x = w.x_left() + 1; x < w.x_right(); ++x) {
    const auto r = flip_rates_at(w, x, p);
    if (r.down != 0) total += r.down * (Real(fn(w.flipped(x, -2))) - base);
    if (r.up != 0) total += r.up * (Real(fn(w.flipped(x, +2))) - base);
  }
  return total;
}

/// n-particle ASEP generator: each particle jumps left at left_rate and right at
/// right_rate when the target site is vacant.
template <class Real, class G>
  requires std::invocable<G&, const ParticleConfig&>
Real asep_generator_apply(G&& fn, const ParticleConfig& x, const Real& left_rate, const Real& right_rate) {
  Real total{0};
  const Real base = fn(x);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_free = (i + 1 == n) || x[i + 1] != x[i] - 1;
    const bool right_free = (i == 0) || x[i - 1] != x[i] + 1;
    if (left_free && left_rate != 0) total += left_rate * (Real(fn(x.moved(i, -1))) - base);
    if (right_free && right_rate != 0) total += right_rate * (Real(fn(x.moved(i, +1))) - base);
  }
  return total;
}

struct FlipEvent {
  double time;
  Site site;
  int delta;  // +2 or -2
};

/// A sample path of the frozen-boundary dynamics on [0, horizon].
struct Trajectory {
  HeightWindow initial;
  std::vector<FlipEvent> events;
  double horizon = 0;

  HeightWindow final_state() const;
  /// State at time t (events with time <= t applied).
  HeightWindow state_at(double t) const;
};

/// Exact-in-law event-driven sample of the dynamic ASEP on `init` up to time t.
/// Endpoint heights never change.  Deterministic given the seed.
Trajectory simulate_dynamic_asep(const HeightWindow& init, double t, const ModelParams& params,
                                 std::uint64_t seed);

/// Same dynamics without recording events; advances `state` in place.
/// Returns the number of flips.
std::uint64_t evolve_dynamic_asep(HeightWindow& state, double t, const ModelParams& params, Rng& rng);

/// Time of the first flip from `init`, or +infinity when nothing can flip.
double first_flip_time(const HeightWindow& init, const ModelParams& params, Rng& rng);

/// Exact-in-law sample of n-particle ASEP on Z at time t.
ParticleConfig simulate_asep(const ParticleConfig& x, double left_rate, double right_rate, double t,
                             std::uint64_t seed);
ParticleConfig evolve_asep(ParticleConfig x, double left_rate, double right_rate, double t, Rng& rng);

/// Half-width of a window centred at 0 large enough that the frozen boundary
/// does not influence observables at |x| <= max_abs_x up to time t:
/// max_abs_x + ceil(4 (1 + q) t) + 20.
Site window_radius_for(Site max_abs_x, double q, double t);

}  // namespace dasep
