#include "dasep/process.hpp"

#include <cmath>
#include <limits>

namespace dasep {

namespace {

// Per-site total flip rate for the interior of a window.  Only one of the two
// rates at a site can be nonzero, so the direction is implied by the shape.
class RateTable {
 public:
  RateTable(const HeightWindow& w, const ModelParams& p) : params_(p), rates_(w.size(), 0.0) {
    for (Site x = w.x_left() + 1; x < w.x_right(); ++x) refresh(w, x);
  }

  void refresh(const HeightWindow& w, Site x) {
    if (!w.is_interior(x)) return;
    const auto r = flip_rates_at(w, x, params_);
    rates_[index(w, x)] = r.down + r.up;
  }

  double total() const {
    double sum = 0;
    for (double r : rates_) sum += r;
    return sum;
  }

  Site pick(const HeightWindow& w, double target) const {
    double acc = 0;
    Site last = w.x_left();
    for (std::size_t i = 0; i < rates_.size(); ++i) {
      if (rates_[i] <= 0) continue;
      last = w.x_left() + static_cast<Site>(i);
      acc += rates_[i];
      if (target < acc) return last;
    }
    return last;  // rounding at the top end
  }

 private:
  static std::size_t index(const HeightWindow& w, Site x) { return static_cast<std::size_t>(x - w.x_left()); }

  ModelParams params_;
  std::vector<double> rates_;
};

template <class OnFlip>
std::uint64_t run_dynamics(HeightWindow& state, double t, const ModelParams& params, Rng& rng, OnFlip&& on_flip) {
  if (t < 0) throw std::invalid_argument("simulate_dynamic_asep: t must be non-negative");
  validate(params);
  RateTable table(state, params);
  double now = 0;
  std::uint64_t flips = 0;
  for (;;) {
    const double total = table.total();
    if (!(total > 0)) break;
    now += rng.exponential(total);
    if (now > t) break;
    const Site x = table.pick(state, rng.uniform() * total);
    const int delta = state.is_local_max(x) ? -2 : +2;
    state.flip(x, delta);
    on_flip(now, x, delta);
    ++flips;
    table.refresh(state, x - 1);
    table.refresh(state, x);
    table.refresh(state, x + 1);
  }
  return flips;
}

}  // namespace

HeightWindow Trajectory::final_state() const {
  HeightWindow w = initial;
  for (const auto& e : events) w.flip(e.site, e.delta);
  return w;
}

HeightWindow Trajectory::state_at(double t) const {
  HeightWindow w = initial;
  for (const auto& e : events) {
    if (e.time > t) break;
    w.flip(e.site, e.delta);
  }
  return w;
}

Trajectory simulate_dynamic_asep(const HeightWindow& init, double t, const ModelParams& params,
                                 std::uint64_t seed) {
  Trajectory traj{init, {}, t};
  HeightWindow state = init;
  Rng rng(seed);
  run_dynamics(state, t, params, rng,
               [&](double time, Site x, int delta) { traj.events.push_back({time, x, delta}); });
  return traj;
}

std::uint64_t evolve_dynamic_asep(HeightWindow& state, double t, const ModelParams& params, Rng& rng) {
  return run_dynamics(state, t, params, rng, [](double, Site, int) {});
}

double first_flip_time(const HeightWindow& init, const ModelParams& params, Rng& rng) {
  validate(params);
  const double total = RateTable(init, params).total();
  if (!(total > 0)) return std::numeric_limits<double>::infinity();
  return rng.exponential(total);
}

ParticleConfig evolve_asep(ParticleConfig x, double left_rate, double right_rate, double t, Rng& rng) {
  if (t < 0) throw std::invalid_argument("simulate_asep: t must be non-negative");
  if (left_rate < 0 || right_rate < 0) throw std::invalid_argument("simulate_asep: rates must be non-negative");
  std::vector<Site> pos(x.positions().begin(), x.positions().end());
  const std::size_t n = pos.size();
  std::vector<double> rates(2 * n);
  double now = 0;
  for (;;) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool left_free = (i + 1 == n) || pos[i + 1] != pos[i] - 1;
      const bool right_free = (i == 0) || pos[i - 1] != pos[i] + 1;
      rates[2 * i] = left_free ? left_rate : 0.0;
      rates[2 * i + 1] = right_free ? right_rate : 0.0;
      total += rates[2 * i] + rates[2 * i + 1];
    }
    if (!(total > 0)) break;
    now += rng.exponential(total);
    if (now > t) break;
    const double target = rng.uniform() * total;
    double acc = 0;
    std::size_t choice = 0;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      if (rates[j] <= 0) continue;
      choice = j;
      acc += rates[j];
      if (target < acc) break;
    }
    pos[choice / 2] += (choice % 2 == 0) ? -1 : +1;
  }
  return ParticleConfig(std::move(pos));
}

ParticleConfig simulate_asep(const ParticleConfig& x, double left_rate, double right_rate, double t,
                             std::uint64_t seed) {
  Rng rng(seed);
  return evolve_asep(x, left_rate, right_rate, t, rng);
}

Site window_radius_for(Site max_abs_x, double q, double t) {
  return max_abs_x + static_cast<Site>(std::ceil(4 * (1 + q) * t)) + 20;
}

}  // namespace dasep
