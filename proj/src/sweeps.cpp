#include "dasep/sweeps.hpp"

#include <algorithm>
#include <cmath>

#include "dasep/duality.hpp"

namespace dasep {

std::vector<std::vector<Site>> decreasing_tuples(Site lo, Site hi, std::size_t n) {
  std::vector<std::vector<Site>> out;
  std::vector<Site> cur;
  const auto rec = [&](auto&& self, Site top) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (Site v = top; v >= lo; --v) {
      cur.push_back(v);
      self(self, v - 1);
      cur.pop_back();
    }
  };
  if (n > 0) rec(rec, hi);
  return out;
}

std::vector<HeightWindow> anchored_windows(Site x_left, std::size_t len, std::int64_t n_lo, std::int64_t n_hi) {
  std::vector<HeightWindow> out;
  for (std::int64_t nl = n_lo; nl <= n_hi; ++nl) {
    const Height s_left = x_left + 2 * nl;
    for (std::uint64_t i = 0; i < window_count(len); ++i) out.push_back(window_at(x_left, s_left, len, i));
  }
  return out;
}

bool DualitySweep::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const DualityRow& r) { return r.pass; });
}

double DualitySweep::max_abs_residual() const {
  double m = 0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.residual));
  return m;
}

DualitySweep duality_sweep(const DualitySweepOptions& opt, const ExactParams& p) {
  validate(p);
  if (opt.n < 1 || opt.len < 3) throw std::invalid_argument("duality_sweep: need n >= 1 and len >= 3");
  DualitySweep sweep;
  sweep.windows = anchored_windows(opt.x_left, opt.len, opt.n_lo, opt.n_hi);
  const Site x_right = opt.x_left + static_cast<Site>(opt.len) - 1;
  const auto placements = decreasing_tuples(opt.x_left + 1, x_right - 1, opt.n);
  const ModelParams fp = to_float(p);
  // Exponents are bounded by |x| + |s| + 2n; cache a little beyond that.
  const auto extent = static_cast<std::int64_t>(2 * opt.len + 2 * opt.n);
  std::int64_t range = 8;
  for (const auto& w : sweep.windows)
    for (Height h : w.heights()) range = std::max<std::int64_t>(range, (h < 0 ? -h : h) + extent);
  const DualityEvaluator<Rational> exact(p, range);
  for (std::size_t wi = 0; wi < sweep.windows.size(); ++wi) {
    const HeightWindow& w = sweep.windows[wi];
    for (const auto& pos : placements) {
      const ParticleConfig x(pos);
      DualityRow row{wi, pos, 0.0, 0.0, false};
      if (opt.backend == Backend::exact_rational) {
        const Rational r = check_duality_identity(x, w, exact);
        row.residual = to_double(r);
        row.pass = (r == 0);
      } else {
        row.residual = check_duality_identity(x, w, fp);
        row.scale = duality_scale(x, w, fp);
        row.pass = std::abs(row.residual) <= opt.float_tolerance * std::max(row.scale, 1e-300);
        if (row.scale == 0) row.pass = row.residual == 0;
      }
      sweep.rows.push_back(std::move(row));
    }
  }
  return sweep;
}

namespace {

template <class Real>
double max_term(const TelescopingTerms<Real>& t) {
  double m = std::max(magnitude(t.left_move), magnitude(t.right_move));
  for (const auto& v : t.site_terms) m = std::max(m, magnitude(v));
  return m;
}

}  // namespace

std::vector<TelescopingGroup> telescoping_sweep(const TelescopingSweepOptions& opt, const ExactParams& p) {
  validate(p);
  const ModelParams fp = to_float(p);
  std::vector<TelescopingGroup> groups;
  for (std::size_t n = 1; n <= opt.n_max; ++n) {
    for (std::size_t a = 1; a <= n; ++a) {
      for (std::size_t b = a; b <= n && b - a <= opt.width_max; ++b) {
        TelescopingGroup g;
        g.n = n;
        g.a = a;
        g.b = b;
        const std::size_t len = b - a + 3;
        for (Site anchor = opt.anchor_lo; anchor <= opt.anchor_hi; ++anchor) {
          const Site x_left = anchor + static_cast<Site>(a) - 1;
          const auto windows = anchored_windows(x_left, len, -1, static_cast<std::int64_t>(n) + opt.extra_levels);
          for (const auto& w : windows) {
            if (!cluster_is_nondegenerate(a, b, anchor, w)) {
              ++g.degenerate;
              continue;
            }
            ++g.cases;
            if (opt.backend == Backend::exact_rational) {
              const auto rep = verify_cluster_telescoping(a, b, n, anchor, w, p);
              g.max_direct = std::max(g.max_direct, magnitude(rep.direct_residual));
              g.max_table = std::max(g.max_table, magnitude(rep.table_residual));
              g.max_gap = std::max(g.max_gap, magnitude(rep.route_gap));
              if (rep.direct_residual != 0 || rep.table_residual != 0 || rep.route_gap != 0) g.pass = false;
            } else {
              const auto rep = verify_cluster_telescoping(a, b, n, anchor, w, fp);
              const double scale = std::max({1.0, max_term(rep.direct), max_term(rep.table)});
              const double d = std::abs(rep.direct_residual) / scale;
              const double t = std::abs(rep.table_residual) / scale;
              const double gap = rep.route_gap / scale;
              g.max_direct = std::max(g.max_direct, d);
              g.max_table = std::max(g.max_table, t);
              g.max_gap = std::max(g.max_gap, gap);
              if (!(d < opt.float_tolerance && t < opt.float_tolerance && gap < opt.float_tolerance)) g.pass = false;
            }
          }
        }
        groups.push_back(g);
      }
    }
  }
  return groups;
}

}  // namespace dasep
