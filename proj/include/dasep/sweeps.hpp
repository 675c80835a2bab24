#pragma once

// Exhaustive sweeps of the exact identities over small windows and placements.

#include <cstdint>
#include <vector>

#include "dasep/lattice.hpp"
#include "dasep/numeric.hpp"
#include "dasep/params.hpp"

namespace dasep {

/// All strictly decreasing n-tuples with entries in [lo, hi].
std::vector<std::vector<Site>> decreasing_tuples(Site lo, Site hi, std::size_t n);

/// Every window of length len starting at x_left whose left value N_{x_left}
/// lies in [n_lo, n_hi].
std::vector<HeightWindow> anchored_windows(Site x_left, std::size_t len, std::int64_t n_lo, std::int64_t n_hi);

struct DualitySweepOptions {
  std::size_t n = 2;
  std::size_t len = 7;
  Site x_left = -3;
  std::int64_t n_lo = -1;   // range of N_{x_left} over the anchors
  std::int64_t n_hi = 8;
  Backend backend = Backend::exact_rational;
  double float_tolerance = 1e-11;  // relative to duality_scale
};

struct DualityRow {
  std::size_t window;  // index into DualitySweep::windows
  std::vector<Site> x;
  double residual;     // exact residual converted to double, or the float residual
  double scale;        // duality_scale (float backend), 0 for exact
  bool pass;
};

struct DualitySweep {
  std::vector<HeightWindow> windows;
  std::vector<DualityRow> rows;
  bool all_pass() const;
  double max_abs_residual() const;
};

/// Residual of the generator identity at every window and every placement of n
/// particles with one site of margin.
DualitySweep duality_sweep(const DualitySweepOptions& opt, const ExactParams& p);

struct TelescopingGroup {
  std::size_t n = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  std::uint64_t cases = 0;
  std::uint64_t degenerate = 0;   // cluster functional vanishes; skipped
  double max_direct = 0;          // |sum L - A - B| along the ratio route
  double max_table = 0;           // same along the case tables
  double max_gap = 0;             // max |ratio term - table term|
  bool pass = true;
};

struct TelescopingSweepOptions {
  std::size_t n_max = 5;
  std::size_t width_max = 4;       // b - a
  Site anchor_lo = -2;             // x in x_i = x + a + b - i
  Site anchor_hi = 1;
  std::int64_t extra_levels = 2;   // N at the left end ranges over [-1, n + extra_levels]
  Backend backend = Backend::exact_rational;
  double float_tolerance = 1e-12;  // relative to the largest term magnitude (at least 1)
};

/// Cluster telescoping over every (n, a, b) and every local height pattern on
/// the sites x + a - 1 .. x + b + 1.
std::vector<TelescopingGroup> telescoping_sweep(const TelescopingSweepOptions& opt, const ExactParams& p);

}  // namespace dasep
