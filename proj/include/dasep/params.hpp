#pragma once

#include <stdexcept>

#include "dasep/numeric.hpp"

namespace dasep {

/// The asymmetry q in (0,1) and the dynamic parameter alpha > 0.
template <class Real>
struct Params {
  Real q;
  Real alpha;
};

using ModelParams = Params<double>;
using ExactParams = Params<Rational>;

template <class Real>
void validate(const Params<Real>& p) {
  if (!(p.q > 0 && p.q < 1)) throw std::invalid_argument("q must lie in (0,1)");
  if (!(p.alpha > 0)) throw std::invalid_argument("alpha must be positive");
}

inline ModelParams to_float(const ExactParams& p) {
  return {to_double(p.q), to_double(p.alpha)};
}

/// Truncation control for infinite products and series.
struct SeriesControl {
  double tail_tolerance = 1e-14;
  int max_terms = 10'000;

  void validate() const {
    if (!(tail_tolerance > 0)) throw std::invalid_argument("tail_tolerance must be positive");
    if (max_terms < 1) throw std::invalid_argument("max_terms must be at least 1");
  }
};

}  // namespace dasep
