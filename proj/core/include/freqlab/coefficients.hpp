#pragma once

#include <utility>
#include <vector>

#include "freqlab/fields.hpp"

namespace freqlab {

// Lower-order coefficients of  u_t - Lap u = w . grad u + v u  with declared
// sup bounds |w_j| <= M1 and |v| <= M0. Empty descriptors mean "identically
// zero", which lets the solver skip the explicit stage entirely.
class CoefficientSet {
 public:
  // Zero coefficients with the minimal bounds M0 = M1 = 1.
  static CoefficientSet none(int dim);

  // Checks the declared bounds by dense sampling (twice the grid resolution,
  // 17 instants in [t_lo, t_hi]); throws ConfigError on violation or when a
  // bound is below 1.
  static CoefficientSet create(int dim, std::vector<ScalarFunction> drift,
                               ScalarFunction potential, double bound_m1, double bound_m0,
                               const TorusGrid& grid, double t_lo, double t_hi);

  int dim() const noexcept { return dim_; }
  bool has_drift() const noexcept { return !drift_.empty(); }
  bool has_potential() const noexcept { return bool(potential_); }
  double bound_m1() const noexcept { return bound_m1_; }
  double bound_m0() const noexcept { return bound_m0_; }

  double drift(int j, const Point& x, double t) const;
  double potential(const Point& x, double t) const;

  // Coefficients seen in a frame moving as x -> x + rate * |t|, i.e. the
  // descriptors composed with that translation.
  CoefficientSet in_moving_frame(const Point& rate) const;

  // Largest sampled |w_j| and |v| on the given grid and instants.
  static std::pair<double, double> sampled_sup(const CoefficientSet& c, const TorusGrid& grid,
                                               double t_lo, double t_hi);

 private:
  int dim_ = 1;
  std::vector<ScalarFunction> drift_;
  ScalarFunction potential_;
  double bound_m1_ = 1.0;
  double bound_m0_ = 1.0;
};

}  // namespace freqlab
