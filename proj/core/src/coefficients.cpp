#include "freqlab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqlab/errors.hpp"

namespace freqlab {

CoefficientSet CoefficientSet::none(int dim) {
  CoefficientSet c;
  c.dim_ = dim;
  return c;
}

CoefficientSet CoefficientSet::create(int dim, std::vector<ScalarFunction> drift,
                                      ScalarFunction potential, double bound_m1,
                                      double bound_m0, const TorusGrid& grid, double t_lo,
                                      double t_hi) {
  if (bound_m1 < 1.0 || bound_m0 < 1.0) {
    throw ConfigError("coefficient bounds must satisfy M0, M1 >= 1");
  }
  if (!drift.empty() && int(drift.size()) != dim) {
    throw ConfigError("drift needs one component per dimension");
  }
  CoefficientSet c;
  c.dim_ = dim;
  c.drift_ = std::move(drift);
  c.potential_ = std::move(potential);
  c.bound_m1_ = bound_m1;
  c.bound_m0_ = bound_m0;
  const auto [sup_w, sup_v] = sampled_sup(c, grid, t_lo, t_hi);
  if (sup_w > bound_m1 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "declared M1=" << bound_m1 << " is below the sampled sup |w|=" << sup_w;
    throw ConfigError(msg.str());
  }
  if (sup_v > bound_m0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "declared M0=" << bound_m0 << " is below the sampled sup |v|=" << sup_v;
    throw ConfigError(msg.str());
  }
  return c;
}

double CoefficientSet::drift(int j, const Point& x, double t) const {
  return drift_.empty() ? 0.0 : drift_[j](x, t);
}

double CoefficientSet::potential(const Point& x, double t) const {
  return potential_ ? potential_(x, t) : 0.0;
}

CoefficientSet CoefficientSet::in_moving_frame(const Point& rate) const {
  CoefficientSet c = *this;
  auto shifted = [rate](ScalarFunction f) -> ScalarFunction {
    return [f = std::move(f), rate](const Point& x, double t) {
      const double s = std::abs(t);
      return f({x[0] + rate[0] * s, x[1] + rate[1] * s}, t);
    };
  };
  for (auto& w : c.drift_) w = shifted(w);
  if (c.potential_) c.potential_ = shifted(c.potential_);
  return c;
}

std::pair<double, double> CoefficientSet::sampled_sup(const CoefficientSet& c,
                                                      const TorusGrid& grid, double t_lo,
                                                      double t_hi) {
  const int n = 2 * grid.points();
  const double h = 2.0 * grid.half_period() / n;
  const int instants = 17;
  double sup_w = 0.0, sup_v = 0.0;
  for (int k = 0; k < instants; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / (instants - 1);
    const int rows = grid.dim() == 1 ? 1 : n;
    for (int i0 = 0; i0 < n; ++i0) {
      for (int i1 = 0; i1 < rows; ++i1) {
        const Point x{-grid.half_period() + i0 * h,
                      grid.dim() == 1 ? 0.0 : -grid.half_period() + i1 * h};
        for (int j = 0; j < int(c.drift_.size()); ++j) {
          sup_w = std::max(sup_w, std::abs(c.drift_[j](x, t)));
        }
        if (c.potential_) sup_v = std::max(sup_v, std::abs(c.potential_(x, t)));
      }
    }
  }
  return {sup_w, sup_v};
}

}  // namespace freqlab
