#pragma once

// Time integration of  u_t = Lap u + (a + w) . grad u + v u  on the torus.
//
// Diffusion is integrated exactly through the integrating factor
// exp(-|k|^2 dt); drift and potential are advanced with Heun's method in the
// integrating-factor frame (IF-RK2). Data are launched at t_start < 0 and
// marched toward t = 0^-.

#include <cstddef>
#include <string>
#include <vector>

#include "freqlab/coefficients.hpp"
#include "freqlab/fields.hpp"

namespace freqlab {

struct SolveSchedule {
  double t_start = -1.0;
  double t_end = -1e-3;
  std::vector<double> sample_times;
  double max_dt = 1e-4;

  // Geometric samples t_k = -epsilon * rho^k (k = 0..count-1) truncated at
  // t_end = -t_end_factor * epsilon, preceded by `lead_samples` uniformly
  // spaced samples in [t_start, -epsilon) so the Dirichlet quotient is
  // observed before the frequency window opens.
  static SolveSchedule geometric(double t_start, double epsilon, double rho = 0.8,
                                 int count = 40, double t_end_factor = 1e-3,
                                 int lead_samples = 8, double max_dt = 1e-4);

  // Throws DomainError when the invariants do not hold.
  void validate() const;
};

struct Trajectory {
  std::vector<Field> fields;
  CoefficientSet coefficients;
  Point drift_a{0.0, 0.0};
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return fields.size(); }
  const TorusGrid& grid() const { return fields.front().grid(); }
  std::vector<double> times() const;
};

// Largest step allowed by the advective restriction
//   dt <= 0.5 * spacing / (|a|_inf + M1).
double admissible_dt(const TorusGrid& grid, const CoefficientSet& coeffs, const Point& drift_a);

// One IF-RK2 step from u.time() to u.time() + dt. Throws StabilityError when
// dt exceeds admissible_dt.
Field step(const Field& u, const CoefficientSet& coeffs, const Point& drift_a, double dt);

// Throws DegenerateInputError for (numerically) zero data and BlowUpError
// when the state stops being finite.
Trajectory solve(const Field& u0, const CoefficientSet& coeffs, const Point& drift_a,
                 const SolveSchedule& schedule);

// Discrete L^2 norm over the cell of  u_t - Lap u - (a + w).grad u - v u  at
// an interior sample, with u_t from the three-point nonuniform stencil.
double residual(const Trajectory& traj, std::size_t index);

}  // namespace freqlab
