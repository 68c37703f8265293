#pragma once

// Similarity variables y = x / sqrt(-t), tau = -log(-t), with
//   U(y, tau) = exp(-|y|^2/8) u(y e^{-tau/2}, -e^{-tau})
// and the operator H = -Lap + |y|^2/16 - n/4.

#include <cstddef>
#include <vector>

#include "freqlab/fields.hpp"
#include "freqlab/solver.hpp"

namespace freqlab {

struct YGrid {
  int dim = 1;
  double half_width = 20.0;
  int points = 801;  // per axis, odd so y = 0 is a node

  static YGrid make(int dim, double half_width = 20.0, double step = 0.0);

  double step() const noexcept { return 2.0 * half_width / (points - 1); }
  double coordinate(int k) const noexcept { return -half_width + k * step(); }
  std::size_t size() const noexcept;
  std::vector<double> axis() const;
  bool operator==(const YGrid&) const = default;
};

class SimilarityField {
 public:
  SimilarityField(YGrid grid, std::vector<double> values, double tau);

  const YGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double tau() const noexcept { return tau_; }
  double max_abs() const noexcept;
  // Largest |U| on the outer frame of the y-box.
  double boundary_max() const noexcept;

  // Trapezoid inner product on the y-grid.
  double dot(const SimilarityField& other) const;
  double squared_norm() const { return dot(*this); }

  SimilarityField combine(double a, const SimilarityField& other, double b) const;

 private:
  YGrid grid_;
  std::vector<double> values_;
  double tau_;
};

// Pulls u back to similarity variables; u.time() must be negative.
// Throws ResolutionError when e^{-tau/2} R_y is below one torus spacing.
SimilarityField to_similarity(const Field& u, const YGrid& ygrid);
SimilarityField to_similarity(const Field& u, double epsilon);

// Sixth-order central differences; values outside the box are zero.
// Throws ResolutionError unless the boundary is below 1e-12 of the maximum.
SimilarityField apply_H(const SimilarityField& U);

// ||grad U||^2 + ||y U||^2 / 16 - n/4 ||U||^2
double quadratic_form(const SimilarityField& U);

double qbar(const SimilarityField& U, double tau, const Point& drift_a);

struct FrequencyTrace {
  std::vector<double> times;
  std::vector<double> taus;
  std::vector<double> phi_vals;
  std::vector<double> q_vals;
  std::vector<double> Q_vals;
  std::vector<double> Qbar_vals;
  // Samples whose Gaussian mass is well above the round-off floor of the field.
  std::vector<bool> trusted;
  // Largest relative gap between the physical and similarity-space values of
  // phi and (HU, U); NaN where the y-grid does not resolve the pullback.
  std::vector<double> cross_check;
  Point drift_a{0.0, 0.0};
  double epsilon = 0.0;
  double tau0 = 0.0;

  std::size_t size() const noexcept { return taus.size(); }
  std::vector<std::size_t> trusted_indices() const;
};

struct TraceOptions {
  bool cross_check = true;
  double trust_factor = 1e3;
};

// Uses the trajectory samples with t in [-epsilon, 0).
FrequencyTrace frequency_trace(const Trajectory& traj, const Point& drift_a, double epsilon,
                               const TraceOptions& options = {});

// Centered differences of Qbar in tau (one-sided at the ends).
std::vector<double> qbar_derivative_diag(const FrequencyTrace& trace);

}  // namespace freqlab
