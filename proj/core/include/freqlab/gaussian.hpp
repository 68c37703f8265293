#pragma once

// Backward Gaussian kernel G0(x,t) = |t|^{-n/2} exp(-|x|^2 / 4|t|), t < 0,
// with total mass (4 pi)^{n/2}, and the Gaussian-weighted functionals built
// on it. Fields are treated as periodic on R^n.

#include <optional>
#include <vector>

#include "freqlab/fields.hpp"
#include "freqlab/polynomial.hpp"

namespace freqlab {

double kernel(const Point& x, double t, int dim);
double kernel_mass(int dim);

struct KernelParams {
  int dim = 1;
  int lattice_radius = 1;
  double tail_tol = 1e-12;

  // Smallest lattice radius whose omitted images fall below tail_tol.
  static KernelParams for_time(const TorusGrid& grid, double t, double tail_tol = 1e-12);
};

struct GaussianMoments {
  double mass = 0.0;        // int u^2 G0(x - c)
  double grad = 0.0;        // int |grad u|^2 G0(x - c)
  Point first{0.0, 0.0};    // int (x - c) u^2 G0(x - c)
};

// Gaussian moments of one field at one time, reusable across centers.
//
// When the kernel is wide compared to the cell the periodized kernel is
// summed over the lattice images on a doubled grid. Otherwise the integral
// runs over a window around the center, on nodes finer than both the grid
// and the kernel width, with values from the trigonometric interpolant.
class GaussianProbe {
 public:
  GaussianProbe(const Field& u, double t, KernelParams params);
  GaussianProbe(const Field& u, double t, double tail_tol = 1e-12);

  GaussianMoments at(const Point& center) const;
  double time() const noexcept { return t_; }
  bool periodized() const noexcept { return full_cell_; }

 private:
  GaussianMoments full_cell(const Point& center) const;
  GaussianMoments window(const Point& center) const;

  TrigInterpolant interp_;
  double t_;
  KernelParams params_;
  double window_radius_;
  double node_step_;
  bool full_cell_;
  // Doubled-grid samples for the periodized path.
  std::vector<double> fine_nodes_;
  std::vector<double> u2_, grad2_;
};

double phi(const Field& u, double t, const Point& center = {0.0, 0.0});

// int_Omega |grad u|^2 / int_Omega u^2
double dirichlet_quotient_cell(const Field& u);

double gaussian_rayleigh(const Field& u, double t, const Point& center = {0.0, 0.0});

// int_{R^n} P(x, t) G0(x, t) dx for a homogeneous polynomial P.
double moment_homogeneous(const CaloricPolynomial& poly, double t);

struct MomentSpec {
  int dim = 1;
  std::array<int, 2> mu{0, 0};
  int l = 0;
  std::optional<double> radius;  // empty: whole space

  int degree() const noexcept { return mu[0] + (dim == 2 ? mu[1] : 0) + 2 * l; }
};

// int_{B(0,r)} x^mu t^l G0(x, t) dx, exactly.
double moment_ball(const MomentSpec& spec, double t);

// Upper bound for int_{|x|>R} u^2 G0 given sup|u| <= u_sup:
//   C(n) u_sup^2 |t|^{1/2} / R * exp(-R^2 / 8|t|),  C(1) = 4, C(2) = 8 pi e^{-1/2}.
double tail_bound(double u_sup, double R, double t, int dim);

}  // namespace freqlab
