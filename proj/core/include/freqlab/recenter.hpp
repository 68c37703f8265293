#pragma once

#include "freqlab/fields.hpp"
#include "freqlab/solver.hpp"

namespace freqlab {

struct RecenterResult {
  Point x_eps{0.0, 0.0};
  double quotient_at_x = 0.0;
  double cell_quotient_q = 0.0;
  double epsilon = 0.0;
  Point drift_a{0.0, 0.0};  // -x_eps / epsilon
};

// 1 / (K0 (M1^2 + M0^{2/3})), kept inside (0, horizon / 2].
double choose_epsilon(double M0, double M1, double K0, double horizon = 1.0);

// Minimizes the Gaussian Rayleigh quotient of u at t = -epsilon over centers
// in the cell: coarse scan, then coordinate golden-section refinement.
// Throws ResolutionError when the minimum exceeds the cell quotient + tol.
RecenterResult find_x_eps(const Field& u, double epsilon, int coarse_n = 32, double tol = 1e-6);

// Default constant C of the ball bound: 8 (2 pi)^{n/2}.
double default_ball_constant(int dim);

// int_Omega u^2 / int_{B_1} u^2
double concentration_ratio(const Field& u);

// Search restricted to |x| < 2. Throws PreconditionError when the
// concentration ratio exceeds M, ResolutionError when the quotient exceeds
// C * M * q.
RecenterResult find_x_eps_ball(const Field& u, double epsilon, double M, double C = 0.0,
                               int coarse_n = 32, double tol = 1e-6);

// u~(x, t) = u(x - (x_eps/epsilon) t, t); records drift a = -x_eps/epsilon on
// top of the trajectory's existing drift and moves the coefficients along.
Trajectory galilean_recenter(const Trajectory& traj, const Point& x_eps, double epsilon);

}  // namespace freqlab
