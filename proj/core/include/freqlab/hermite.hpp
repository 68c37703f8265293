#pragma once

#include <map>
#include <vector>

#include "freqlab/polynomial.hpp"
#include "freqlab/similarity.hpp"
#include "freqlab/solver.hpp"

namespace freqlab {

// Hermite function h_k(x) exp(-x^2/2), h_k the physicists' polynomial.
double hermite_fn(int k, double x);

// prod_i h~_{alpha_i}(x_i) / sqrt(2^{alpha_i} alpha_i! sqrt(pi)), orthonormal on R^n.
double phi_alpha(const MultiIndex& alpha, const Point& x);

// phi_alpha(y/2) sampled on a y-grid.
SimilarityField scaled_basis(const MultiIndex& alpha, const YGrid& grid);

struct Projection {
  // Expansion coefficients against phi_alpha(y/2).
  std::map<MultiIndex, double> coefficients;
  // Squared-norm share carried by each basis direction.
  std::map<MultiIndex, double> energy;
  double residual_norm = 0.0;
  double norm = 0.0;

  double energy_of_order(int order) const;
};

inline constexpr int kMaxProjectionOrder = 12;

// Least-squares projection onto span{phi_alpha(y/2) : |alpha| <= max_order}
// using the discrete Gram matrix of the y-grid quadrature.
Projection project(const SimilarityField& U, int max_order);

// min over m >= 0 of |q - m/2|
double spectrum_dist(double q);
int nearest_spectrum_index(double q);

inline constexpr int kMaxCaloricDegree = 8;

// Products of heat polynomials, one per multi-index of order d.
std::vector<CaloricPolynomial> caloric_basis(int d, int dim);

struct CaloricFit {
  CaloricPolynomial polynomial;
  // sup |u - P| / |(x,t)|^d relative to sup |u| / |(x,t)|^d on the innermost cylinder.
  double residual = 0.0;
  bool degenerate = false;
  std::vector<double> radii;
};

CaloricFit fit_caloric(const Trajectory& traj, int d);

}  // namespace freqlab
