#include "freqlab/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "freqlab/errors.hpp"

namespace freqlab {
namespace {

double hermite_norm(int k) {
  // sqrt(2^k k! sqrt(pi)), via logs to stay finite for large k.
  return std::exp(0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0) + 0.5 * std::log(kPi)));
}

std::vector<MultiIndex> indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int o = 0; o <= max_order; ++o) {
    const auto level = indices_of_order(dim, o);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace

double hermite_fn(int k, double x) {
  if (k < 0) throw DomainError("Hermite index must be non-negative");
  double prev = std::exp(-0.5 * x * x);
  if (k == 0) return prev;
  double cur = 2.0 * x * prev;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double phi_alpha(const MultiIndex& alpha, const Point& x) {
  double v = hermite_fn(alpha.components[0], x[0]) / hermite_norm(alpha.components[0]);
  if (alpha.dim == 2) {
    v *= hermite_fn(alpha.components[1], x[1]) / hermite_norm(alpha.components[1]);
  }
  return v;
}

SimilarityField scaled_basis(const MultiIndex& alpha, const YGrid& grid) {
  if (alpha.dim != grid.dim) throw DomainError("multi-index and y-grid dimensions differ");
  const auto y = grid.axis();
  const int p = grid.points;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point x = grid.dim == 1 ? Point{0.5 * y[i], 0.0}
                                  : Point{0.5 * y[i / p], 0.5 * y[i % p]};
    v[i] = phi_alpha(alpha, x);
  }
  return SimilarityField(grid, std::move(v), 0.0);
}

double Projection::energy_of_order(int order) const {
  double s = 0.0;
  for (const auto& [alpha, e] : energy) {
    if (alpha.order() == order) s += e;
  }
  return s;
}

Projection project(const SimilarityField& U, int max_order) {
  if (max_order < 0 || max_order > kMaxProjectionOrder) {
    throw DomainError("projection order must lie in [0, " +
                      std::to_string(kMaxProjectionOrder) + "]");
  }
  if (U.boundary_max() > 1e-12 * U.max_abs()) {
    throw ResolutionError("similarity field is not resolved at the edge of the y-box");
  }
  const auto& g = U.grid();
  const int p = g.points;
  const int K = max_order + 1;
  const double dy = g.step();
  const auto y = g.axis();

  Eigen::MatrixXd B(K, p);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < p; ++j) B(k, j) = hermite_fn(k, 0.5 * y[j]) / hermite_norm(k);
  }
  const Eigen::MatrixXd G1 = B * B.transpose() * dy;
  Eigen::MatrixXd C;  // C(k0, k1) = <U, b_k0 (x) b_k1>
  if (g.dim == 1) {
    const Eigen::Map<const Eigen::VectorXd> u(U.values().data(), p);
    C = B * u * dy;
  } else {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        u(U.values().data(), p, p);
    C = B * u * B.transpose() * (dy * dy);
  }

  const auto idx = indices_up_to(g.dim, max_order);
  const int m = int(idx.size());
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (int a = 0; a < m; ++a) {
    const auto& ia = idx[a].components;
    rhs(a) = g.dim == 1 ? C(ia[0], 0) : C(ia[0], ia[1]);
    for (int b = 0; b < m; ++b) {
      const auto& ib = idx[b].components;
      gram(a, b) = G1(ia[0], ib[0]) * (g.dim == 2 ? G1(ia[1], ib[1]) : 1.0);
    }
  }
  const Eigen::VectorXd c = gram.ldlt().solve(rhs);
  const Eigen::VectorXd gc = gram * c;

  Projection out;
  for (int a = 0; a < m; ++a) {
    out.coefficients[idx[a]] = c(a);
    out.energy[idx[a]] = c(a) * gc(a);
  }

  // Residual from the reconstruction, not from ||U||^2 - c'Gc, which cancels.
  std::vector<double> r(U.values());
  for (int a = 0; a < m; ++a) {
    const auto& ia = idx[a].components;
    if (g.dim == 1) {
      for (int j = 0; j < p; ++j) r[j] -= c(a) * B(ia[0], j);
    } else {
      for (int j0 = 0; j0 < p; ++j0) {
        const double s = c(a) * B(ia[0], j0);
        for (int j1 = 0; j1 < p; ++j1) r[std::size_t(j0) * p + j1] -= s * B(ia[1], j1);
      }
    }
  }
  double rr = 0.0;
  for (double v : r) rr += v * v;
  out.residual_norm = std::sqrt(rr * std::pow(dy, g.dim));
  out.norm = std::sqrt(U.squared_norm());
  return out;
}

int nearest_spectrum_index(double q) {
  if (!(q > 0.0)) return 0;
  const double two_q = 2.0 * q;
  const double lo = std::floor(two_q);
  // Ties go to the smaller index.
  return int(two_q - lo > 0.5 ? lo + 1.0 : lo);
}

double spectrum_dist(double q) { return std::abs(q - 0.5 * nearest_spectrum_index(q)); }

std::vector<CaloricPolynomial> caloric_basis(int d, int dim) {
  if (d < 0 || d > kMaxCaloricDegree) {
    throw DomainError("caloric degree must lie in [0, " + std::to_string(kMaxCaloricDegree) +
                      "]");
  }
  if (dim != 1 && dim != 2) throw DomainError("dimension must be 1 or 2");
  std::vector<CaloricPolynomial> basis;
  for (const auto& alpha : indices_of_order(dim, d)) {
    CaloricPolynomial p = heat_polynomial(dim, 0, alpha.components[0]);
    if (dim == 2) {
      const CaloricPolynomial q = heat_polynomial(dim, 1, alpha.components[1]);
      std::vector<Monomial> prod;
      for (const auto& a : p.terms()) {
        for (const auto& b : q.terms()) {
          prod.push_back({{a.mu[0] + b.mu[0], a.mu[1] + b.mu[1]}, a.l + b.l, a.coeff * b.coeff});
        }
      }
      p = CaloricPolynomial(dim, std::move(prod));
    }
    basis.push_back(std::move(p));
  }
  return basis;
}

CaloricFit fit_caloric(const Trajectory& traj, int d) {
  const auto basis = caloric_basis(d, traj.size() ? traj.grid().dim() : 1);
  if (traj.size() == 0) throw DomainError("empty trajectory");
  const int dim = traj.grid().dim();
  const int nb = int(basis.size());
  constexpr int kNodes = 9;
  constexpr int kMinTimes = 3;

  std::vector<double> radii;
  for (double r = 1.0; r > 1e-6; r *= 0.5) {
    const auto inside = std::count_if(traj.fields.begin(), traj.fields.end(), [r](const Field& f) {
      return f.time() > -r * r && f.time() < 0.0;
    });
    if (inside < kMinTimes) break;
    radii.push_back(r);
  }
  if (radii.empty()) throw DomainError("too few trajectory samples inside the unit cylinder");

  struct Sample {
    Point x;
    double t, u, rho;
    std::size_t radius;
  };
  std::vector<Sample> samples;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    std::vector<double> nodes(kNodes);
    for (int k = 0; k < kNodes; ++k) nodes[k] = r * (-1.0 + 2.0 * k / (kNodes - 1));
    const std::vector<double> zero{0.0};
    for (const auto& f : traj.fields) {
      const double t = f.time();
      if (!(t > -r * r && t < 0.0)) continue;
      const auto v = TrigInterpolant(f).on_tensor(nodes, dim == 2 ? std::span<const double>(nodes)
                                                                  : std::span<const double>(zero));
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Point x = dim == 1 ? Point{nodes[i], 0.0}
                                 : Point{nodes[i / kNodes], nodes[i % kNodes]};
        const double r2 = x[0] * x[0] + x[1] * x[1];
        if (r2 > r * r * (1.0 + 1e-12)) continue;
        samples.push_back({x, t, v[i], std::sqrt(r2 - t), ri});
      }
    }
  }
  if (int(samples.size()) < 2 * nb) throw DomainError("too few samples for the caloric fit");
  double umax = 0.0;
  for (const auto& s : samples) umax = std::max(umax, std::abs(s.u));
  if (umax == 0.0) throw DegenerateInputError("trajectory vanishes on the unit cylinder");

  Eigen::MatrixXd A(samples.size(), nb);
  Eigen::VectorXd b(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double w = std::pow(s.rho, -d);
    for (int j = 0; j < nb; ++j) A(i, j) = w * basis[j].evaluate(s.x, s.t);
    b(i) = w * s.u;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);

  CaloricPolynomial p(dim, {});
  for (int j = 0; j < nb; ++j) p = p + basis[j].scaled(c(j));

  const std::size_t inner = radii.size() - 1;
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    if (s.radius != inner) continue;
    const double w = std::pow(s.rho, -d);
    num = std::max(num, w * std::abs(s.u - p.evaluate(s.x, s.t)));
    den = std::max(den, w * std::abs(s.u));
  }
  CaloricFit fit{p, den > 0.0 ? num / den : 1.0, c.cwiseAbs().maxCoeff() < 1e-8, radii};
  return fit;
}

}  // namespace freqlab
