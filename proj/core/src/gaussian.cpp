#include "freqlab/gaussian.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "freqlab/errors.hpp"

namespace freqlab {
namespace {

// Exponent budget for truncating the kernel: covers tail_tol plus the
// dynamic range between sup u^2 and the smallest phi values we trust.
constexpr double kExtraDecades = 60.0;

void require_negative(double t) {
  if (!(t < 0.0)) throw DomainError("kernel time must be negative");
}

double window_for(double t, double tol) {
  const double sigma = std::sqrt(2.0 * std::abs(t));
  return sigma * std::sqrt(2.0 * (std::log(1.0 / tol) + kExtraDecades));
}

// 1-D whole-line moment of x^p against exp(-x^2/4|t|) |t|^{-1/2}.
double line_moment(int p, double abs_t) {
  if (p % 2 != 0) return 0.0;
  const int k = p / 2;
  return 2.0 * std::pow(4.0 * abs_t, k) * std::tgamma(k + 0.5);
}

}  // namespace

double kernel(const Point& x, double t, int dim) {
  require_negative(t);
  const double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
  return std::pow(std::abs(t), -0.5 * dim) * std::exp(-r2 / (4.0 * std::abs(t)));
}

double kernel_mass(int dim) { return std::pow(4.0 * kPi, 0.5 * dim); }

KernelParams KernelParams::for_time(const TorusGrid& grid, double t, double tail_tol) {
  require_negative(t);
  const double r = window_for(t, tail_tol);
  return {grid.dim(), int(std::ceil(r / (2.0 * grid.half_period()))) + 1, tail_tol};
}

GaussianProbe::GaussianProbe(const Field& u, double t, double tail_tol)
    : GaussianProbe(u, t, KernelParams::for_time(u.grid(), t, tail_tol)) {}

GaussianProbe::GaussianProbe(const Field& u, double t, KernelParams params)
    : interp_(u), t_(t), params_(params) {
  require_negative(t);
  if (params.lattice_radius < 1) throw DomainError("lattice radius must be at least 1");
  const auto& g = u.grid();
  const double L = g.half_period();
  const double h = g.spacing();
  const double sigma = std::sqrt(2.0 * std::abs(t));
  window_radius_ =
      std::min(window_for(t, params.tail_tol), (2.0 * params.lattice_radius + 1.0) * L);
  full_cell_ = sigma >= 2.0 * h && window_radius_ >= L;
  node_step_ = full_cell_ ? 0.5 * h : std::min(0.5 * h, 0.25 * sigma);
  if (!full_cell_) return;

  const int nf = 2 * g.points();
  fine_nodes_.resize(nf);
  for (int k = 0; k < nf; ++k) fine_nodes_[k] = -L + k * node_step_;
  const auto v = interp_.on_tensor(fine_nodes_, fine_nodes_);
  u2_.resize(v.size());
  grad2_.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) u2_[i] = v[i] * v[i];
  for (int j = 0; j < g.dim(); ++j) {
    const auto d = interp_.on_tensor(fine_nodes_, fine_nodes_, {j == 0, j == 1});
    for (std::size_t i = 0; i < d.size(); ++i) grad2_[i] += d[i] * d[i];
  }
}

GaussianMoments GaussianProbe::at(const Point& center) const {
  return full_cell_ ? full_cell(center) : window(center);
}

GaussianMoments GaussianProbe::full_cell(const Point& center) const {
  const int dim = params_.dim;
  const double L = interp_.grid().half_period();
  const double a = std::abs(t_);
  const double norm = 1.0 / std::sqrt(a);
  const int J = params_.lattice_radius;
  const std::size_t nf = fine_nodes_.size();

  // Per-axis periodized kernel and its first moment.
  std::array<std::vector<double>, 2> w, m;
  for (int ax = 0; ax < dim; ++ax) {
    w[ax].assign(nf, 0.0);
    m[ax].assign(nf, 0.0);
    for (std::size_t k = 0; k < nf; ++k) {
      for (int j = -J; j <= J; ++j) {
        const double s = fine_nodes_[k] - center[ax] + 2.0 * L * j;
        const double gk = norm * std::exp(-s * s / (4.0 * a));
        w[ax][k] += gk;
        m[ax][k] += s * gk;
      }
    }
  }

  GaussianMoments r;
  const double cell = std::pow(node_step_, dim);
  if (dim == 1) {
    for (std::size_t k = 0; k < nf; ++k) {
      r.mass += u2_[k] * w[0][k];
      r.grad += grad2_[k] * w[0][k];
      r.first[0] += u2_[k] * m[0][k];
    }
  } else {
    for (std::size_t k0 = 0; k0 < nf; ++k0) {
      double mass = 0.0, grad = 0.0, first1 = 0.0;
      for (std::size_t k1 = 0; k1 < nf; ++k1) {
        const double f = u2_[k0 * nf + k1];
        mass += f * w[1][k1];
        grad += grad2_[k0 * nf + k1] * w[1][k1];
        first1 += f * m[1][k1];
      }
      r.mass += mass * w[0][k0];
      r.grad += grad * w[0][k0];
      r.first[0] += mass * m[0][k0];
      r.first[1] += first1 * w[0][k0];
    }
  }
  r.mass *= cell;
  r.grad *= cell;
  r.first[0] *= cell;
  r.first[1] *= cell;
  return r;
}

GaussianMoments GaussianProbe::window(const Point& center) const {
  const int dim = params_.dim;
  const double a = std::abs(t_);
  const double norm = 1.0 / std::sqrt(a);
  const int K = int(std::ceil(window_radius_ / node_step_));
  const std::size_t nk = 2 * K + 1;

  std::array<std::vector<double>, 2> nodes, w;
  for (int ax = 0; ax < dim; ++ax) {
    nodes[ax].resize(nk);
    w[ax].resize(nk);
    for (int k = -K; k <= K; ++k) {
      const double s = k * node_step_;
      nodes[ax][k + K] = center[ax] + s;
      w[ax][k + K] = norm * std::exp(-s * s / (4.0 * a));
    }
  }
  if (dim == 1) nodes[1] = {0.0};

  const auto v = interp_.on_tensor(nodes[0], nodes[1]);
  std::vector<double> g2(v.size(), 0.0);
  for (int j = 0; j < dim; ++j) {
    const auto d = interp_.on_tensor(nodes[0], nodes[1], {j == 0, j == 1});
    for (std::size_t i = 0; i < d.size(); ++i) g2[i] += d[i] * d[i];
  }

  GaussianMoments r;
  if (dim == 1) {
    for (std::size_t k = 0; k < nk; ++k) {
      const double s = (int(k) - K) * node_step_;
      r.mass += v[k] * v[k] * w[0][k];
      r.grad += g2[k] * w[0][k];
      r.first[0] += s * v[k] * v[k] * w[0][k];
    }
  } else {
    for (std::size_t k0 = 0; k0 < nk; ++k0) {
      const double s0 = (int(k0) - K) * node_step_;
      for (std::size_t k1 = 0; k1 < nk; ++k1) {
        const double s1 = (int(k1) - K) * node_step_;
        const double ww = w[0][k0] * w[1][k1];
        const double f = v[k0 * nk + k1] * v[k0 * nk + k1] * ww;
        r.mass += f;
        r.grad += g2[k0 * nk + k1] * ww;
        r.first[0] += s0 * f;
        r.first[1] += s1 * f;
      }
    }
  }
  const double cell = std::pow(node_step_, dim);
  r.mass *= cell;
  r.grad *= cell;
  r.first[0] *= cell;
  r.first[1] *= cell;
  return r;
}

double phi(const Field& u, double t, const Point& center) {
  return GaussianProbe(u, t).at(center).mass;
}

double dirichlet_quotient_cell(const Field& u) {
  const double den = integrate_cell(square(u));
  if (!(den > 0.0)) throw DegenerateInputError("Dirichlet quotient of a zero field");
  return integrate_cell(gradient_energy(u)) / den;
}

double gaussian_rayleigh(const Field& u, double t, const Point& center) {
  const auto m = GaussianProbe(u, t).at(center);
  if (!(m.mass > 0.0)) throw DegenerateInputError("Gaussian-weighted mass vanishes");
  return m.grad / m.mass;
}

double moment_homogeneous(const CaloricPolynomial& poly, double t) {
  require_negative(t);
  if (!poly.is_homogeneous()) throw DomainError("polynomial is not homogeneous");
  const double a = std::abs(t);
  double s = 0.0;
  for (const auto& m : poly.terms()) {
    double v = m.coeff * std::pow(t, m.l) * line_moment(m.mu[0], a);
    if (poly.dim() == 2) v *= line_moment(m.mu[1], a);
    s += v;
  }
  return s;
}

double moment_ball(const MomentSpec& spec, double t) {
  require_negative(t);
  if (spec.dim != 1 && spec.dim != 2) throw DomainError("moment dimension must be 1 or 2");
  if (spec.mu[0] < 0 || spec.mu[1] < 0 || spec.l < 0) throw DomainError("negative exponent");
  if (spec.radius && !(*spec.radius > 0.0)) throw DomainError("ball radius must be positive");
  const int n = spec.dim;
  const int mu1 = n == 2 ? spec.mu[1] : 0;
  if (spec.mu[0] % 2 != 0 || mu1 % 2 != 0) return 0.0;

  const double abs_t = std::abs(t);
  const int p = spec.mu[0] + mu1;
  // Sphere moment of omega^mu over S^{n-1}.
  double sphere = 2.0 * std::tgamma((spec.mu[0] + 1) * 0.5) / std::tgamma((p + n) * 0.5);
  if (n == 2) sphere *= std::tgamma((mu1 + 1) * 0.5);
  // Radial part: substitute z = rho^2 / 4|t|.
  const double a = 0.5 * (p + n);
  double radial_gamma = std::tgamma(a);
  if (spec.radius) {
    radial_gamma *= boost::math::gamma_p(a, (*spec.radius) * (*spec.radius) / (4.0 * abs_t));
  }
  const double radial =
      std::pow(4.0 * abs_t, 0.5 * (p + n - 1)) * std::pow(abs_t, 0.5 * (1 - n)) * radial_gamma;
  return std::pow(t, spec.l) * sphere * radial;
}

double tail_bound(double u_sup, double R, double t, int dim) {
  require_negative(t);
  if (!(R > 0.0)) throw DomainError("tail radius must be positive");
  if (dim != 1 && dim != 2) throw DomainError("dimension must be 1 or 2");
  const double c = dim == 1 ? 4.0 : 8.0 * kPi * std::exp(-0.5);
  const double a = std::abs(t);
  return c * u_sup * u_sup * std::sqrt(a) / R * std::exp(-R * R / (8.0 * a));
}

}  // namespace freqlab
