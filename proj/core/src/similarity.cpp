#include "freqlab/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freqlab/errors.hpp"
#include "freqlab/gaussian.hpp"

namespace freqlab {
namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

double default_step(int dim) { return dim == 1 ? 0.05 : 0.1; }

}  // namespace

YGrid YGrid::make(int dim, double half_width, double step) {
  if (dim != 1 && dim != 2) throw DomainError("y-grid dimension must be 1 or 2");
  if (!(half_width > 0.0)) throw DomainError("y-grid half width must be positive");
  if (step <= 0.0) step = default_step(dim);
  int points = int(std::lround(2.0 * half_width / step)) + 1;
  if (points % 2 == 0) ++points;
  return {dim, half_width, points};
}

std::size_t YGrid::size() const noexcept {
  return dim == 1 ? std::size_t(points) : std::size_t(points) * points;
}

std::vector<double> YGrid::axis() const {
  std::vector<double> y(points);
  for (int k = 0; k < points; ++k) y[k] = coordinate(k);
  return y;
}

SimilarityField::SimilarityField(YGrid grid, std::vector<double> values, double tau)
    : grid_(grid), values_(std::move(values)), tau_(tau) {
  if (values_.size() != grid_.size()) throw DomainError("value count does not match y-grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteError("similarity field has a non-finite value");
  }
}

double SimilarityField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SimilarityField::boundary_max() const noexcept {
  const int p = grid_.points;
  if (grid_.dim == 1) return std::max(std::abs(values_.front()), std::abs(values_.back()));
  double m = 0.0;
  for (int k = 0; k < p; ++k) {
    m = std::max({m, std::abs(values_[k]), std::abs(values_[std::size_t(p - 1) * p + k]),
                  std::abs(values_[std::size_t(k) * p]),
                  std::abs(values_[std::size_t(k) * p + p - 1])});
  }
  return m;
}

double SimilarityField::dot(const SimilarityField& other) const {
  if (!(other.grid_ == grid_)) throw DomainError("similarity fields live on different y-grids");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
  return s * std::pow(grid_.step(), grid_.dim);
}

SimilarityField SimilarityField::combine(double a, const SimilarityField& other, double b) const {
  if (!(other.grid_ == grid_)) throw DomainError("similarity fields live on different y-grids");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * values_[i] + b * other.values_[i];
  return SimilarityField(grid_, std::move(v), tau_);
}

SimilarityField to_similarity(const Field& u, const YGrid& ygrid) {
  const double t = u.time();
  if (!(t < 0.0)) throw DomainError("similarity variables need t < 0");
  if (ygrid.dim != u.grid().dim()) throw DomainError("y-grid and field dimensions differ");
  const double scale = std::sqrt(-t);
  if (scale * ygrid.half_width < u.grid().spacing()) {
    throw ResolutionError("similarity window is narrower than one grid spacing at t = " +
                          std::to_string(t));
  }
  const auto y = ygrid.axis();
  std::vector<double> x(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) x[k] = scale * y[k];
  const std::vector<double> zero{0.0};
  auto v = TrigInterpolant(u).on_tensor(x, ygrid.dim == 2 ? std::span<const double>(x)
                                                          : std::span<const double>(zero));
  const int p = ygrid.points;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double r2 = 0.0;
    if (ygrid.dim == 1) {
      r2 = y[i] * y[i];
    } else {
      r2 = y[i / p] * y[i / p] + y[i % p] * y[i % p];
    }
    v[i] *= std::exp(-r2 / 8.0);
  }
  return SimilarityField(ygrid, std::move(v), -std::log(-t));
}

SimilarityField to_similarity(const Field& u, double epsilon) {
  if (!(u.time() < 0.0)) throw DomainError("similarity variables need t < 0");
  if (u.time() < -epsilon * (1.0 + 1e-12)) {
    throw DomainError("field time lies before -epsilon");
  }
  return to_similarity(u, YGrid::make(u.grid().dim()));
}

SimilarityField apply_H(const SimilarityField& U) {
  const auto& g = U.grid();
  if (U.boundary_max() > 1e-12 * U.max_abs()) {
    throw ResolutionError("similarity field is not resolved at the edge of the y-box");
  }
  const int p = g.points;
  const double dy = g.step();
  const double c = 1.0 / (180.0 * dy * dy);
  const auto& v = U.values();
  const auto y = g.axis();
  auto at = [&](int k0, int k1) -> double {
    if (k0 < 0 || k0 >= p || k1 < 0 || k1 >= p) return 0.0;
    return g.dim == 1 ? v[k0] : v[std::size_t(k0) * p + k1];
  };
  auto second = [&](int k0, int k1, int ax) {
    const int d0 = ax == 0, d1 = ax == 1;
    auto pair = [&](int j) { return at(k0 - j * d0, k1 - j * d1) + at(k0 + j * d0, k1 + j * d1); };
    return c * (2.0 * pair(3) - 27.0 * pair(2) + 270.0 * pair(1) - 490.0 * at(k0, k1));
  };
  std::vector<double> out(v.size());
  const double shift = g.dim / 4.0;
  if (g.dim == 1) {
    for (int k = 0; k < p; ++k) {
      out[k] = -second(k, 0, 0) + (y[k] * y[k] / 16.0 - shift) * v[k];
    }
  } else {
    for (int k0 = 0; k0 < p; ++k0) {
      for (int k1 = 0; k1 < p; ++k1) {
        const std::size_t i = std::size_t(k0) * p + k1;
        const double r2 = y[k0] * y[k0] + y[k1] * y[k1];
        out[i] = -second(k0, k1, 0) - second(k0, k1, 1) + (r2 / 16.0 - shift) * v[i];
      }
    }
  }
  return SimilarityField(g, std::move(out), U.tau());
}

double quadratic_form(const SimilarityField& U) {
  const auto& g = U.grid();
  const int p = g.points;
  const double dy = g.step();
  const auto& v = U.values();
  const auto y = g.axis();
  auto at = [&](int k0, int k1) -> double {
    if (k0 < 0 || k0 >= p || k1 < 0 || k1 >= p) return 0.0;
    return g.dim == 1 ? v[k0] : v[std::size_t(k0) * p + k1];
  };
  // Sixth-order central first differences.
  auto first = [&](int k0, int k1, int ax) {
    const int d0 = ax == 0, d1 = ax == 1;
    auto diff = [&](int j) { return at(k0 + j * d0, k1 + j * d1) - at(k0 - j * d0, k1 - j * d1); };
    return (diff(3) - 9.0 * diff(2) + 45.0 * diff(1)) / (60.0 * dy);
  };
  double grad = 0.0, moment = 0.0, mass = 0.0;
  const int p1 = g.dim == 1 ? 1 : p;
  for (int k0 = 0; k0 < p; ++k0) {
    for (int k1 = 0; k1 < p1; ++k1) {
      const double u = at(k0, g.dim == 1 ? 0 : k1);
      double r2 = y[k0] * y[k0];
      double gsq = std::pow(first(k0, k1, 0), 2);
      if (g.dim == 2) {
        r2 += y[k1] * y[k1];
        gsq += std::pow(first(k0, k1, 1), 2);
      }
      grad += gsq;
      moment += r2 * u * u;
      mass += u * u;
    }
  }
  const double cell = std::pow(dy, g.dim);
  return cell * (grad + moment / 16.0 - g.dim / 4.0 * mass);
}

double qbar(const SimilarityField& U, double tau, const Point& drift_a) {
  const double norm2 = U.squared_norm();
  if (!(norm2 > 0.0)) throw DegenerateInputError("similarity field has zero norm");
  const double hq = apply_H(U).dot(U) / norm2;
  if (drift_a[0] == 0.0 && drift_a[1] == 0.0) return hq;
  const auto& g = U.grid();
  const int p = g.points;
  const auto y = g.axis();
  const auto& v = U.values();
  double corr = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y0 = g.dim == 1 ? y[i] : y[i / p];
    double a_dot_y = drift_a[0] * y0;
    if (g.dim == 2) a_dot_y += drift_a[1] * y[i % p];
    corr += a_dot_y * v[i] * v[i];
  }
  corr *= std::pow(g.step(), g.dim);
  return hq - std::exp(-tau / 2.0) * corr / norm2;
}

std::vector<std::size_t> FrequencyTrace::trusted_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < trusted.size(); ++i) {
    if (trusted[i]) idx.push_back(i);
  }
  return idx;
}

FrequencyTrace frequency_trace(const Trajectory& traj, const Point& drift_a, double epsilon,
                               const TraceOptions& options) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  FrequencyTrace tr;
  tr.drift_a = drift_a;
  tr.epsilon = epsilon;
  tr.tau0 = std::log(1.0 / epsilon);
  const int dim = traj.size() ? traj.grid().dim() : 1;
  const double mass_unit = kernel_mass(dim);
  const YGrid ygrid = YGrid::make(dim);

  for (const auto& u : traj.fields) {
    const double t = u.time();
    if (t < -epsilon * (1.0 + 1e-12) || !(t < 0.0)) continue;
    const GaussianMoments m = GaussianProbe(u, t).at({0.0, 0.0});
    if (!(m.mass > 0.0)) throw DegenerateInputError("Gaussian mass vanishes along the trace");
    const double abs_t = -t;
    const double Q = abs_t * m.grad / m.mass;
    const double correction = (drift_a[0] * m.first[0] + drift_a[1] * m.first[1]) / m.mass;

    tr.times.push_back(t);
    tr.taus.push_back(-std::log(abs_t));
    tr.phi_vals.push_back(m.mass);
    tr.q_vals.push_back(dirichlet_quotient_cell(u));
    tr.Q_vals.push_back(Q);
    tr.Qbar_vals.push_back(drift_a[0] == 0.0 && drift_a[1] == 0.0 ? Q : Q - correction);
    const double floor = options.trust_factor * 16.0 * kMachineEps * u.max_abs();
    tr.trusted.push_back(std::sqrt(m.mass / mass_unit) >= floor);

    double gap = std::numeric_limits<double>::quiet_NaN();
    if (options.cross_check) {
      try {
        const SimilarityField U = to_similarity(u, ygrid);
        const double n2 = U.squared_norm();
        const double hq = apply_H(U).dot(U) / n2;
        gap = std::max(std::abs(n2 - m.mass) / m.mass, std::abs(hq - Q));
      } catch (const ResolutionError&) {
      }
    }
    tr.cross_check.push_back(gap);
  }
  if (tr.size() == 0) throw DomainError("no trajectory samples in [-epsilon, 0)");
  return tr;
}

std::vector<double> qbar_derivative_diag(const FrequencyTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 3) throw DomainError("Qbar derivative needs at least three samples");
  const auto& x = trace.taus;
  const auto& q = trace.Qbar_vals;
  std::vector<double> d(n);
  d[0] = (q[1] - q[0]) / (x[1] - x[0]);
  d[n - 1] = (q[n - 1] - q[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // Three-point derivative on a nonuniform grid.
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = (-h2 / (h1 * (h1 + h2))) * q[i - 1] + ((h2 - h1) / (h1 * h2)) * q[i] +
           (h1 / (h2 * (h1 + h2))) * q[i + 1];
  }
  return d;
}

}  // namespace freqlab
