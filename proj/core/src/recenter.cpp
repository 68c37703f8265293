#include "freqlab/recenter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "freqlab/errors.hpp"
#include "freqlab/gaussian.hpp"
#include "quadrature.hpp"

namespace freqlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSweeps = 60;
constexpr std::size_t kStarts = 8;

using Objective = std::function<double(const Point&)>;

// Golden-section search of f along one axis inside [lo, hi]; only moves the
// point when the value strictly improves.
void golden_axis(const Objective& f, Point& x, double& fx, int axis, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  Point p = x;
  auto eval = [&](double s) {
    p[axis] = s;
    return f(p);
  };
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > 1e-10 * std::max(1.0, std::abs(x[axis]))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(d);
    }
  }
  const double s = fc < fd ? c : d;
  const double fs = std::min(fc, fd);
  if (fs < fx) {
    x[axis] = s;
    fx = fs;
  }
}

struct Search {
  Point best;
  double value;
};

void refine(const Objective& f, int dim, Search& s, double step, double tol) {
  double radius = step;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double before = s.value;
    for (int ax = 0; ax < dim; ++ax) {
      golden_axis(f, s.best, s.value, ax, s.best[ax] - radius, s.best[ax] + radius);
    }
    if (before - s.value < 1e-3 * tol) {
      if (radius < 1e-3 * step) break;
      radius *= 0.5;
    }
  }
}

// Coarse scan, then local refinement from the best few coarse local minima.
Search scan_and_refine(const Objective& f, int dim, double lo, double hi, int coarse_n,
                       double tol, bool periodic) {
  const double step = (hi - lo) / coarse_n;
  const int n1 = dim == 2 ? coarse_n : 1;
  std::vector<double> v(std::size_t(coarse_n) * n1);
  auto center = [&](int i, int j) { return Point{lo + i * step, dim == 2 ? lo + j * step : 0.0}; };
  for (int i = 0; i < coarse_n; ++i) {
    for (int j = 0; j < n1; ++j) v[std::size_t(i) * n1 + j] = f(center(i, j));
  }
  auto value = [&](int i, int j) {
    if (periodic) {
      i = (i + coarse_n) % coarse_n;
      j = (j + n1) % n1;
    } else if (i < 0 || i >= coarse_n || j < 0 || j >= n1) {
      return kInf;
    }
    return v[std::size_t(i) * n1 + j];
  };
  // Scan order is lexicographic, so a stable sort keeps the smallest center
  // first among equal values.
  std::vector<std::size_t> starts;
  for (int i = 0; i < coarse_n; ++i) {
    for (int j = 0; j < n1; ++j) {
      const double x = value(i, j);
      if (!std::isfinite(x)) continue;
      bool local = x <= value(i - 1, j) && x <= value(i + 1, j);
      if (dim == 2) local = local && x <= value(i, j - 1) && x <= value(i, j + 1);
      if (local) starts.push_back(std::size_t(i) * n1 + j);
    }
  }
  std::stable_sort(starts.begin(), starts.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  if (starts.size() > kStarts) starts.resize(kStarts);

  Search best{center(0, 0), kInf};
  for (auto k : starts) {
    Search s{center(int(k / n1), int(k % n1)), v[k]};
    refine(f, dim, s, step, tol);
    if (s.value < best.value) best = s;
  }
  return best;
}

}  // namespace

double choose_epsilon(double M0, double M1, double K0, double horizon) {
  if (!(M0 >= 1.0) || !(M1 >= 1.0)) throw DomainError("coefficient bounds must be >= 1");
  if (!(K0 > 0.0)) throw DomainError("K0 must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double eps = 1.0 / (K0 * (M1 * M1 + std::cbrt(M0 * M0)));
  return std::max(std::min(eps, 0.5 * horizon), std::numeric_limits<double>::min());
}

RecenterResult find_x_eps(const Field& u, double epsilon, int coarse_n, double tol) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (coarse_n < 2) throw DomainError("coarse scan needs at least two points per axis");
  const double q = dirichlet_quotient_cell(u);
  const GaussianProbe probe(u, -epsilon);
  const auto& g = u.grid();
  const Objective f = [&](const Point& c) {
    const auto m = probe.at(c);
    return m.mass > 0.0 ? m.grad / m.mass : kInf;
  };
  const double L = g.half_period();
  Search s = scan_and_refine(f, g.dim(), -L, L, coarse_n, tol, true);
  s.best[0] = g.wrap(s.best[0]);
  if (g.dim() == 2) s.best[1] = g.wrap(s.best[1]);
  if (!(s.value <= q + tol)) {
    std::ostringstream msg;
    msg << "optimizing point search ended at quotient " << s.value
        << " above the cell quotient " << q << " + " << tol << " (center " << s.best[0] << ", "
        << s.best[1] << ")";
    throw ResolutionError(msg.str());
  }
  return {s.best, s.value, q, epsilon, {-s.best[0] / epsilon, -s.best[1] / epsilon}};
}

double default_ball_constant(int dim) { return 8.0 * std::pow(2.0 * kPi, 0.5 * dim); }

double concentration_ratio(const Field& u) {
  const TrigInterpolant f(u);
  const auto nodes = detail::ball_nodes(u.grid().dim(), 1.0);
  const auto v = detail::values_at(f, nodes);
  double ball = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) ball += nodes[i].weight * v[i] * v[i];
  const double cell = integrate_cell(square(u));
  if (!(cell > 0.0)) throw DegenerateInputError("zero field");
  return ball > 0.0 ? cell / ball : kInf;
}

RecenterResult find_x_eps_ball(const Field& u, double epsilon, double M, double C, int coarse_n,
                               double tol) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const auto& g = u.grid();
  if (C <= 0.0) C = default_ball_constant(g.dim());
  const double measured = concentration_ratio(u);
  if (!(measured <= M)) {
    std::ostringstream msg;
    msg << "concentration ratio " << measured << " exceeds M = " << M;
    throw PreconditionError(msg.str(), measured);
  }
  const double q = dirichlet_quotient_cell(u);
  const GaussianProbe probe(u, -epsilon);
  const Objective f = [&](const Point& c) {
    if (c[0] * c[0] + c[1] * c[1] >= 4.0) return kInf;
    const auto m = probe.at(c);
    return m.mass > 0.0 ? m.grad / m.mass : kInf;
  };
  const Search s = scan_and_refine(f, g.dim(), -2.0, 2.0, coarse_n, tol, false);
  if (!(s.value <= C * M * q + tol)) {
    std::ostringstream msg;
    msg << "ball search ended at quotient " << s.value << " above C*M*q = " << C * M * q;
    throw ResolutionError(msg.str());
  }
  return {s.best, s.value, q, epsilon, {-s.best[0] / epsilon, -s.best[1] / epsilon}};
}

Trajectory galilean_recenter(const Trajectory& traj, const Point& x_eps, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (traj.size() == 0) throw DomainError("empty trajectory");
  const auto& g = traj.grid();
  Point x = x_eps;
  if (g.dim() == 1) x[1] = 0.0;
  Trajectory out{{}, traj.coefficients, traj.drift_a, traj.warnings};
  for (int j = 0; j < g.dim(); ++j) {
    const double w = g.wrap(x[j]);
    if (w != x[j]) {
      out.warnings.push_back("x_eps component " + std::to_string(j) +
                             " was outside the cell and has been wrapped");
      x[j] = w;
    }
  }
  const Point rate{x[0] / epsilon, x[1] / epsilon};
  if (rate[0] == 0.0 && rate[1] == 0.0) {
    out.fields = traj.fields;
    return out;
  }
  out.fields.reserve(traj.size());
  for (const auto& f : traj.fields) {
    const double s = std::abs(f.time());
    out.fields.push_back(translate(f, {rate[0] * s, rate[1] * s}));
  }
  out.coefficients = traj.coefficients.in_moving_frame(rate);
  out.drift_a = {traj.drift_a[0] - rate[0], traj.drift_a[1] - rate[1]};
  return out;
}

}  // namespace freqlab
