#include "freqlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {
namespace {

constexpr double kSafety = 0.5;

bool explicit_part_active(const CoefficientSet& c, const Point& a) {
  return c.has_drift() || c.has_potential() || a[0] != 0.0 || a[1] != 0.0;
}

std::vector<double> squared_wavenumbers(const TorusGrid& g) {
  const int n = g.points();
  std::vector<double> k2(g.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (g.dim() == 1) {
      k2[i] = std::pow(g.wavenumber(int(i)), 2);
    } else {
      k2[i] = std::pow(g.wavenumber(int(i / n)), 2) + std::pow(g.wavenumber(int(i % n)), 2);
    }
  }
  return k2;
}

std::vector<double> decay(const std::vector<double>& k2, double dt) {
  std::vector<double> e(k2.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-k2[i] * dt);
  return e;
}

// Spectral coefficients of (a + w(x,t)).grad u + v(x,t) u.
class ExplicitTerms {
 public:
  ExplicitTerms(const TorusGrid& grid, const CoefficientSet& coeffs, const Point& a)
      : grid_(grid), coeffs_(coeffs), a_(a) {
    points_.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) points_.push_back(grid.point(i));
  }

  Spectrum operator()(const Spectrum& u_hat, double t) const {
    const Field u = u_hat.to_field(t);
    std::vector<double> f(grid_.size(), 0.0);
    for (int j = 0; j < grid_.dim(); ++j) {
      const bool drift_j = coeffs_.has_drift() || a_[j] != 0.0;
      if (!drift_j) continue;
      const Field g = u_hat.derivative(j).to_field(t);
      for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] += (a_[j] + coeffs_.drift(j, points_[i], t)) * g[i];
      }
    }
    if (coeffs_.has_potential()) {
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += coeffs_.potential(points_[i], t) * u[i];
    }
    return Spectrum::of(Field(grid_, std::move(f), t));
  }

 private:
  TorusGrid grid_;
  const CoefficientSet& coeffs_;
  Point a_;
  std::vector<Point> points_;
};

// Heun's method on v = exp(-Lap t) u:
//   u1      = E (u + dt F(u, t))
//   u_{n+1} = E u + dt/2 (E F(u, t) + F(u1, t + dt))
void if_rk2(Spectrum& u, double t, double dt, const ExplicitTerms& terms,
            const std::vector<double>& e) {
  const Spectrum f0 = terms(u, t);
  auto uc = u.coefficients();
  const auto fc0 = f0.coefficients();
  std::vector<Complex> stage(uc.size());
  for (std::size_t i = 0; i < uc.size(); ++i) stage[i] = e[i] * (uc[i] + dt * fc0[i]);
  const Spectrum f1 = terms(Spectrum(u.grid(), std::move(stage)), t + dt);
  const auto fc1 = f1.coefficients();
  for (std::size_t i = 0; i < uc.size(); ++i) {
    uc[i] = e[i] * uc[i] + 0.5 * dt * (e[i] * fc0[i] + fc1[i]);
  }
}

bool all_finite(const Spectrum& s) {
  return std::all_of(s.coefficients().begin(), s.coefficients().end(),
                     [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

}  // namespace

SolveSchedule SolveSchedule::geometric(double t_start, double epsilon, double rho, int count,
                                       double t_end_factor, int lead_samples, double max_dt) {
  if (!(epsilon > 0.0) || !(-epsilon > t_start)) {
    throw DomainError("geometric schedule needs t_start < -epsilon < 0");
  }
  if (!(rho > 0.5 && rho < 0.95)) {
    throw DomainError("geometric ratio must lie in (0.5, 0.95)");
  }
  SolveSchedule s;
  s.t_start = t_start;
  s.t_end = -t_end_factor * epsilon;
  s.max_dt = max_dt;
  for (int k = 0; k < lead_samples; ++k) {
    s.sample_times.push_back(t_start + (-epsilon - t_start) * k / lead_samples);
  }
  for (int k = 0; k < count; ++k) {
    const double t = -epsilon * std::pow(rho, k);
    if (t > s.t_end * (1.0 + 1e-12)) break;
    s.sample_times.push_back(t);
  }
  if (s.sample_times.back() < s.t_end) s.t_end = s.sample_times.back();
  return s;
}

void SolveSchedule::validate() const {
  if (!(t_start < 0.0) || !(t_end > t_start) || !(t_end < 0.0)) {
    throw DomainError("schedule needs t_start < t_end < 0");
  }
  if (!(max_dt > 0.0)) throw DomainError("max_dt must be positive");
  if (sample_times.empty()) throw DomainError("schedule has no sample times");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!(t < 0.0)) throw DomainError("sample times must be negative");
    if (t < t_start - 1e-12 * std::abs(t_start) || t > t_end + 1e-12 * std::abs(t_end)) {
      throw DomainError("sample time outside [t_start, t_end]");
    }
    if (i > 0 && !(t > sample_times[i - 1])) {
      throw DomainError("sample times must be strictly increasing");
    }
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(fields.size());
  for (const auto& f : fields) t.push_back(f.time());
  return t;
}

double admissible_dt(const TorusGrid& grid, const CoefficientSet& coeffs, const Point& drift_a) {
  double a_inf = std::abs(drift_a[0]);
  if (grid.dim() == 2) a_inf = std::max(a_inf, std::abs(drift_a[1]));
  return kSafety * grid.spacing() / (a_inf + coeffs.bound_m1());
}

Field step(const Field& u, const CoefficientSet& coeffs, const Point& drift_a, double dt) {
  const double limit = admissible_dt(u.grid(), coeffs, drift_a);
  if (!(dt > 0.0)) throw StabilityError("time step must be positive", limit);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " violates the advective restriction; admissible dt <= "
        << limit;
    throw StabilityError(msg.str(), limit);
  }
  Spectrum s = Spectrum::of(u);
  const auto e = decay(squared_wavenumbers(u.grid()), dt);
  if (explicit_part_active(coeffs, drift_a)) {
    ExplicitTerms terms(u.grid(), coeffs, drift_a);
    if_rk2(s, u.time(), dt, terms, e);
  } else {
    auto c = s.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= e[i];
  }
  return s.to_field(u.time() + dt);
}

Trajectory solve(const Field& u0, const CoefficientSet& coeffs, const Point& drift_a,
                 const SolveSchedule& schedule) {
  schedule.validate();
  const auto& grid = u0.grid();
  if (std::abs(u0.time() - schedule.t_start) > 1e-12 * std::max(1.0, std::abs(schedule.t_start))) {
    throw DomainError("initial data must be given at t_start");
  }
  if (!(u0.norm() > 1e-30 * double(grid.size()))) {
    throw DegenerateInputError("initial data is identically zero");
  }

  Trajectory traj{{}, coeffs, drift_a, {}};
  const bool active = explicit_part_active(coeffs, drift_a);
  const double dt_cap = std::min(schedule.max_dt, admissible_dt(grid, coeffs, drift_a));
  const auto k2 = squared_wavenumbers(grid);
  ExplicitTerms terms(grid, coeffs, drift_a);

  Spectrum state = Spectrum::of(u0);
  double t = schedule.t_start;
  double last_good = t;
  double cached_dt = -1.0;
  std::vector<double> e;

  for (double target : schedule.sample_times) {
    const double span = target - t;
    if (span > 0.0) {
      if (active) {
        const auto substeps = std::size_t(std::ceil(span / dt_cap * (1.0 - 1e-12)));
        const double dt = span / double(std::max<std::size_t>(substeps, 1));
        if (dt != cached_dt) {
          e = decay(k2, dt);
          cached_dt = dt;
        }
        for (std::size_t k = 0; k < std::max<std::size_t>(substeps, 1); ++k) {
          if_rk2(state, t + k * dt, dt, terms, e);
          if (k % 64 == 63 && !all_finite(state)) {
            throw BlowUpError("solution stopped being finite", last_good);
          }
        }
      } else {
        // Diffusion alone is exact; sub-stepping would only repeat the same
        // multiplication.
        const auto ef = decay(k2, span);
        auto c = state.coefficients();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= ef[i];
      }
      t = target;
    }
    if (!all_finite(state)) throw BlowUpError("solution stopped being finite", last_good);
    try {
      traj.fields.push_back(span > 0.0 ? state.to_field(target) : u0);
    } catch (const NonFiniteError&) {
      throw BlowUpError("solution stopped being finite", last_good);
    }
    last_good = target;
  }
  return traj;
}

double residual(const Trajectory& traj, std::size_t index) {
  if (index == 0 || index + 1 >= traj.size()) {
    throw DomainError("residual needs an interior sample index");
  }
  const Field& um = traj.fields[index - 1];
  const Field& u = traj.fields[index];
  const Field& up = traj.fields[index + 1];
  const double h1 = u.time() - um.time();
  const double h2 = up.time() - u.time();
  const double cm = -h2 / (h1 * (h1 + h2));
  const double c0 = (h2 - h1) / (h1 * h2);
  const double cp = h1 / (h2 * (h1 + h2));

  const auto& grid = u.grid();
  const Spectrum s = Spectrum::of(u);
  const Field lap = s.laplacian().to_field(u.time());
  std::vector<Field> grad;
  for (int j = 0; j < grid.dim(); ++j) grad.push_back(s.derivative(j).to_field(u.time()));

  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point x = grid.point(i);
    double rhs = lap[i] + traj.coefficients.potential(x, u.time()) * u[i];
    for (int j = 0; j < grid.dim(); ++j) {
      rhs += (traj.drift_a[j] + traj.coefficients.drift(j, x, u.time())) * grad[j][i];
    }
    const double ut = cm * um[i] + c0 * u[i] + cp * up[i];
    r[i] = (ut - rhs) * (ut - rhs);
  }
  return std::sqrt(integrate_cell(Field(grid, std::move(r), u.time())));
}

}  // namespace freqlab
