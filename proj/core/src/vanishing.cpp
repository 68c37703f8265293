#include "freqlab/vanishing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "freqlab/errors.hpp"
#include "freqlab/hermite.hpp"
#include "quadrature.hpp"

namespace freqlab {
namespace {

constexpr double kPlateauSpread = 0.1;
constexpr double kTailFraction = 0.25;
constexpr int kMinPhiSamples = 6;
constexpr int kMinRadii = 4;

struct Line {
  double slope, intercept, rms;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = 1.0;
    b(i) = y[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  return {c(0), c(1), std::sqrt((A * c - b).squaredNorm() / n)};
}

double quadratic_rms(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = x[i] * x[i];
    A(i, 1) = x[i];
    A(i, 2) = 1.0;
    b(i) = y[i];
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
  return std::sqrt((A * c - b).squaredNorm() / n);
}

// Log-log fit; `outer_first` says whether index 0 holds the outermost point.
// When the line misses visible curvature and enough points remain, the two
// outermost points are dropped once.
SlopeFit log_log_fit(std::vector<double> x, std::vector<double> y, bool outer_first) {
  SlopeFit fit;
  Line line = fit_line(x, y);
  if (x.size() >= 6 && line.rms > 5e-3 && quadratic_rms(x, y) < 0.5 * line.rms) {
    if (outer_first) {
      x.erase(x.begin(), x.begin() + 2);
      y.erase(y.begin(), y.begin() + 2);
    } else {
      x.resize(x.size() - 2);
      y.resize(y.size() - 2);
    }
    line = fit_line(x, y);
    fit.trimmed = true;
  }
  fit.order = line.slope;
  fit.residual = line.rms;
  fit.log_x = std::move(x);
  fit.log_y = std::move(y);
  return fit;
}

double ball_mass(const Field& u, double r) {
  const TrigInterpolant f(u);
  const auto nodes = detail::ball_nodes(u.grid().dim(), r);
  const auto v = detail::values_at(f, nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += nodes[i].weight * v[i] * v[i];
  return s;
}

// int g ds over one segment, exact when g is exponential in s.
double segment(double s0, double g0, double s1, double g1) {
  const double h = s1 - s0;
  if (g0 > 0.0 && g1 > 0.0) {
    const double lr = std::log(g1 / g0);
    if (std::abs(lr) > 1e-8) return h * (g1 - g0) / lr;
  }
  return 0.5 * h * (g0 + g1);
}

}  // namespace

double cylinder_norm(const Trajectory& traj, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("cylinder radius must lie in (0, 1]");
  if (traj.size() < 2) throw DomainError("cylinder needs at least two samples");
  const double top = -r * r;
  const auto& f = traj.fields;
  if (f.front().time() > top * (1.0 - 1e-9)) {
    throw DomainError("cylinder of radius " + std::to_string(r) + " starts before the trajectory");
  }
  // First sample at or after the bottom of the cylinder.
  std::size_t first = 0;
  while (first < f.size() && f[first].time() < top * (1.0 - 1e-9)) ++first;
  if (first == f.size()) throw DomainError("no samples inside the cylinder");

  // Integrate g(s) = |t| I(t) in s = log|t|, from s = log r^2 downward.
  std::vector<double> s, g;
  const bool on_top = std::abs(f[first].time() - top) <= 1e-9 * r * r;
  if (!on_top) {
    const auto& a = f[first - 1];
    const auto& b = f[first];
    const double sa = std::log(-a.time()), sb = std::log(-b.time());
    const double ga = -a.time() * ball_mass(a, r), gb = -b.time() * ball_mass(b, r);
    const double st = std::log(r * r);
    const double w = (st - sa) / (sb - sa);
    s.push_back(st);
    g.push_back(ga > 0.0 && gb > 0.0 ? std::exp((1 - w) * std::log(ga) + w * std::log(gb))
                                     : (1 - w) * ga + w * gb);
  }
  for (std::size_t i = first; i < f.size(); ++i) {
    s.push_back(std::log(-f[i].time()));
    g.push_back(-f[i].time() * ball_mass(f[i], r));
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) total += segment(s[i + 1], g[i + 1], s[i], g[i]);

  // Remaining piece (t_last, 0) with a power law fitted to the last two samples.
  const std::size_t n = g.size();
  if (n >= 2 && g[n - 1] > 0.0 && g[n - 2] > 0.0) {
    const double p = std::max(std::log(g[n - 2] / g[n - 1]) / (s[n - 2] - s[n - 1]), 1e-3);
    total += g[n - 1] / p;
  }
  return std::sqrt(total);
}

std::vector<double> default_radii(const Trajectory& traj) {
  if (traj.size() < 2) throw DomainError("trajectory too short for cylinders");
  const double t_last = -traj.fields.back().time();
  std::vector<double> cand;
  for (const auto& f : traj.fields) {
    const double a = -f.time();
    if (a <= 1.0 && a >= 100.0 * t_last) cand.push_back(std::sqrt(a));
  }
  if (cand.empty()) throw DomainError("no admissible cylinder radii");
  std::sort(cand.begin(), cand.end());
  const double r_min = cand.front();
  std::vector<double> radii;
  for (double r : cand) {
    if (r <= 10.0 * r_min * (1.0 + 1e-9) || int(radii.size()) < kMinRadii) radii.push_back(r);
  }
  std::reverse(radii.begin(), radii.end());
  return radii;
}

SlopeFit order_from_cylinders(const Trajectory& traj, const std::vector<double>& radii) {
  if (int(radii.size()) < kMinRadii) throw DomainError("need at least four cylinder radii");
  std::vector<double> r = radii;
  std::sort(r.begin(), r.end(), std::greater<>());
  std::vector<double> x, y;
  for (double ri : r) {
    const double nrm = cylinder_norm(traj, ri);
    if (!(nrm > 0.0)) throw DegenerateInputError("solution vanishes on a cylinder");
    x.push_back(std::log(ri));
    y.push_back(std::log(nrm));
  }
  SlopeFit fit = log_log_fit(std::move(x), std::move(y), true);
  fit.order -= 0.5 * (traj.grid().dim() + 2);
  return fit;
}

TauWindow default_phi_window(const FrequencyTrace& trace) {
  const auto idx = trace.trusted_indices();
  if (idx.empty()) throw DomainError("trace has no trusted samples");
  double a_min = 1e300;
  for (auto i : idx) a_min = std::min(a_min, -trace.times[i]);
  return {-std::log(10.0 * a_min), -std::log(a_min)};
}

SlopeFit order_from_phi(const FrequencyTrace& trace, std::optional<TauWindow> window) {
  const bool defaulted = !window;
  const TauWindow w = window ? *window : default_phi_window(trace);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (defaulted && !trace.trusted[i]) continue;
    const double tau = trace.taus[i];
    if (tau < w.lo - 1e-9 || tau > w.hi + 1e-9) continue;
    x.push_back(std::log(-trace.times[i]));
    y.push_back(std::log(trace.phi_vals[i]));
  }
  if (int(x.size()) < kMinPhiSamples) {
    throw DomainError("phi window holds " + std::to_string(x.size()) +
                      " samples; at least six are needed");
  }
  // Samples run toward t = 0, so index 0 is the outermost |t|.
  return log_log_fit(std::move(x), std::move(y), true);
}

QbarOrder order_from_qbar(const FrequencyTrace& trace) {
  const auto idx = trace.trusted_indices();
  if (idx.size() < 3) throw DomainError("trace has fewer than three trusted samples");
  const std::size_t tail =
      std::max<std::size_t>(3, std::size_t(std::ceil(kTailFraction * idx.size())));
  std::vector<double> v;
  for (std::size_t k = idx.size() - std::min(tail, idx.size()); k < idx.size(); ++k) {
    v.push_back(trace.Qbar_vals[idx[k]]);
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double spread = *hi - *lo;
  if (!(spread < kPlateauSpread)) {
    throw NotConvergedError("Qbar has no terminal plateau (spread " + std::to_string(spread) + ")",
                            spread);
  }
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return {nearest_spectrum_index(median), spectrum_dist(median), median, spread};
}

VanishingEstimate consistency_report(const Trajectory& traj, const FrequencyTrace& trace,
                                     const std::vector<double>& radii, double tolerance) {
  VanishingEstimate e;
  e.tolerance = tolerance;
  try {
    const auto fit = order_from_cylinders(traj, radii);
    e.d_cylinder = fit.order;
    e.d_residual = fit.residual;
    e.radius_max = *std::max_element(radii.begin(), radii.end());
    e.radius_min = *std::min_element(radii.begin(), radii.end());
  } catch (const Error& err) {
    e.partial = true;
    e.failures.push_back(std::string("cylinders: ") + err.what());
  }
  try {
    e.phi_window = default_phi_window(trace);
    const auto fit = order_from_phi(trace);
    e.m_gaussian = fit.order;
    e.m_residual = fit.residual;
  } catch (const Error& err) {
    e.partial = true;
    e.failures.push_back(std::string("phi: ") + err.what());
  }
  try {
    const auto q = order_from_qbar(trace);
    e.m_qbar = q.m;
    e.qbar_terminal = q.median;
    e.dist_sp = q.dist;
  } catch (const Error& err) {
    e.partial = true;
    e.failures.push_back(std::string("qbar: ") + err.what());
  }
  if (e.m_qbar >= 0 && e.m_qbar <= kMaxCaloricDegree) {
    try {
      const auto fit = fit_caloric(traj, e.m_qbar);
      e.caloric_checked = true;
      e.caloric_nondegenerate = !fit.degenerate;
      e.caloric_residual = fit.residual;
    } catch (const Error& err) {
      e.failures.push_back(std::string("caloric fit: ") + err.what());
    }
  }
  if (!e.partial) {
    const double m = e.m_qbar;
    e.consistent = std::abs(e.d_cylinder - e.m_gaussian) <= tolerance &&
                   std::abs(e.d_cylinder - m) <= tolerance &&
                   std::abs(e.m_gaussian - m) <= tolerance && e.dist_sp <= tolerance;
  }
  return e;
}

}  // namespace freqlab
