#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "freqlab/similarity.hpp"
#include "freqlab/solver.hpp"

namespace freqlab {

struct SlopeFit {
  double order = 0.0;
  double residual = 0.0;  // RMS misfit of the log-log line
  std::vector<double> log_x;
  std::vector<double> log_y;
  bool trimmed = false;   // outermost points rejected for curvature
};

// ||u||_{L^2(Q_r)} for the parabolic cylinder |x| < r, -r^2 < t < 0.
double cylinder_norm(const Trajectory& traj, double r);

// sqrt(|t_k|) for the samples inside the innermost decade that keeps the
// unresolved piece (-t_last, 0) small against every cylinder.
std::vector<double> default_radii(const Trajectory& traj);

// Slope of log ||u||_{L^2(Q_r)} against log r, minus (n+2)/2.
SlopeFit order_from_cylinders(const Trajectory& traj, const std::vector<double>& radii);

struct TauWindow {
  double lo;
  double hi;
};

// Innermost decade of |t| among trusted samples.
TauWindow default_phi_window(const FrequencyTrace& trace);

// Slope of log phi against log |t| over the window.
SlopeFit order_from_phi(const FrequencyTrace& trace, std::optional<TauWindow> window = {});

struct QbarOrder {
  int m = 0;
  double dist = 0.0;
  double median = 0.0;
  double spread = 0.0;
};

// Terminal plateau (last quarter of trusted samples, spread < 0.1).
QbarOrder order_from_qbar(const FrequencyTrace& trace);

struct VanishingEstimate {
  double d_cylinder = std::numeric_limits<double>::quiet_NaN();
  double d_residual = std::numeric_limits<double>::quiet_NaN();
  double m_gaussian = std::numeric_limits<double>::quiet_NaN();
  double m_residual = std::numeric_limits<double>::quiet_NaN();
  int m_qbar = -1;
  double qbar_terminal = std::numeric_limits<double>::quiet_NaN();
  double dist_sp = std::numeric_limits<double>::quiet_NaN();
  bool consistent = false;
  bool partial = false;
  double tolerance = 0.15;
  std::vector<std::string> failures;

  bool caloric_checked = false;
  bool caloric_nondegenerate = false;
  double caloric_residual = std::numeric_limits<double>::quiet_NaN();

  TauWindow phi_window{0.0, 0.0};
  double radius_min = 0.0, radius_max = 0.0;
};

VanishingEstimate consistency_report(const Trajectory& traj, const FrequencyTrace& trace,
                                     const std::vector<double>& radii, double tolerance = 0.15);

}  // namespace freqlab
