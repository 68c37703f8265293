#pragma once

#include <cstdint>
#include <string>

#include "freqlab/coefficients.hpp"
#include "freqlab/config.hpp"
#include "freqlab/fields.hpp"
#include "freqlab/solver.hpp"

namespace freqlab {

// One experiment. Initial data families:
//   caloric:d   heat polynomial of degree d, smoothly cut off near the cell edge
//   hermite:k   Hermite function h~_k in each coordinate
//   mode:k      cos(k x) in each coordinate
//   bump        exp(-|x|^2 / 2)
// Coefficient families (comma separated):
//   none, constant:c, oscillatory, drift_oscillatory
struct Scenario {
  int dim = 1;
  int grid_n = 512;
  double half_period = 8.0 * kPi;

  std::string initial = "caloric:2";
  std::string coefficients = "none";
  double M0 = 1.0;
  double M1 = 1.0;
  double K0 = 1.0;
  // Non-positive amplitude means "use the declared bound".
  double potential_amplitude = 0.0;
  double drift_amplitude = 0.0;
  double wavenumber = 1.0;  // kappa0; kappa = kappa0 * M^{1/3}
  bool parabolic_scaling = true;

  double t_start = -1.0;
  double rho = 0.8;
  int samples = 80;
  double t_end_factor = 2e-6;
  int lead_samples = 8;
  double max_dt = 1e-4;

  std::string recenter = "auto";  // auto | cell | ball | none
  int coarse_n = 32;
  double search_tol = 1e-6;
  double concentration_m = 8.0;
  double tolerance = 0.15;
  std::uint64_t seed = 0;

  static Scenario from_config(const Config& config);
  Config to_config() const;

  // Sorted key = value lines with round-trip precision.
  std::string canonical() const;
  // FNV-1a of the canonical form.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  // Throws ConfigError.
  void validate() const;
};

struct ScenarioSetup {
  TorusGrid grid;
  Field u0;
  CoefficientSet coefficients;
  double epsilon;
  SolveSchedule schedule;
};

// Throws ConfigError when a family is unknown or the declared bounds do not
// dominate the sampled coefficients.
ScenarioSetup build_setup(const Scenario& s);

// Oscillation wavenumber kappa0 * M^{1/3}, rounded to a positive multiple of
// pi / L so the coefficient is periodic.
double scaled_wavenumber(double kappa0, double M, double half_period);

// Smooth cutoff: 1 for |x| <= 0.55 L, 0 for |x| >= 0.85 L.
double edge_cutoff(double x, double half_period);

}  // namespace freqlab
