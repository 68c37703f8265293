#include "freqlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "freqlab/errors.hpp"
#include "freqlab/hermite.hpp"
#include "freqlab/polynomial.hpp"
#include "freqlab/recenter.hpp"

namespace freqlab {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

// "name:arg" -> (name, arg)
std::pair<std::string, std::string> family(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer '" + s + "' in " + what);
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "' in " + what);
  }
}

// Uniform phase in [0, 2 pi) from the top 53 bits, identical on every platform.
double phase(std::mt19937_64& rng) {
  return 2.0 * kPi * double(rng() >> 11) * 0x1.0p-53;
}

ScalarFunction initial_data(const Scenario& s) {
  const auto [name, arg] = family(s.initial);
  const int dim = s.dim;
  const double L = s.half_period;
  if (name == "caloric") {
    const int d = parse_int(arg, "caloric degree");
    if (d < 0 || d > kMaxCaloricDegree) throw ConfigError("caloric degree must lie in [0, 8]");
    const CaloricPolynomial p = heat_polynomial(dim, 0, d);
    return [p, dim, L](const Point& x, double t) {
      double chi = edge_cutoff(x[0], L);
      if (dim == 2) chi *= edge_cutoff(x[1], L);
      return chi == 0.0 ? 0.0 : chi * p.evaluate(x, t);
    };
  }
  if (name == "hermite") {
    const auto parts = split(arg, ',');
    if (parts.empty() || int(parts.size()) > dim) throw ConfigError("hermite needs one index per axis");
    std::array<int, 2> k{parse_int(parts[0], "hermite index"), 0};
    k[1] = parts.size() > 1 ? parse_int(parts[1], "hermite index") : (dim == 2 ? k[0] : 0);
    if (k[0] < 0 || k[1] < 0) throw ConfigError("hermite index must be non-negative");
    return [k, dim](const Point& x, double) {
      double v = hermite_fn(k[0], x[0]);
      if (dim == 2) v *= hermite_fn(k[1], x[1]);
      return v;
    };
  }
  if (name == "mode") {
    const int k = parse_int(arg.empty() ? "1" : arg, "mode wavenumber");
    if (std::abs(k * L / kPi - std::round(k * L / kPi)) > 1e-9) {
      throw ConfigError("mode wavenumber is not periodic on the cell");
    }
    return [k, dim](const Point& x, double) {
      double v = std::cos(k * x[0]);
      if (dim == 2) v *= std::cos(k * x[1]);
      return v;
    };
  }
  if (name == "bump") {
    return [dim, L](const Point& x, double) {
      const double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
      double chi = edge_cutoff(x[0], L);
      if (dim == 2) chi *= edge_cutoff(x[1], L);
      return chi * std::exp(-0.5 * r2);
    };
  }
  throw ConfigError("unknown initial data family '" + s.initial + "'");
}

}  // namespace

double edge_cutoff(double x, double half_period) {
  const double z = (std::abs(x) - 0.55 * half_period) / (0.3 * half_period);
  if (z <= 0.0) return 1.0;
  if (z >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / z), b = std::exp(-1.0 / (1.0 - z));
  return b / (a + b);
}

double scaled_wavenumber(double kappa0, double M, double half_period) {
  const double unit = kPi / half_period;
  const double k = kappa0 * std::cbrt(M);
  return unit * std::max(1.0, std::round(k / unit));
}

Scenario Scenario::from_config(const Config& c) {
  Scenario s;
  s.dim = int(c.get_int("dim", s.dim));
  s.grid_n = int(c.get_int("grid_n", s.grid_n));
  s.half_period = c.get_double("half_period", s.half_period);
  s.initial = c.get_string("initial", s.initial);
  s.coefficients = c.get_string("coefficients", s.coefficients);
  s.M0 = c.get_double("M0", s.M0);
  s.M1 = c.get_double("M1", s.M1);
  s.K0 = c.get_double("K0", s.K0);
  s.potential_amplitude = c.get_double("potential_amplitude", s.potential_amplitude);
  s.drift_amplitude = c.get_double("drift_amplitude", s.drift_amplitude);
  s.wavenumber = c.get_double("wavenumber", s.wavenumber);
  s.parabolic_scaling = c.get_bool("parabolic_scaling", s.parabolic_scaling);
  s.t_start = c.get_double("t_start", s.t_start);
  s.rho = c.get_double("rho", s.rho);
  s.samples = int(c.get_int("samples", s.samples));
  s.t_end_factor = c.get_double("t_end_factor", s.t_end_factor);
  s.lead_samples = int(c.get_int("lead_samples", s.lead_samples));
  s.max_dt = c.get_double("max_dt", s.max_dt);
  s.recenter = c.get_string("recenter", s.recenter);
  s.coarse_n = int(c.get_int("coarse_n", s.coarse_n));
  s.search_tol = c.get_double("search_tol", s.search_tol);
  s.concentration_m = c.get_double("concentration_m", s.concentration_m);
  s.tolerance = c.get_double("tolerance", s.tolerance);
  const long long seed = c.get_int("seed", 0);
  if (seed < 0) throw ConfigError("seed must be non-negative");
  s.seed = std::uint64_t(seed);

  static const std::vector<std::string> known = {
      "dim", "grid_n", "half_period", "initial", "coefficients", "M0", "M1", "K0",
      "potential_amplitude", "drift_amplitude", "wavenumber", "parabolic_scaling", "t_start",
      "rho", "samples", "t_end_factor", "lead_samples", "max_dt", "recenter", "coarse_n",
      "search_tol", "concentration_m", "tolerance", "seed", "name"};
  for (const auto& k : c.keys()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
  s.validate();
  return s;
}

Config Scenario::to_config() const {
  Config c;
  c.set("dim", std::to_string(dim));
  c.set("grid_n", std::to_string(grid_n));
  c.set("half_period", fmt(half_period));
  c.set("initial", initial);
  c.set("coefficients", coefficients);
  c.set("M0", fmt(M0));
  c.set("M1", fmt(M1));
  c.set("K0", fmt(K0));
  c.set("potential_amplitude", fmt(potential_amplitude));
  c.set("drift_amplitude", fmt(drift_amplitude));
  c.set("wavenumber", fmt(wavenumber));
  c.set("parabolic_scaling", parabolic_scaling ? "true" : "false");
  c.set("t_start", fmt(t_start));
  c.set("rho", fmt(rho));
  c.set("samples", std::to_string(samples));
  c.set("t_end_factor", fmt(t_end_factor));
  c.set("lead_samples", std::to_string(lead_samples));
  c.set("max_dt", fmt(max_dt));
  c.set("recenter", recenter);
  c.set("coarse_n", std::to_string(coarse_n));
  c.set("search_tol", fmt(search_tol));
  c.set("concentration_m", fmt(concentration_m));
  c.set("tolerance", fmt(tolerance));
  c.set("seed", std::to_string(seed));
  return c;
}

std::string Scenario::canonical() const {
  const Config c = to_config();
  static const std::vector<std::string> strings = {"initial", "coefficients", "recenter"};
  std::string out;
  for (const auto& k : c.keys()) {
    const std::string v = c.get_string(k, "");
    const bool is_string = std::find(strings.begin(), strings.end(), k) != strings.end();
    out += k + " = " + (is_string ? quoted(v) : v) + "\n";
  }
  return out;
}

std::uint64_t Scenario::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Scenario::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void Scenario::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (dim != 1 && dim != 2) fail("dim must be 1 or 2");
  if (grid_n < 16 || (grid_n & (grid_n - 1)) != 0) fail("grid_n must be a power of two >= 16");
  if (!(half_period > 0.0)) fail("half_period must be positive");
  if (!(M0 >= 1.0) || !(M1 >= 1.0)) fail("M0 and M1 must be >= 1");
  if (!(K0 > 0.0)) fail("K0 must be positive");
  if (!(t_start < 0.0)) fail("t_start must be negative");
  if (!(rho > 0.5 && rho < 0.95)) fail("rho must lie in (0.5, 0.95)");
  if (samples < 4) fail("samples must be at least 4");
  if (!(t_end_factor > 0.0 && t_end_factor < 1.0)) fail("t_end_factor must lie in (0, 1)");
  if (lead_samples < 0) fail("lead_samples must be non-negative");
  if (!(max_dt > 0.0)) fail("max_dt must be positive");
  if (recenter != "auto" && recenter != "cell" && recenter != "ball" && recenter != "none") {
    fail("recenter must be auto, cell, ball or none");
  }
  if (coarse_n < 2) fail("coarse_n must be at least 2");
  if (!(search_tol > 0.0)) fail("search_tol must be positive");
  if (!(concentration_m >= 1.0)) fail("concentration_m must be >= 1");
  if (!(tolerance > 0.0)) fail("tolerance must be positive");
}

ScenarioSetup build_setup(const Scenario& s) {
  s.validate();
  const TorusGrid grid = TorusGrid::make(s.dim, s.grid_n, s.half_period);
  const double eps = choose_epsilon(s.M0, s.M1, s.K0, std::abs(s.t_start));
  const SolveSchedule schedule = SolveSchedule::geometric(
      s.t_start, eps, s.rho, s.samples, s.t_end_factor, s.lead_samples, s.max_dt);

  std::mt19937_64 rng(s.seed);
  std::vector<ScalarFunction> drift;
  ScalarFunction potential;
  const double t0 = s.t_start;
  const int dim = s.dim;
  for (const auto& item : split(s.coefficients, ',')) {
    const auto [name, arg] = family(item);
    if (name == "none") continue;
    if (potential && (name == "constant" || name == "oscillatory")) {
      throw ConfigError("more than one potential family");
    }
    if (name == "constant") {
      const double c = parse_double(arg, "constant potential");
      potential = [c](const Point&, double) { return c; };
    } else if (name == "oscillatory") {
      const double amp = s.potential_amplitude > 0.0 ? s.potential_amplitude : s.M0;
      const double k = scaled_wavenumber(s.wavenumber, s.M0, s.half_period);
      const double th1 = s.seed ? phase(rng) : 0.0;
      const double th2 = s.seed ? phase(rng) : 0.0;
      const double th3 = s.seed ? phase(rng) : 0.0;
      const bool scaled = s.parabolic_scaling;
      potential = [=](const Point& x, double t) {
        double v = amp * std::cos(k * x[0] + th1);
        if (dim == 2) v *= std::cos(k * x[1] + th3);
        return scaled ? v * std::cos(k * k * (t - t0) + th2) : v;
      };
    } else if (name == "drift_oscillatory") {
      if (!drift.empty()) throw ConfigError("more than one drift family");
      const double amp = s.drift_amplitude > 0.0 ? s.drift_amplitude : s.M1;
      const double k = scaled_wavenumber(s.wavenumber, s.M1, s.half_period);
      for (int j = 0; j < dim; ++j) {
        const double th = s.seed ? phase(rng) : 0.0;
        drift.push_back([=](const Point& x, double) { return amp * std::sin(k * x[j] + th); });
      }
    } else {
      throw ConfigError("unknown coefficient family '" + item + "'");
    }
  }
  CoefficientSet coeffs =
      CoefficientSet::create(dim, drift, potential, s.M1, s.M0, grid, s.t_start, schedule.t_end);
  Field u0 = sample(initial_data(s), grid, s.t_start);
  return {grid, std::move(u0), std::move(coeffs), eps, schedule};
}

}  // namespace freqlab
