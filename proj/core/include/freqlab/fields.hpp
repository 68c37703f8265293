#pragma once

// Periodic grids, sampled fields and their spectral representation.
//
// A TorusGrid covers the cell [-L, L)^n with N points per axis, n in {1, 2}.
// Fields are stored in physical space, row-major with axis 0 outermost.
// Spectral coefficients use the convention
//
//     f(x) = sum_m c_m exp(i k_m . (x + L)),   k_m = pi m / L,
//
// so the coefficient array is exactly the normalized DFT of the samples.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace freqlab {

inline constexpr double kPi = std::numbers::pi;

// Spatial point; components past the grid dimension are ignored.
using Point = std::array<double, 2>;

// Analytic scalar descriptor f(x, t).
using ScalarFunction = std::function<double(const Point&, double)>;

class TorusGrid {
 public:
  // Throws DomainError unless dim is 1 or 2, N is a power of two >= 16 and
  // half_period > 0.
  static TorusGrid make(int dim, int points_per_axis, double half_period = kPi);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double half_period() const noexcept { return half_period_; }
  double spacing() const noexcept { return 2.0 * half_period_ / points_; }
  double cell_volume() const noexcept;
  std::size_t size() const noexcept;

  double coordinate(int k) const noexcept { return -half_period_ + k * spacing(); }
  Point point(std::size_t flat) const noexcept;

  // Wavenumber of FFT index m (0 <= m < N); the Nyquist index maps to +N/2.
  double wavenumber(int m) const noexcept;
  int signed_index(int m) const noexcept { return m <= points_ / 2 ? m : m - points_; }

  // Wraps a coordinate into [-L, L).
  double wrap(double x) const noexcept;

  bool operator==(const TorusGrid&) const = default;

 private:
  TorusGrid(int dim, int points, double half_period)
      : dim_(dim), points_(points), half_period_(half_period) {}

  int dim_ = 1;
  int points_ = 16;
  double half_period_ = kPi;
};

class Field {
 public:
  // Throws NonFiniteError when a value is not finite.
  Field(TorusGrid grid, std::vector<double> values, double time);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double time() const noexcept { return time_; }

  double max_abs() const noexcept;
  // Discrete l2 norm of the sample vector.
  double norm() const noexcept;

  Field with_time(double t) const { return Field(grid_, values_, t); }

 private:
  TorusGrid grid_;
  std::vector<double> values_;
  double time_;
};

using Complex = std::complex<double>;

class Spectrum {
 public:
  static Spectrum of(const Field& f);
  Spectrum(TorusGrid grid, std::vector<Complex> coefficients);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  std::span<Complex> coefficients() noexcept { return coefficients_; }

  Field to_field(double time) const;
  // Sum of |c_m|^2, so that integrate_cell(f^2) == cell_volume * squared_norm.
  double squared_norm() const noexcept;

  // Coefficients of the partial derivative along `axis` (Nyquist dropped).
  Spectrum derivative(int axis) const;
  Spectrum laplacian() const;
  // Coefficients of x -> f(x + offset).
  Spectrum translated(const Point& offset) const;

 private:
  TorusGrid grid_;
  std::vector<Complex> coefficients_;
};

// Evaluates the trigonometric interpolant of a field anywhere in R^n.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Field& f);
  explicit TrigInterpolant(Spectrum spectrum);

  const TorusGrid& grid() const noexcept { return spectrum_.grid(); }
  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  // Values on the tensor product of per-axis node lists (row-major, axis 0
  // outermost). `derivative` gives the derivative order (0 or 1) per axis.
  // For dim 1 the second node list is ignored.
  std::vector<double> on_tensor(std::span<const double> nodes0,
                                std::span<const double> nodes1,
                                std::array<int, 2> derivative = {0, 0}) const;

 private:
  Spectrum spectrum_;
};

TorusGrid make_grid(int dim, int points_per_axis, double half_period = kPi);

// Throws NonFiniteError naming the first offending point.
Field sample(const ScalarFunction& descriptor, const TorusGrid& grid, double t);

std::vector<Field> spectral_gradient(const Field& f);
Field spectral_laplacian(const Field& f);

// Trapezoidal cell integral; exact for band-limited integrands.
double integrate_cell(const Field& f);
double integrate_cell_product(const Field& f, const Field& g);

// x -> f(x + offset), exact for the trigonometric interpolant.
Field translate(const Field& f, const Point& offset);

// Pointwise combinations used throughout the numerics.
Field square(const Field& f);
Field gradient_energy(const Field& f);  // |grad f|^2

}  // namespace freqlab
