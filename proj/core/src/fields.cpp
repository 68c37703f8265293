#include "freqlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Per-axis interpolation basis: row j holds B_m(x_j) for m = 0..N-1, where
// B_m = exp(i k_m (x + L)) and the Nyquist column is the real cosine, so the
// interpolant of real data is real everywhere.
std::vector<Complex> axis_basis(const TorusGrid& grid, std::span<const double> nodes,
                                int derivative) {
  const int n = grid.points();
  const double unit = kPi / grid.half_period();
  std::vector<Complex> basis(nodes.size() * n);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double phase = unit * (nodes[j] + grid.half_period());
    Complex* row = basis.data() + j * n;
    const Complex step = std::polar(1.0, phase);
    Complex w(1.0, 0.0);
    for (int s = 0; s < n / 2; ++s) {
      // Resynchronize the running power now and then to bound drift.
      if (s % 32 == 0) w = std::polar(1.0, phase * s);
      const double k = unit * s;
      row[s] = derivative == 0 ? w : Complex(0.0, k) * w;
      if (s > 0) {
        const Complex wc = std::conj(w);
        row[n - s] = derivative == 0 ? wc : Complex(0.0, -k) * wc;
      }
      w *= step;
    }
    const double kn = unit * (n / 2);
    row[n / 2] = derivative == 0 ? Complex(std::cos(kn * (nodes[j] + grid.half_period())), 0.0)
                                 : Complex(-kn * std::sin(kn * (nodes[j] + grid.half_period())), 0.0);
  }
  return basis;
}

}  // namespace

TorusGrid TorusGrid::make(int dim, int points_per_axis, double half_period) {
  if (dim != 1 && dim != 2) {
    throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (!is_power_of_two(points_per_axis) || points_per_axis < 16) {
    throw DomainError("points per axis must be a power of two >= 16, got " +
                      std::to_string(points_per_axis));
  }
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw DomainError("half period must be positive and finite");
  }
  return TorusGrid(dim, points_per_axis, half_period);
}

double TorusGrid::cell_volume() const noexcept {
  return std::pow(2.0 * half_period_, dim_);
}

std::size_t TorusGrid::size() const noexcept {
  return dim_ == 1 ? std::size_t(points_) : std::size_t(points_) * points_;
}

Point TorusGrid::point(std::size_t flat) const noexcept {
  if (dim_ == 1) return {coordinate(int(flat)), 0.0};
  return {coordinate(int(flat / points_)), coordinate(int(flat % points_))};
}

double TorusGrid::wavenumber(int m) const noexcept {
  return kPi * signed_index(m) / half_period_;
}

double TorusGrid::wrap(double x) const noexcept {
  const double period = 2.0 * half_period_;
  double y = std::fmod(x + half_period_, period);
  if (y < 0) y += period;
  if (y >= period) y -= period;
  return y - half_period_;
}

TorusGrid make_grid(int dim, int points_per_axis, double half_period) {
  return TorusGrid::make(dim, points_per_axis, half_period);
}

Field::Field(TorusGrid grid, std::vector<double> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size()) {
    throw DomainError("field size does not match grid");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      const Point p = grid_.point(i);
      std::ostringstream msg;
      msg << "non-finite field value at x=(" << p[0];
      if (grid_.dim() == 2) msg << ", " << p[1];
      msg << "), t=" << time;
      throw NonFiniteError(msg.str());
    }
  }
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

Spectrum::Spectrum(TorusGrid grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size()) {
    throw DomainError("spectrum size does not match grid");
  }
}

Spectrum Spectrum::of(const Field& f) {
  const auto& g = f.grid();
  std::vector<Complex> in(f.values().begin(), f.values().end());
  std::vector<Complex> out(in.size());
  detail::fft_forward(g.dim(), g.points(), in, out);
  const double scale = 1.0 / double(g.size());
  for (auto& c : out) c *= scale;
  return Spectrum(g, std::move(out));
}

Field Spectrum::to_field(double time) const {
  std::vector<Complex> out(coefficients_.size());
  detail::fft_inverse(grid_.dim(), grid_.points(), coefficients_, out);
  std::vector<double> values(out.size());
  std::transform(out.begin(), out.end(), values.begin(), [](Complex c) { return c.real(); });
  return Field(grid_, std::move(values), time);
}

double Spectrum::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& c : coefficients_) s += std::norm(c);
  return s;
}

Spectrum Spectrum::derivative(int axis) const {
  const int n = grid_.points();
  std::vector<Complex> out(coefficients_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int m = grid_.dim() == 1 ? int(i) : (axis == 0 ? int(i / n) : int(i % n));
    if (m == n / 2) continue;
    out[i] = Complex(0.0, grid_.wavenumber(m)) * coefficients_[i];
  }
  return Spectrum(grid_, std::move(out));
}

Spectrum Spectrum::laplacian() const {
  const int n = grid_.points();
  std::vector<Complex> out(coefficients_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double k2 = 0.0;
    if (grid_.dim() == 1) {
      k2 = std::pow(grid_.wavenumber(int(i)), 2);
    } else {
      k2 = std::pow(grid_.wavenumber(int(i / n)), 2) + std::pow(grid_.wavenumber(int(i % n)), 2);
    }
    out[i] = -k2 * coefficients_[i];
  }
  return Spectrum(grid_, std::move(out));
}

Spectrum Spectrum::translated(const Point& offset) const {
  const int n = grid_.points();
  auto factor = [&](int m, double s) -> Complex {
    const double k = grid_.wavenumber(m);
    // The Nyquist cosine keeps only the part visible on the grid.
    if (m == n / 2) return Complex(std::cos(k * s), 0.0);
    return std::polar(1.0, k * s);
  };
  std::vector<Complex> out(coefficients_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (grid_.dim() == 1) {
      out[i] = coefficients_[i] * factor(int(i), offset[0]);
    } else {
      out[i] = coefficients_[i] * factor(int(i / n), offset[0]) * factor(int(i % n), offset[1]);
    }
  }
  return Spectrum(grid_, std::move(out));
}

TrigInterpolant::TrigInterpolant(const Field& f) : spectrum_(Spectrum::of(f)) {}

TrigInterpolant::TrigInterpolant(Spectrum spectrum) : spectrum_(std::move(spectrum)) {}

double TrigInterpolant::value(const Point& x) const {
  const std::array<double, 1> a{x[0]}, b{x[1]};
  return on_tensor(a, b)[0];
}

Point TrigInterpolant::gradient(const Point& x) const {
  const std::array<double, 1> a{x[0]}, b{x[1]};
  Point g{on_tensor(a, b, {1, 0})[0], 0.0};
  if (grid().dim() == 2) g[1] = on_tensor(a, b, {0, 1})[0];
  return g;
}

std::vector<double> TrigInterpolant::on_tensor(std::span<const double> nodes0,
                                               std::span<const double> nodes1,
                                               std::array<int, 2> derivative) const {
  const auto& g = grid();
  const int n = g.points();
  const auto c = spectrum_.coefficients();
  const auto e0 = axis_basis(g, nodes0, derivative[0]);
  if (g.dim() == 1) {
    std::vector<double> out(nodes0.size());
    for (std::size_t j = 0; j < nodes0.size(); ++j) {
      const Complex* row = e0.data() + j * n;
      double acc = 0.0;
      for (int m = 0; m < n; ++m) {
        acc += row[m].real() * c[m].real() - row[m].imag() * c[m].imag();
      }
      out[j] = acc;
    }
    return out;
  }
  const auto e1 = axis_basis(g, nodes1, derivative[1]);
  const std::size_t n0 = nodes0.size();
  const std::size_t n1 = nodes1.size();
  std::vector<double> out(n0 * n1);
  if (n0 <= n1) {
    // tmp[j0][m1] = sum_m0 B_m0(nodes0[j0]) c[m0, m1]
    std::vector<Complex> tmp(n0 * std::size_t(n), Complex(0.0, 0.0));
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
      const Complex* brow = e0.data() + j0 * n;
      Complex* trow = tmp.data() + j0 * n;
      for (int m0 = 0; m0 < n; ++m0) {
        const Complex b = brow[m0];
        const Complex* crow = c.data() + std::size_t(m0) * n;
        for (int m1 = 0; m1 < n; ++m1) trow[m1] += b * crow[m1];
      }
    }
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
      const Complex* trow = tmp.data() + j0 * n;
      for (std::size_t j1 = 0; j1 < n1; ++j1) {
        const Complex* brow = e1.data() + j1 * n;
        double acc = 0.0;
        for (int m1 = 0; m1 < n; ++m1) {
          acc += trow[m1].real() * brow[m1].real() - trow[m1].imag() * brow[m1].imag();
        }
        out[j0 * n1 + j1] = acc;
      }
    }
    return out;
  }
  // tmp[m0][j1] = sum_m1 c[m0, m1] B_m1(nodes1[j1])
  std::vector<Complex> tmp(std::size_t(n) * n1);
  for (int m0 = 0; m0 < n; ++m0) {
    const Complex* crow = c.data() + std::size_t(m0) * n;
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      const Complex* brow = e1.data() + j1 * n;
      Complex acc(0.0, 0.0);
      for (int m1 = 0; m1 < n; ++m1) acc += crow[m1] * brow[m1];
      tmp[std::size_t(m0) * n1 + j1] = acc;
    }
  }
  for (std::size_t j0 = 0; j0 < n0; ++j0) {
    const Complex* brow = e0.data() + j0 * n;
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      double acc = 0.0;
      for (int m0 = 0; m0 < n; ++m0) {
        const Complex a = brow[m0];
        const Complex b = tmp[std::size_t(m0) * n1 + j1];
        acc += a.real() * b.real() - a.imag() * b.imag();
      }
      out[j0 * n1 + j1] = acc;
    }
  }
  return out;
}

Field sample(const ScalarFunction& descriptor, const TorusGrid& grid, double t) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Point p = grid.point(i);
    values[i] = descriptor(p, t);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "descriptor is not finite at x=(" << p[0];
      if (grid.dim() == 2) msg << ", " << p[1];
      msg << "), t=" << t;
      throw NonFiniteError(msg.str());
    }
  }
  return Field(grid, std::move(values), t);
}

std::vector<Field> spectral_gradient(const Field& f) {
  const Spectrum s = Spectrum::of(f);
  std::vector<Field> out;
  for (int axis = 0; axis < f.grid().dim(); ++axis) {
    out.push_back(s.derivative(axis).to_field(f.time()));
  }
  return out;
}

Field spectral_laplacian(const Field& f) {
  return Spectrum::of(f).laplacian().to_field(f.time());
}

double integrate_cell(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * std::pow(f.grid().spacing(), f.grid().dim());
}

double integrate_cell_product(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw DomainError("fields live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) s += f[i] * g[i];
  return s * std::pow(f.grid().spacing(), f.grid().dim());
}

Field translate(const Field& f, const Point& offset) {
  return Spectrum::of(f).translated(offset).to_field(f.time());
}

Field square(const Field& f) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (auto& x : v) x *= x;
  return Field(f.grid(), std::move(v), f.time());
}

Field gradient_energy(const Field& f) {
  const auto grad = spectral_gradient(f);
  std::vector<double> v(f.grid().size(), 0.0);
  for (const auto& g : grad) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += g[i] * g[i];
  }
  return Field(f.grid(), std::move(v), f.time());
}

}  // namespace freqlab
