#include <doctest.h>

#include <cmath>
#include <random>

#include "freqlab/errors.hpp"
#include "freqlab/gaussian.hpp"
#include "freqlab/polynomial.hpp"
#include "freqlab/scenario.hpp"
#include "generators.hpp"

using namespace freqlab;

namespace {

const double kSqrtPi = std::sqrt(kPi);

// Whole-space integral of x^mu t^l G0 by Simpson on a box of 40 kernel widths.
double moment_oracle(int dim, std::array<int, 2> mu, int l, double t) {
  const double R = 40.0 * std::sqrt(std::abs(t));
  const double tl = std::pow(t, l);
  if (dim == 1) {
    return tl * gen::simpson([&](double x) { return std::pow(x, mu[0]) * kernel({x, 0}, t, 1); },
                             -R, R, 4000);
  }
  // Separable: G0 in 2D is the product of 1D kernels.
  auto one = [&](int m) {
    return gen::simpson([&](double x) { return std::pow(x, m) * kernel({x, 0}, t, 1); }, -R, R, 4000);
  };
  return tl * one(mu[0]) * one(mu[1]);
}

double ball_oracle(const MomentSpec& s, double t) {
  const double r = *s.radius, tl = std::pow(t, s.l);
  if (s.dim == 1) {
    return tl * gen::simpson([&](double x) { return std::pow(x, s.mu[0]) * kernel({x, 0}, t, 1); },
                             -r, r, 20000);
  }
  return tl * gen::simpson(
                  [&](double rho) {
                    return rho * gen::simpson(
                                     [&](double th) {
                                       const double x = rho * std::cos(th), y = rho * std::sin(th);
                                       return std::pow(x, s.mu[0]) * std::pow(y, s.mu[1]) *
                                              kernel({x, y}, t, 2);
                                     },
                                     0.0, 2 * kPi, 400);
                  },
                  0.0, r, 2000);
}

Field caloric_field(int d, double t) {
  const auto g = make_grid(1, 512, 8 * kPi);
  const auto P = heat_polynomial(1, 0, d);
  return sample([&](const Point& x, double s) { return edge_cutoff(x[0], 8 * kPi) * P.evaluate(x, s); },
                g, t);
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(kernel({0, 0}, -1.0, 1) == doctest::Approx(1.0));
  CHECK(kernel({2, 0}, -1.0, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(kernel({0, 0}, 0.0, 1), DomainError);
  CHECK_THROWS_AS(kernel({0, 0}, 0.5, 2), DomainError);
}

TEST_CASE("kernel mass by quadrature") {
  for (double t : {-1.0, -0.1, -0.01}) {
    const double R = 40 * std::sqrt(-t);
    const double m1 = gen::simpson([&](double x) { return kernel({x, 0}, t, 1); }, -R, R, 4000);
    CHECK(std::abs(m1 - std::sqrt(4 * kPi)) < 1e-10);
    CHECK(kernel_mass(1) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-15));
    CHECK(kernel_mass(2) == doctest::Approx(4 * kPi).epsilon(1e-15));
  }
  CHECK(std::abs(gen::simpson([](double x) { return kernel({x, 0}, -1.0, 1); }, -40, 40) -
                 3.5449077018110318) < 1e-10);
}

TEST_CASE("phi of constants and the caloric oracle") {
  for (int dim : {1, 2}) {
    const auto g = make_grid(dim, dim == 1 ? 64 : 32);
    const auto one = sample([](const Point&, double) { return 1.0; }, g, -0.3);
    for (double t : {-1.0, -0.1, -0.01}) {
      CHECK(phi(one.with_time(t), t, {0.4, -0.2}) ==
            doctest::Approx(kernel_mass(dim)).epsilon(1e-8));
    }
  }
  const double t = -0.1;
  CHECK(phi(caloric_field(2, t), t) == doctest::Approx(16 * kSqrtPi * t * t).epsilon(1e-4));
  CHECK_THROWS_AS(phi(caloric_field(2, t), 0.0), DomainError);
}

TEST_CASE("phi and the Gaussian Rayleigh quotient of cos x against dense quadrature") {
  const auto g = make_grid(1, 64);
  const double t = -0.25;
  const auto u = sample([](const Point& x, double) { return std::cos(x[0]); }, g, t);
  for (double c : {0.0, 0.7, -2.1}) {
    const double num = gen::simpson(
        [&](double x) { return std::pow(std::cos(x), 2) * kernel({x - c, 0}, t, 1); }, -20, 20, 40000);
    const double grad = gen::simpson(
        [&](double x) { return std::pow(std::sin(x), 2) * kernel({x - c, 0}, t, 1); }, -20, 20, 40000);
    CHECK(std::abs(phi(u, t, {c, 0}) - num) < 1e-8);
    CHECK(std::abs(gaussian_rayleigh(u, t, {c, 0}) - grad / num) < 1e-8);
  }
  const auto k = sample([](const Point&, double) { return 3.0; }, g, t);
  CHECK(gaussian_rayleigh(k, t) == doctest::Approx(0.0));
}

TEST_CASE("narrow kernels use the window path and agree with quadrature") {
  const auto g = make_grid(1, 64);
  const double t = -1e-3;
  const auto u = sample([](const Point& x, double) { return 1.0 + std::sin(x[0]); }, g, t);
  CHECK_FALSE(GaussianProbe(u, t).periodized());
  const double c = 0.3;
  const double num = gen::simpson(
      [&](double x) { return std::pow(1 + std::sin(x), 2) * kernel({x - c, 0}, t, 1); }, c - 1, c + 1,
      40000);
  CHECK(phi(u, t, {c, 0}) == doctest::Approx(num).epsilon(1e-9));
}

TEST_CASE("Dirichlet quotient on the cell") {
  const auto g = make_grid(1, 64);
  CHECK(dirichlet_quotient_cell(sample([](const Point& x, double) { return std::cos(x[0]); }, g, 0)) ==
        doctest::Approx(1.0));
  CHECK(dirichlet_quotient_cell(sample([](const Point& x, double) { return std::cos(3 * x[0]); }, g,
                                       0)) == doctest::Approx(9.0));
  CHECK(dirichlet_quotient_cell(sample([](const Point&, double) { return 1.0; }, g, 0)) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(dirichlet_quotient_cell(sample([](const Point&, double) { return 0.0; }, g, 0)),
                  DegenerateInputError);
}

TEST_CASE("property: unfolding identity over centers") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 1 + trial % 2;
    const auto g = make_grid(dim, dim == 1 ? 64 : 32);
    const auto u = gen::sample_field(gen::band_limited(rng, dim, 4, 4), g, -0.5);
    for (double t : {-0.5, -0.05}) {
      const GaussianProbe probe(u, t);
      std::vector<double> m(g.size()), gr(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto mo = probe.at(g.point(i));
        m[i] = mo.mass;
        gr[i] = mo.grad;
      }
      const double lhs = integrate_cell(Field(g, m, t));
      const double rhs = kernel_mass(dim) * integrate_cell(square(u));
      CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
      const double lg = integrate_cell(Field(g, gr, t));
      const double rg = kernel_mass(dim) * integrate_cell(gradient_energy(u));
      CHECK(std::abs(lg - rg) <= 1e-8 * std::max(1.0, rg));
    }
  }
}

TEST_CASE("property: doubling the lattice radius does not move periodized values") {
  std::mt19937_64 rng(8);
  const auto g = make_grid(1, 64);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = gen::sample_field(gen::band_limited(rng, 1, 5, 4), g, -2.0);
    for (double t : {-2.0, -0.4}) {
      auto p = KernelParams::for_time(g, t);
      const double a = GaussianProbe(u, t, p).at({0.3, 0}).mass;
      p.lattice_radius *= 2;
      const double b = GaussianProbe(u, t, p).at({0.3, 0}).mass;
      CHECK(std::abs(a - b) <= p.tail_tol * std::max(1.0, a));
    }
  }
}

TEST_CASE("homogeneous moments") {
  const CaloricPolynomial x2(1, {{{2, 0}, 0, 1.0}});
  CHECK(std::abs(moment_homogeneous(x2, -1.0) - 4 * kSqrtPi) < 1e-10);
  CHECK(std::abs(moment_homogeneous(x2, -1.0) - moment_oracle(1, {2, 0}, 0, -1.0)) < 1e-10);
  const CaloricPolynomial x1(1, {{{1, 0}, 0, 1.0}});
  CHECK(moment_homogeneous(x1, -0.3) == 0.0);
  const CaloricPolynomial t1(1, {{{0, 0}, 1, 1.0}});
  CHECK(moment_homogeneous(t1, -0.5) == doctest::Approx(-0.5 * std::sqrt(4 * kPi)).epsilon(1e-14));
  const CaloricPolynomial mixed(1, {{{2, 0}, 0, 1.0}, {{1, 0}, 0, 1.0}});
  CHECK_THROWS_AS(moment_homogeneous(mixed, -1.0), DomainError);
  // Caloric data: int (x^2 + 2t) G0 = 4 sqrt(pi)|t| - 4 sqrt(pi)|t| = 0.
  CHECK(std::abs(moment_homogeneous(heat_polynomial(1, 0, 2), -0.7)) < 1e-12);
}

TEST_CASE("property: moments match quadrature and scale as |t|^{d/2}") {
  for (int dim : {1, 2}) {
    const int dmax = dim == 1 ? 6 : 4;
    for (int d = 0; d <= dmax; ++d) {
      for (int l = 0; 2 * l <= d; ++l) {
        for (const auto& mu : indices_of_order(dim, d - 2 * l)) {
          const CaloricPolynomial p(dim, {{mu.components, l, 1.0}});
          for (double t : {-1.0, -0.2}) {
            const double exact = moment_homogeneous(p, t);
            const double q = moment_oracle(dim, mu.components, l, t);
            CHECK(std::abs(exact - q) <= 1e-8 * std::max(1.0, std::abs(q)));
          }
          const double a = moment_homogeneous(p, -0.8), b = moment_homogeneous(p, -0.05);
          if (a != 0.0) CHECK(a / b == doctest::Approx(std::pow(0.8 / 0.05, d / 2.0)).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("ball moments") {
  CHECK(moment_ball({1, {1, 0}, 0, 1.0}, -0.3) == 0.0);
  CHECK(moment_ball({2, {2, 3}, 1, 0.7}, -0.3) == 0.0);
  const double t = -0.01;
  const CaloricPolynomial x2(1, {{{2, 0}, 0, 1.0}});
  const double full = moment_homogeneous(x2, t);
  const double ball = moment_ball({1, {2, 0}, 0, 1.0}, t);
  CHECK(std::abs(ball - full) <= std::pow(std::abs(t), 3));
  CHECK(moment_ball({1, {0, 0}, 0, 1e3}, -1.0) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-14));
  CHECK(moment_ball({1, {0, 0}, 0, {}}, -1.0) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-14));
  for (const MomentSpec& s : {MomentSpec{1, {2, 0}, 0, 0.3}, MomentSpec{1, {4, 0}, 1, 0.5},
                              MomentSpec{2, {2, 0}, 0, 0.5}, MomentSpec{2, {2, 2}, 1, 0.4}}) {
    const double tt = -0.05;
    const double o = ball_oracle(s, tt);
    CHECK(std::abs(moment_ball(s, tt) - o) <= 1e-8 * std::max(1e-3, std::abs(o)));
  }
}

TEST_CASE("tail bound") {
  CHECK(tail_bound(1.0, 5.0, -0.01, 1) < 1e-50);
  CHECK(tail_bound(1.0, 3.0, -0.2, 1) < tail_bound(1.0, 2.0, -0.2, 1));
  for (int dim : {1, 2}) {
    const double t = -0.25, R = 2.0;
    double tail;
    if (dim == 1) {
      tail = 2 * gen::simpson([&](double x) { return kernel({x, 0}, t, 1); }, R, 40, 40000);
    } else {
      tail = 2 * kPi * gen::simpson([&](double r) { return r * kernel({r, 0}, t, 2); }, R, 40, 40000);
    }
    CHECK(tail <= tail_bound(1.0, R, t, dim));
  }
}
