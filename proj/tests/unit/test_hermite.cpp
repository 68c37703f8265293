#include <doctest.h>

#include <cmath>
#include <random>

#include "freqlab/errors.hpp"
#include "freqlab/hermite.hpp"
#include "freqlab/polynomial.hpp"
#include "freqlab/scenario.hpp"
#include "freqlab/similarity.hpp"
#include "generators.hpp"

using namespace freqlab;

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

SimilarityField from_profile(const YGrid& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(g.size());
  const auto ax = g.axis();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = g.dim == 1 ? f(ax[i], 0.0) : f(ax[i / ax.size()], ax[i % ax.size()]);
  }
  return SimilarityField(g, v, 0.0);
}

// Exact samples of P on the given times; no solver involved.
Trajectory exact_trajectory(const CaloricPolynomial& P, const std::vector<double>& times) {
  const auto g = make_grid(P.dim(), P.dim() == 1 ? 512 : 256, 8 * kPi);
  Trajectory tr;
  tr.coefficients = CoefficientSet::none(P.dim());
  for (double t : times) {
    tr.fields.push_back(sample(
        [&](const Point& x, double s) {
          double c = edge_cutoff(x[0], 8 * kPi);
          if (P.dim() == 2) c *= edge_cutoff(x[1], 8 * kPi);
          return c * P.evaluate(x, s);
        },
        g, t));
  }
  return tr;
}

std::vector<double> geometric_times(double t0, double rho, int n) {
  std::vector<double> t;
  for (int k = n - 1; k >= 0; --k) t.push_back(t0 * std::pow(rho, k));
  return t;
}

double coefficient(const CaloricPolynomial& p, std::array<int, 2> mu, int l) {
  for (const auto& m : p.terms()) {
    if (m.mu == mu && m.l == l) return m.coeff;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("Hermite functions") {
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    CHECK(hermite_fn(0, x) == doctest::Approx(std::exp(-x * x / 2)));
    CHECK(hermite_fn(2, x) == doctest::Approx((4 * x * x - 2) * std::exp(-x * x / 2)));
  }
  CHECK(hermite_fn(2, 0.0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(hermite_fn(-1, 0.0), DomainError);
  for (int j = 0; j <= 6; ++j) {
    for (int k = 0; k <= 6; ++k) {
      const double ip = gen::simpson([&](double x) { return hermite_fn(j, x) * hermite_fn(k, x); },
                                     -20, 20, 20000);
      const double expect = j == k ? std::pow(2.0, k) * factorial(k) * std::sqrt(kPi) : 0.0;
      CHECK(std::abs(ip - expect) <= 1e-8 * std::max(1.0, expect));
    }
  }
}

TEST_CASE("normalized basis") {
  const double g0 = phi_alpha({1, {0, 0}}, {0.3, 0});
  CHECK(g0 == doctest::Approx(std::exp(-0.045) / std::pow(kPi, 0.25)));
  for (int dim : {1, 2}) {
    const auto yg = YGrid::make(dim);
    for (int a = 0; a <= 4; ++a) {
      for (const auto& al : indices_of_order(dim, a)) {
        const auto A = scaled_basis(al, yg);
        // phi_alpha(y/2) has squared norm 2^n.
        CHECK(A.squared_norm() == doctest::Approx(std::pow(2.0, dim)).epsilon(1e-8));
        for (int b = 0; b <= a; ++b) {
          for (const auto& be : indices_of_order(dim, b)) {
            if (be == al) continue;
            CHECK(std::abs(A.dot(scaled_basis(be, yg))) < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("eigen-identity for |alpha| <= 6") {
  for (int dim : {1, 2}) {
    const auto yg = YGrid::make(dim);
    for (int a = 0; a <= 6; ++a) {
      for (const auto& al : indices_of_order(dim, a)) {
        const auto B = scaled_basis(al, yg);
        const auto r = apply_H(B).combine(1.0, B, -0.5 * a);
        CHECK(std::sqrt(r.squared_norm() / B.squared_norm()) < 1e-5);
      }
    }
  }
}

TEST_CASE("projection") {
  const auto yg = YGrid::make(1);
  const auto B = scaled_basis({1, {2, 0}}, yg);
  const auto p = project(B, 6);
  for (const auto& [al, c] : p.coefficients) {
    if (al.components[0] == 2) CHECK(c == doctest::Approx(1.0).epsilon(1e-6));
    else CHECK(std::abs(c) < 1e-6);
  }
  CHECK(p.residual_norm < 1e-6 * p.norm);
  CHECK_THROWS_AS(project(B, 13), DomainError);

  const auto C = from_profile(yg, [](double y, double) { return std::exp(-y * y / 8) * (y * y - 2); });
  const auto pc = project(C, 8);
  CHECK(pc.energy_of_order(2) > 0.999 * pc.norm * pc.norm);
  const auto wide = from_profile(yg, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(project(wide, 4), ResolutionError);
}

TEST_CASE("property: projection is an isometry on the truncated span") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (int dim : {1, 2}) {
    const auto yg = YGrid::make(dim);
    const int order = dim == 1 ? 8 : 5;
    for (int trial = 0; trial < 4; ++trial) {
      SimilarityField U(yg, std::vector<double>(yg.size(), 0.0), 0.0);
      std::map<MultiIndex, double> c;
      for (int a = 0; a <= order; ++a) {
        for (const auto& al : indices_of_order(dim, a)) {
          c[al] = nd(rng);
          U = U.combine(1.0, scaled_basis(al, yg), c[al]);
        }
      }
      const auto p = project(U, order);
      double energy = 0.0;
      for (const auto& [al, e] : p.energy) energy += e;
      CHECK(energy == doctest::Approx(U.squared_norm()).epsilon(1e-6));
      for (const auto& [al, v] : c) CHECK(p.coefficients.at(al) == doctest::Approx(v).epsilon(1e-6));
    }
  }
}

TEST_CASE("spectrum distance") {
  CHECK(spectrum_dist(0.73) == doctest::Approx(0.23));
  CHECK(spectrum_dist(1.0) == 0.0);
  CHECK(spectrum_dist(-0.2) == doctest::Approx(0.2));
  CHECK(nearest_spectrum_index(-0.2) == 0);
  CHECK(nearest_spectrum_index(0.25) == 0);
  CHECK(nearest_spectrum_index(0.75) == 1);
  CHECK(nearest_spectrum_index(1.6) == 3);
}

TEST_CASE("property: spectrum distance is exact on rationals") {
  for (int den = 1; den <= 12; ++den) {
    for (int num = -2 * den; num <= 10 * den; ++num) {
      const double q = double(num) / den;
      // Exact: nearest half-integer in rational arithmetic.
      const int twice = 2 * num;  // 2q = twice / den
      int m = std::max(0, int(std::floor(double(twice) / den + 0.5)));
      if (2 * (twice - (m - 1) * den) == den && m > 0) --m;  // tie toward smaller m
      const double expect = std::abs(double(twice - m * den)) / (2.0 * den);
      // Up to a few ulps of q.
      CHECK(std::abs(spectrum_dist(q) - expect) <= 8e-16 * std::max(1.0, std::abs(q)));
      CHECK(nearest_spectrum_index(q) == m);
    }
  }
}

TEST_CASE("caloric bases") {
  const auto b2 = caloric_basis(2, 1);
  REQUIRE(b2.size() == 1);
  CHECK(coefficient(b2[0], {2, 0}, 0) == 1.0);
  CHECK(coefficient(b2[0], {0, 0}, 1) == 2.0);
  const auto b3 = caloric_basis(3, 1);
  CHECK(coefficient(b3[0], {3, 0}, 0) == 1.0);
  CHECK(coefficient(b3[0], {1, 0}, 1) == 6.0);
  const auto b1 = caloric_basis(1, 2);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0].terms().size() == 1);
  CHECK(b1[1].terms().size() == 1);
  CHECK_THROWS_AS(caloric_basis(9, 1), DomainError);
  CHECK_THROWS_AS(caloric_basis(-1, 1), DomainError);
  for (int dim : {1, 2}) {
    for (int d = 0; d <= kMaxCaloricDegree; ++d) {
      const auto b = caloric_basis(d, dim);
      CHECK(int(b.size()) == (dim == 1 ? 1 : d + 1));
      for (const auto& p : b) {
        CHECK(p.is_caloric());
        CHECK(p.is_homogeneous());
        CHECK(p.degree() == d);
      }
    }
  }
}

TEST_CASE("property: homogeneous caloric profiles lie in one eigenspace") {
  for (int dim : {1, 2}) {
    const auto yg = YGrid::make(dim);
    for (int d = 0; d <= (dim == 1 ? 6 : 4); ++d) {
      for (const auto& P : caloric_basis(d, dim)) {
        const auto U = from_profile(yg, [&](double y, double z) {
          return std::exp(-(y * y + z * z) / 8) * P.evaluate({y, z}, -1.0);
        });
        const auto p = project(U, std::min(kMaxProjectionOrder, d + 4));
        const double n2 = U.squared_norm();
        CHECK(std::sqrt(std::abs(n2 - p.energy_of_order(d)) / n2) < 1e-5);
      }
    }
  }
}

TEST_CASE("polynomial bookkeeping") {
  const CaloricPolynomial p(1, {{{2, 0}, 0, 1.0}, {{2, 0}, 0, 2.0}, {{0, 0}, 1, 0.0}});
  CHECK(p.terms().size() == 1);
  CHECK(p.terms()[0].coeff == 3.0);
  CHECK(heat_polynomial(1, 0, 4).evaluate({1.0, 0}, -1.0) == doctest::Approx(1 - 12 + 12));
  CHECK_FALSE(CaloricPolynomial(1, {{{2, 0}, 0, 1.0}}).is_caloric());
  const auto q = heat_polynomial(2, 1, 2);
  CHECK(q.evaluate({5.0, 2.0}, -0.5) == doctest::Approx(4.0 - 1.0));
}

TEST_CASE("caloric fit on an exact trajectory") {
  const auto P = heat_polynomial(1, 0, 2);
  const auto tr = exact_trajectory(P, geometric_times(-1.0, 0.7, 30));
  const auto fit = fit_caloric(tr, 2);
  CHECK_FALSE(fit.degenerate);
  CHECK(coefficient(fit.polynomial, {2, 0}, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(coefficient(fit.polynomial, {0, 0}, 1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.residual < 1e-6);
  CHECK(fit.radii.size() >= 3);

  const auto bad = fit_caloric(tr, 1);
  CHECK(bad.residual > 0.5);

  const auto P2 = heat_polynomial(2, 0, 2) + heat_polynomial(2, 1, 1).scaled(0.0);
  const auto fit2 = fit_caloric(exact_trajectory(P2, geometric_times(-1.0, 0.7, 20)), 2);
  CHECK(coefficient(fit2.polynomial, {2, 0}, 0) == doctest::Approx(1.0).epsilon(1e-6));

  Trajectory zero = tr;
  for (auto& f : zero.fields) f = Field(f.grid(), std::vector<double>(f.grid().size(), 0.0), f.time());
  CHECK_THROWS_AS(fit_caloric(zero, 2), DegenerateInputError);
}
