#include <doctest.h>

#include <cmath>
#include <random>

#include "freqlab/errors.hpp"
#include "freqlab/gaussian.hpp"
#include "freqlab/hermite.hpp"
#include "freqlab/polynomial.hpp"
#include "freqlab/scenario.hpp"
#include "freqlab/similarity.hpp"
#include "freqlab/solver.hpp"
#include "generators.hpp"

using namespace freqlab;

namespace {

SimilarityField from_profile(const YGrid& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(g.size());
  const auto ax = g.axis();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = g.dim == 1 ? f(ax[i], 0.0) : f(ax[i / ax.size()], ax[i % ax.size()]);
  }
  return SimilarityField(g, v, 0.0);
}

Field caloric_field(int d, double t) {
  const auto g = make_grid(1, 512, 8 * kPi);
  const auto P = heat_polynomial(1, 0, d);
  return sample(
      [&](const Point& x, double s) { return edge_cutoff(x[0], 8 * kPi) * P.evaluate(x, s); }, g, t);
}

Trajectory heat_run(const Field& u0, double eps, int samples = 30) {
  return solve(u0, CoefficientSet::none(u0.grid().dim()), {0, 0},
               SolveSchedule::geometric(u0.time(), eps, 0.8, samples, 1e-3, 4));
}

Trajectory caloric_run(int d) {
  Scenario s;
  s.initial = "caloric:" + std::to_string(d);
  const auto setup = build_setup(s);
  return solve(setup.u0, setup.coefficients, {0, 0},
               SolveSchedule::geometric(-1.0, 0.5, 0.8, 30, 1e-3, 4));
}

}  // namespace

TEST_CASE("y-grid defaults") {
  const auto g1 = YGrid::make(1), g2 = YGrid::make(2);
  CHECK(g1.points % 2 == 1);
  CHECK(g2.points % 2 == 1);
  CHECK(std::exp(-g1.half_width * g1.half_width / 8) < 1e-16);
  CHECK(g1.coordinate(g1.points / 2) == doctest::Approx(0.0));
}

TEST_CASE("pullback of constants and of caloric data") {
  const auto g = make_grid(1, 64);
  const auto one = sample([](const Point&, double) { return 1.0; }, g, -1.0);
  const auto U = to_similarity(one, YGrid::make(1));
  CHECK(U.tau() == doctest::Approx(0.0));
  const auto ax = U.grid().axis();
  double e = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) e = std::max(e, std::abs(U.values()[i] - std::exp(-ax[i] * ax[i] / 8)));
  CHECK(e < 1e-12);

  const double t = -0.1;
  const auto C = to_similarity(caloric_field(2, t), YGrid::make(1));
  e = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double y = ax[i];
    e = std::max(e, std::abs(C.values()[i] / std::abs(t) - std::exp(-y * y / 8) * (y * y - 2)));
  }
  CHECK(e < 1e-4);
  CHECK_THROWS_AS(to_similarity(one.with_time(0.0), YGrid::make(1)), DomainError);
  CHECK_THROWS_AS(to_similarity(one.with_time(-1e-8), YGrid::make(1)), ResolutionError);
}

TEST_CASE("property: squared norm of the pullback equals phi") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 1 + trial % 2;
    const auto g = make_grid(dim, dim == 1 ? 64 : 32);
    const double t = trial < 4 ? -0.5 : -0.05;
    const auto u = gen::sample_field(gen::band_limited(rng, dim, 3, 3), g, t);
    const auto U = to_similarity(u, YGrid::make(dim));
    CHECK(U.squared_norm() == doctest::Approx(phi(u, t)).epsilon(1e-6));
  }
}

TEST_CASE("H on the ground state and on a scaled Hermite function") {
  const auto yg = YGrid::make(1);
  const auto ground = from_profile(yg, [](double y, double) { return std::exp(-y * y / 8); });
  CHECK(apply_H(ground).max_abs() < 1e-6);
  const auto b2 = scaled_basis({1, {2, 0}}, yg);
  const auto hb = apply_H(b2);
  CHECK(std::sqrt(hb.combine(1.0, b2, -1.0).squared_norm() / b2.squared_norm()) < 1e-5);
  const auto wide = from_profile(yg, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(apply_H(wide), ResolutionError);
}

TEST_CASE("property: H is linear and the quadratic form matches (HU, U)") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int dim : {1, 2}) {
    const auto yg = YGrid::make(dim);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> w(6);
      for (double& x : w) x = c(rng);
      auto make = [&](int shift) {
        return from_profile(yg, [&, shift](double y, double z) {
          return std::exp(-(y * y + z * z) / 8) *
                 (w[shift] + w[shift + 1] * y + w[shift + 2] * (y * y - z * z + y * z));
        });
      };
      const auto U1 = make(0), U2 = make(3);
      const double a = c(rng), b = c(rng);
      const auto lhs = apply_H(U1.combine(a, U2, b));
      const auto rhs = apply_H(U1).combine(a, apply_H(U2), b);
      CHECK(lhs.combine(1.0, rhs, -1.0).max_abs() <= 1e-12 * std::max(1.0, lhs.max_abs()));
      const double hu = apply_H(U1).dot(U1);
      CHECK(quadratic_form(U1) == doctest::Approx(hu).epsilon(1e-6));
    }
  }
}

TEST_CASE("qbar values") {
  const auto yg = YGrid::make(1);
  const auto ground = from_profile(yg, [](double y, double) { return std::exp(-y * y / 8); });
  CHECK(std::abs(qbar(ground, 0.0, {0, 0})) < 1e-6);
  const auto C = to_similarity(caloric_field(2, -0.1), yg);
  CHECK(qbar(C, C.tau(), {0, 0}) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(qbar(C, C.tau(), {3.0, 0}) == doctest::Approx(qbar(C, C.tau(), {0, 0})).epsilon(1e-12));
  const auto zero = from_profile(yg, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(qbar(zero, 0.0, {0, 0}), DegenerateInputError);
}

TEST_CASE("trace of a pure heat run is monotone") {
  const auto g = make_grid(1, 64);
  const auto u0 = sample([](const Point& x, double) { return std::cos(x[0]); }, g, -1.0);
  const auto tr = heat_run(u0, 0.5);
  const auto trace = frequency_trace(tr, {0, 0}, 0.5);
  REQUIRE(trace.size() > 5);
  CHECK(trace.taus.front() >= trace.tau0 - 1e-12);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace.Q_vals[i] <= trace.Q_vals[i - 1] + 1e-4);
    CHECK(trace.taus[i] > trace.taus[i - 1]);
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(trace.Qbar_vals[i] == trace.Q_vals[i]);
    CHECK(trace.phi_vals[i] > 0.0);
  }
  const auto diag = qbar_derivative_diag(trace);
  CHECK(diag.back() <= 1e-4);
}

TEST_CASE("trace of caloric data is flat at d/2") {
  for (int d : {2, 3}) {
    const auto tr = caloric_run(d);
    const auto trace = frequency_trace(tr, {0, 0}, 0.5);
    for (std::size_t i : trace.trusted_indices()) {
      CHECK(trace.Q_vals[i] == doctest::Approx(d / 2.0).epsilon(1e-3));
      if (!std::isnan(trace.cross_check[i])) CHECK(trace.cross_check[i] < 1e-3);
    }
    const auto diag = qbar_derivative_diag(trace);
    for (std::size_t i : trace.trusted_indices()) {
      if (i > 0 && i + 1 < trace.size() && trace.trusted[i - 1] && trace.trusted[i + 1]) {
        CHECK(std::abs(diag[i]) < 1e-3);
      }
    }
  }
}

TEST_CASE("trace of a constant is zero and short traces are rejected") {
  const auto g = make_grid(1, 64);
  const auto u0 = sample([](const Point&, double) { return 2.0; }, g, -1.0);
  const auto trace = frequency_trace(heat_run(u0, 0.5, 10), {0, 0}, 0.5);
  for (double q : trace.Q_vals) CHECK(std::abs(q) < 1e-10);
  FrequencyTrace two;
  two.taus = {1.0, 2.0};
  two.Qbar_vals = {0.5, 0.5};
  CHECK_THROWS_AS(qbar_derivative_diag(two), DomainError);
}

TEST_CASE("drift correction enters only through the first moment") {
  const auto tr = caloric_run(2);
  const auto t0 = frequency_trace(tr, {0, 0}, 0.5);
  const auto t1 = frequency_trace(tr, {0.7, 0}, 0.5);
  for (std::size_t i = 0; i < t0.size(); ++i) {
    CHECK(t1.Q_vals[i] == t0.Q_vals[i]);
    // Even data: the correction vanishes up to the cutoff asymmetry.
    CHECK(t1.Qbar_vals[i] == doctest::Approx(t0.Qbar_vals[i]).epsilon(1e-8));
  }
}
