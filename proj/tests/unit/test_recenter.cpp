#include <doctest.h>

#include <cmath>
#include <random>

#include "freqlab/errors.hpp"
#include "freqlab/gaussian.hpp"
#include "freqlab/recenter.hpp"
#include "freqlab/solver.hpp"
#include "generators.hpp"

using namespace freqlab;

namespace {

// Brute-force minimum of the Gaussian Rayleigh quotient over n equispaced centers.
std::pair<double, double> dense_scan(const Field& u, double eps, int n) {
  const GaussianProbe probe(u, -eps);
  const double L = u.grid().half_period();
  double best = INFINITY, arg = 0.0;
  for (int k = 0; k < n; ++k) {
    const double c = -L + 2.0 * L * k / n;
    const auto m = probe.at({c, 0});
    const double q = m.grad / m.mass;
    if (q < best) best = q, arg = c;
  }
  return {best, arg};
}

}  // namespace

TEST_CASE("epsilon selection") {
  CHECK(choose_epsilon(1, 1, 8) == doctest::Approx(0.0625));
  CHECK(choose_epsilon(8, 1, 1) == doctest::Approx(0.2));
  const double tiny = choose_epsilon(1, 1, 1e9);
  CHECK(tiny > 0.0);
  CHECK(tiny == doctest::Approx(5e-10));
  CHECK(choose_epsilon(1, 1, 0.1, 1.0) <= 0.5);
  CHECK_THROWS_AS(choose_epsilon(0.5, 1, 1), DomainError);
  CHECK_THROWS_AS(choose_epsilon(1, 1, 0), DomainError);
}

TEST_CASE("optimizing point for a single mode") {
  const auto g = make_grid(1, 64);
  const double eps = 0.1;
  const auto u = sample([](const Point& x, double) { return std::cos(x[0]); }, g, -eps);
  const auto r = find_x_eps(u, eps);
  CHECK(r.cell_quotient_q == doctest::Approx(1.0));
  CHECK(r.quotient_at_x <= 1.0 + 1e-6);
  CHECK(r.epsilon == eps);
  CHECK(r.drift_a[0] == doctest::Approx(-r.x_eps[0] / eps));
  const auto [best, arg] = dense_scan(u, eps, 10000);
  CHECK(std::abs(r.quotient_at_x - best) <= 1e-6);
  (void)arg;
}

TEST_CASE("constant data ties to the lexicographically smallest center") {
  const auto g = make_grid(2, 32);
  const auto u = sample([](const Point&, double) { return 1.0; }, g, -0.2);
  const auto r = find_x_eps(u, 0.2);
  CHECK(r.quotient_at_x == doctest::Approx(0.0));
  CHECK(r.x_eps[0] == doctest::Approx(-kPi));
  CHECK(r.x_eps[1] == doctest::Approx(-kPi));
  const auto zero = sample([](const Point&, double) { return 0.0; }, g, -0.2);
  CHECK_THROWS_AS(find_x_eps(zero, 0.2), DegenerateInputError);
}

TEST_CASE("property: averaging bound and dense-scan agreement on random fields") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ed(0.02, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 2;
    const auto g = make_grid(dim, 32);
    const double eps = ed(rng);
    const auto u = gen::sample_field(gen::band_limited(rng, dim, 3, 4), g, -eps);
    const auto r = find_x_eps(u, eps);
    CHECK(r.quotient_at_x <= r.cell_quotient_q + 1e-6);
    CHECK(r.cell_quotient_q == doctest::Approx(dirichlet_quotient_cell(u)));
    if (dim == 1) CHECK(r.quotient_at_x <= dense_scan(u, eps, 2000).first + 1e-6);
  }
}

TEST_CASE("ball variant") {
  const auto g = make_grid(1, 512, 8 * kPi);
  const double eps = 0.25;
  const auto bump = sample([](const Point& x, double) { return std::exp(-x[0] * x[0] / 2); }, g, -eps);
  CHECK(concentration_ratio(bump) == doctest::Approx(std::sqrt(kPi) / (std::sqrt(kPi) * std::erf(1.0))).epsilon(1e-6));
  const auto r = find_x_eps_ball(bump, eps, 2.0);
  CHECK(std::abs(r.x_eps[0]) < 0.05);
  CHECK(r.quotient_at_x <= default_ball_constant(1) * 2.0 * r.cell_quotient_q);

  const auto far = sample([](const Point& x, double) { return std::exp(-std::pow(x[0] - 10, 2)); }, g, -eps);
  CHECK_THROWS_AS(find_x_eps_ball(far, eps, 8.0), PreconditionError);
  const auto flat = sample([](const Point&, double) { return 1.0; }, g, -eps);
  try {
    find_x_eps_ball(flat, eps, 8.0);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(e.measured() == doctest::Approx(8 * kPi).epsilon(1e-6));
  }
}

TEST_CASE("Galilean recentering") {
  const auto g = make_grid(1, 64);
  const auto u0 = sample([](const Point& x, double) { return std::cos(x[0]) + 0.3 * std::sin(2 * x[0]); }, g, -1.0);
  const double eps = 0.3;
  const auto tr = solve(u0, CoefficientSet::none(1), {0, 0},
                        SolveSchedule::geometric(-1.0, eps, 0.8, 12, 1e-2, 4));

  const auto same = galilean_recenter(tr, {0, 0}, eps);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(same.fields[i][k] == doctest::Approx(tr.fields[i][k]));
  }

  const Point x{0.4, 0};
  const auto moved = galilean_recenter(tr, x, eps);
  CHECK(moved.drift_a[0] == doctest::Approx(-x[0] / eps));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(dirichlet_quotient_cell(moved.fields[i]) ==
          doctest::Approx(dirichlet_quotient_cell(tr.fields[i])).epsilon(1e-10));
    CHECK(integrate_cell(square(moved.fields[i])) ==
          doctest::Approx(integrate_cell(square(tr.fields[i]))).epsilon(1e-10));
  }
  std::size_t at = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (std::abs(tr.fields[i].time() + eps) < std::abs(tr.fields[at].time() + eps)) at = i;
  }
  const Field shifted = translate(tr.fields[at], x);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(moved.fields[at][k] - shifted[k]) < 1e-8);

  const auto back = galilean_recenter(moved, {-x[0], 0}, eps);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(back.fields[i][k] - tr.fields[i][k]) < 2e-8);
  }
  CHECK(back.drift_a[0] == doctest::Approx(0.0).scale(1.0));

  const auto wrapped = galilean_recenter(tr, {kPi + 0.5, 0}, eps);
  CHECK_FALSE(wrapped.warnings.empty());
}
