#include "freqlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "freqlab/errors.hpp"

namespace freqlab {

std::vector<MultiIndex> indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  if (order < 0) return out;
  if (dim == 1) {
    out.push_back({1, {order, 0}});
    return out;
  }
  for (int a = order; a >= 0; --a) out.push_back({2, {a, order - a}});
  return out;
}

CaloricPolynomial::CaloricPolynomial(int dim, std::vector<Monomial> terms) : dim_(dim) {
  if (dim != 1 && dim != 2) throw DomainError("polynomial dimension must be 1 or 2");
  std::map<std::tuple<int, int, int>, double> merged;
  for (const auto& m : terms) {
    if (m.mu[0] < 0 || m.mu[1] < 0 || m.l < 0) throw DomainError("negative exponent");
    if (dim == 1 && m.mu[1] != 0) throw DomainError("second exponent used in one dimension");
    merged[{m.mu[0], m.mu[1], m.l}] += m.coeff;
  }
  for (const auto& [key, c] : merged) {
    if (c != 0.0) terms_.push_back({{std::get<0>(key), std::get<1>(key)}, std::get<2>(key), c});
  }
}

int CaloricPolynomial::degree() const noexcept {
  int d = 0;
  for (const auto& m : terms_) d = std::max(d, m.mu[0] + m.mu[1] + 2 * m.l);
  return d;
}

bool CaloricPolynomial::is_homogeneous() const noexcept {
  const int d = degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const Monomial& m) { return m.mu[0] + m.mu[1] + 2 * m.l == d; });
}

double CaloricPolynomial::evaluate(const Point& x, double t) const {
  double s = 0.0;
  for (const auto& m : terms_) {
    s += m.coeff * std::pow(x[0], m.mu[0]) * std::pow(x[1], m.mu[1]) * std::pow(t, m.l);
  }
  return s;
}

CaloricPolynomial CaloricPolynomial::heat_residual() const {
  std::vector<Monomial> out;
  for (const auto& m : terms_) {
    if (m.l > 0) out.push_back({m.mu, m.l - 1, m.coeff * m.l});
    for (int j = 0; j < dim_; ++j) {
      if (m.mu[j] < 2) continue;
      Monomial d = m;
      d.mu[j] -= 2;
      d.coeff = -m.coeff * m.mu[j] * (m.mu[j] - 1);
      out.push_back(d);
    }
  }
  return CaloricPolynomial(dim_, std::move(out));
}

CaloricPolynomial CaloricPolynomial::scaled(double factor) const {
  auto t = terms_;
  for (auto& m : t) m.coeff *= factor;
  return CaloricPolynomial(dim_, std::move(t));
}

CaloricPolynomial CaloricPolynomial::operator+(const CaloricPolynomial& other) const {
  if (other.dim_ != dim_) throw DomainError("polynomial dimensions differ");
  auto t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return CaloricPolynomial(dim_, std::move(t));
}

ScalarFunction CaloricPolynomial::descriptor() const {
  return [p = *this](const Point& x, double t) { return p.evaluate(x, t); };
}

CaloricPolynomial heat_polynomial(int dim, int axis, int d) {
  if (d < 0) throw DomainError("heat polynomial degree must be non-negative");
  if (axis < 0 || axis >= dim) throw DomainError("axis out of range");
  std::vector<Monomial> terms;
  // d! / ((d-2k)! k!) built incrementally to stay in exact integers.
  double c = 1.0;
  for (int k = 0; 2 * k <= d; ++k) {
    if (k > 0) c = c * (d - 2 * k + 2) * (d - 2 * k + 1) / k;
    Monomial m;
    m.mu[axis] = d - 2 * k;
    m.l = k;
    m.coeff = c;
    terms.push_back(m);
  }
  return CaloricPolynomial(dim, std::move(terms));
}

}  // namespace freqlab
