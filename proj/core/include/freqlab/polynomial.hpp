#pragma once

#include <array>
#include <vector>

#include "freqlab/fields.hpp"

namespace freqlab {

struct MultiIndex {
  int dim = 1;
  std::array<int, 2> components{0, 0};

  int order() const noexcept { return components[0] + (dim == 2 ? components[1] : 0); }
  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;
};

// Every multi-index of the given dimension with |alpha| == order, in
// lexicographic order of the components (descending first component).
std::vector<MultiIndex> indices_of_order(int dim, int order);

// C * x^mu * t^l
struct Monomial {
  std::array<int, 2> mu{0, 0};
  int l = 0;
  double coeff = 0.0;
};

// Polynomial in (x, t). Like terms are merged and zero terms dropped on
// construction, so the term list is canonical.
class CaloricPolynomial {
 public:
  CaloricPolynomial(int dim, std::vector<Monomial> terms);

  int dim() const noexcept { return dim_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  // Parabolic degree max(|mu| + 2l); 0 for the zero polynomial.
  int degree() const noexcept;
  bool is_homogeneous() const noexcept;

  double evaluate(const Point& x, double t) const;

  // (d/dt - Lap) applied termwise.
  CaloricPolynomial heat_residual() const;
  // Exact for integer coefficients.
  bool is_caloric() const { return heat_residual().is_zero(); }

  CaloricPolynomial scaled(double factor) const;
  CaloricPolynomial operator+(const CaloricPolynomial& other) const;

  ScalarFunction descriptor() const;

 private:
  int dim_;
  std::vector<Monomial> terms_;
};

// One-variable heat polynomial  sum_k d!/((d-2k)! k!) x^(d-2k) t^k  placed on
// the given axis.
CaloricPolynomial heat_polynomial(int dim, int axis, int d);

}  // namespace freqlab
