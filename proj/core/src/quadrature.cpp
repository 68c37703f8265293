#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <array>
#include <cmath>

namespace freqlab::detail {
namespace {

constexpr int kRadial = 40;

// Full symmetric Gauss-Legendre rule on [-1, 1].
std::vector<std::pair<double, double>> legendre() {
  using Rule = boost::math::quadrature::gauss<double, kRadial>;
  std::vector<std::pair<double, double>> out;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.emplace_back(x[i], w[i]);
    if (x[i] != 0.0) out.emplace_back(-x[i], w[i]);
  }
  return out;
}

}  // namespace

std::vector<Node> ball_nodes(int dim, double r) {
  static const auto rule = legendre();
  std::vector<Node> nodes;
  if (dim == 1) {
    for (const auto& [x, w] : rule) nodes.push_back({{r * x, 0.0}, r * w});
    return nodes;
  }
  // x0 = r sin(theta) removes the square-root edge of the chord length, so
  // both rules converge spectrally. Nodes sharing x0 are stored together.
  for (const auto& [a, wa] : rule) {
    const double th = 0.5 * kPi * a;
    const double half_chord = r * std::cos(th);
    const double wx = 0.5 * kPi * wa * half_chord;
    for (const auto& [b, wb] : rule) {
      nodes.push_back({{r * std::sin(th), half_chord * b}, wx * half_chord * wb});
    }
  }
  return nodes;
}

std::vector<double> values_at(const TrigInterpolant& f, const std::vector<Node>& nodes) {
  std::vector<double> v(nodes.size());
  if (f.grid().dim() == 1) {
    std::vector<double> x(nodes.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = nodes[i].x[0];
    const std::vector<double> zero{0.0};
    return f.on_tensor(x, zero);
  }
  std::size_t i = 0;
  while (i < nodes.size()) {
    std::size_t j = i;
    std::vector<double> x1;
    while (j < nodes.size() && nodes[j].x[0] == nodes[i].x[0]) x1.push_back(nodes[j++].x[1]);
    const std::array<double, 1> x0{nodes[i].x[0]};
    const auto row = f.on_tensor(x0, x1);
    std::copy(row.begin(), row.end(), v.begin() + i);
    i = j;
  }
  return v;
}

}  // namespace freqlab::detail
