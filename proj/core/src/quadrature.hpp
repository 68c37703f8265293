#pragma once

#include <vector>

#include "freqlab/fields.hpp"

namespace freqlab::detail {

struct Node {
  Point x;
  double weight;
};

// Gauss-Legendre rule for the ball |x| < r.
std::vector<Node> ball_nodes(int dim, double r);

// Interpolated values of f at the nodes.
std::vector<double> values_at(const TrigInterpolant& f, const std::vector<Node>& nodes);

}  // namespace freqlab::detail
