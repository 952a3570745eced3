#pragma once

#include <Eigen/Core>

#include "rfhdg/mesh.hpp"

namespace rfhdg {

/// Gauss-Legendre rule on the reference interval [0, 1].
struct LineRule {
  Eigen::VectorXd points;   // in (0, 1)
  Eigen::VectorXd weights;  // positive, summing to 1
  int size() const { return static_cast<int>(points.size()); }
};

/// Tensor-product rule on a physical rectangle.
struct RectRule {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;  // summing to the element area
  int size() const { return static_cast<int>(weights.size()); }
};

/// Rule mapped onto a physical edge. `t` holds the reference parameters,
/// with t = 0 at the lexicographically smaller endpoint.
struct EdgeRule {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;  // summing to the edge length
  Eigen::VectorXd t;
  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point rule, exact for polynomials of degree <= 2n-1.
LineRule gauss_line(int n);

RectRule tensor_rect(const LineRule& rule, const Element& element);

EdgeRule edge_rule(const LineRule& rule, const Edge& edge);

}  // namespace rfhdg
