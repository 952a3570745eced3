#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rfhdg/error.hpp"

namespace rfhdg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Axis-aligned rectangle (x_min, x_max) x (y_min, y_max).
struct Domain {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool contains(const Vec2& x, double tol = 1e-12) const {
    return x[0] >= x_min - tol && x[0] <= x_max + tol && x[1] >= y_min - tol &&
           x[1] <= y_max + tol;
  }
};

enum class Subdomain { Single, Stokes, Darcy };
enum class EdgeKind { Interior, Boundary, Interface };

struct Element {
  int id = -1;
  Domain bounds;
  double diameter = 0;  // h_K, diagonal of the rectangle
  Subdomain subdomain = Subdomain::Single;
  // Incident edges in the order left, right, bottom, top.
  std::array<int, 4> edge_ids{-1, -1, -1, -1};

  double area() const { return bounds.area(); }
  Vec2 center() const { return bounds.center(); }
};

/// Mesh edge with one fixed global normal (+x for vertical edges, +y for
/// horizontal ones). Element-outward normals are derived signs of it.
struct Edge {
  int id = -1;
  Vec2 a, b;  // endpoints, lexicographically ordered (a < b)
  Vec2 normal;
  double length = 0;
  // neighbors[0] lies on the side the normal points away from,
  // neighbors[1] on the side it points into; -1 when absent.
  std::array<int, 2> neighbors{-1, -1};
  EdgeKind kind = EdgeKind::Interior;

  Vec2 point(double t) const { return a + t * (b - a); }
  Vec2 tangent() const { return (b - a) / length; }
};

struct Mesh {
  Domain domain;
  int nx = 0, ny = 0;
  double h = 0;  // max element diameter
  std::vector<Element> elements;
  std::vector<Edge> edges;
  std::optional<double> divider_y;  // Stokes above, Darcy below

  double dx() const { return domain.width() / nx; }
  double dy() const { return domain.height() / ny; }
  const Element& element(int id) const { return elements.at(id); }
  const Edge& edge(int id) const { return edges.at(id); }

  /// Id of the element whose closure contains x (ties broken toward the
  /// lower-left cell).
  int locate(const Vec2& x) const;
};

/// Uniform nx-by-ny rectangular partition. When divider_y is given the
/// partition is labeled Stokes above / Darcy below, the dividing line must
/// coincide with a mesh line, and the edges on it are marked Interface.
Mesh build_uniform_mesh(const Domain& domain, int nx, int ny,
                        std::optional<double> divider_y = std::nullopt);

/// Sign s with n_K = s * n_e for the face of `element` on `edge`.
double outward_sign(const Mesh& mesh, int element_id, int edge_id);

/// Unit outward normal of `element` on `edge`.
Vec2 outward_normal(const Mesh& mesh, int element_id, int edge_id);

}  // namespace rfhdg
