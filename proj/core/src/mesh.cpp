#include "rfhdg/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace rfhdg {

namespace {

constexpr double kAlignTol = 1e-10;

}  // namespace

int Mesh::locate(const Vec2& x) const {
  if (!domain.contains(x)) fail(ErrorCode::Topology, "point outside mesh domain");
  auto clampi = [](int i, int n) { return std::min(std::max(i, 0), n - 1); };
  int i = clampi(static_cast<int>((x[0] - domain.x_min) / dx()), nx);
  int j = clampi(static_cast<int>((x[1] - domain.y_min) / dy()), ny);
  return j * nx + i;
}

Mesh build_uniform_mesh(const Domain& domain, int nx, int ny,
                        std::optional<double> divider_y) {
  if (!(domain.x_min < domain.x_max && domain.y_min < domain.y_max))
    fail(ErrorCode::Config, "degenerate domain");
  if (nx < 1 || ny < 1) fail(ErrorCode::Config, "nx and ny must be at least 1");

  Mesh mesh;
  mesh.domain = domain;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.divider_y = divider_y;

  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;

  int divider_row = -1;  // index j with y_min + j*dy == divider
  if (divider_y) {
    const double rel = (*divider_y - domain.y_min) / dy;
    divider_row = static_cast<int>(std::lround(rel));
    if (divider_row < 1 || divider_row > ny - 1 ||
        std::abs(rel - divider_row) > kAlignTol)
      fail(ErrorCode::Alignment, "subdomain divider does not lie on an interior mesh line");
  }

  const int n_vert = (nx + 1) * ny;
  auto vedge = [&](int i, int j) { return i * ny + j; };
  auto hedge = [&](int i, int j) { return n_vert + j * nx + i; };

  mesh.elements.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Element el;
      el.id = j * nx + i;
      el.bounds = Domain{domain.x_min + i * dx, domain.x_min + (i + 1) * dx,
                         domain.y_min + j * dy, domain.y_min + (j + 1) * dy};
      el.diameter = std::hypot(dx, dy);
      if (divider_y)
        el.subdomain = (j >= divider_row) ? Subdomain::Stokes : Subdomain::Darcy;
      el.edge_ids = {vedge(i, j), vedge(i + 1, j), hedge(i, j), hedge(i, j + 1)};
      mesh.elements.push_back(el);
    }
  }
  mesh.h = mesh.elements.empty() ? 0.0 : mesh.elements.front().diameter;

  mesh.edges.resize(static_cast<std::size_t>(n_vert) + (ny + 1) * nx);
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      Edge e;
      e.id = vedge(i, j);
      const double x = domain.x_min + i * dx;
      e.a = Vec2(x, domain.y_min + j * dy);
      e.b = Vec2(x, domain.y_min + (j + 1) * dy);
      e.normal = Vec2(1, 0);
      e.length = dy;
      e.neighbors = {i > 0 ? j * nx + (i - 1) : -1, i < nx ? j * nx + i : -1};
      e.kind = (i == 0 || i == nx) ? EdgeKind::Boundary : EdgeKind::Interior;
      mesh.edges[e.id] = e;
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Edge e;
      e.id = hedge(i, j);
      const double y = domain.y_min + j * dy;
      e.a = Vec2(domain.x_min + i * dx, y);
      e.b = Vec2(domain.x_min + (i + 1) * dx, y);
      e.normal = Vec2(0, 1);
      e.length = dx;
      e.neighbors = {j > 0 ? (j - 1) * nx + i : -1, j < ny ? j * nx + i : -1};
      if (j == 0 || j == ny)
        e.kind = EdgeKind::Boundary;
      else if (divider_y && j == divider_row)
        e.kind = EdgeKind::Interface;
      else
        e.kind = EdgeKind::Interior;
      mesh.edges[e.id] = e;
    }
  }
  return mesh;
}

double outward_sign(const Mesh& mesh, int element_id, int edge_id) {
  const Edge& e = mesh.edge(edge_id);
  if (e.neighbors[0] == element_id) return 1.0;
  if (e.neighbors[1] == element_id) return -1.0;
  fail(ErrorCode::Topology, "edge is not incident to element");
}

Vec2 outward_normal(const Mesh& mesh, int element_id, int edge_id) {
  return outward_sign(mesh, element_id, edge_id) * mesh.edge(edge_id).normal;
}

}  // namespace rfhdg
