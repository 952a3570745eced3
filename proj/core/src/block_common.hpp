#pragma once

#include <set>
#include <vector>

#include "rfhdg/mesh.hpp"

namespace rfhdg::detail {

enum class EdgeRole {
  InteriorRow,  // both neighbors in the block, no data term
  DataRow,      // single neighbor, Dirichlet data applies
  NoRow,        // interface edge: trace unknowns only, no trace equation
};

struct EntityPlan {
  std::vector<int> elements;
  std::vector<int> edges;
  std::vector<EdgeRole> roles;  // parallel to edges
};

inline EntityPlan plan_entities(const Mesh& mesh, Subdomain filter) {
  EntityPlan plan;
  std::set<int> edge_ids;
  for (const Element& el : mesh.elements) {
    if (filter != Subdomain::Single && el.subdomain != filter) continue;
    plan.elements.push_back(el.id);
    edge_ids.insert(el.edge_ids.begin(), el.edge_ids.end());
  }
  std::vector<bool> active(mesh.elements.size(), false);
  for (int id : plan.elements) active[id] = true;

  plan.edges.assign(edge_ids.begin(), edge_ids.end());
  plan.roles.reserve(plan.edges.size());
  for (int id : plan.edges) {
    const Edge& e = mesh.edge(id);
    const bool n0 = e.neighbors[0] >= 0 && active[e.neighbors[0]];
    const bool n1 = e.neighbors[1] >= 0 && active[e.neighbors[1]];
    if (n0 && n1)
      plan.roles.push_back(EdgeRole::InteriorRow);
    else if (e.kind == EdgeKind::Interface)
      plan.roles.push_back(EdgeRole::NoRow);
    else
      plan.roles.push_back(EdgeRole::DataRow);
  }
  return plan;
}

}  // namespace rfhdg::detail
