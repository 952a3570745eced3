#include "rfhdg/darcy.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "rfhdg/poly_basis.hpp"
#include "darcy_internal.hpp"

namespace rfhdg {

namespace detail {

namespace {

bool eliminates_velocity(DarcyVariant v) {
  return v == DarcyVariant::HdpgReduced;  // TEMP EXPERIMENT
}

bool rnn_tests(DarcyVariant v) { return v == DarcyVariant::Hdg; }

void check_problem(const DarcyProblem& problem) {
  const Mat2& k = problem.permeability;
  if (std::abs(k(0, 1) - k(1, 0)) > 1e-14 * (1.0 + k.norm()))
    fail(ErrorCode::Config, "permeability tensor must be symmetric");
  if (!(k(0, 0) > 0) || !(k.determinant() > 0))
    fail(ErrorCode::Config, "permeability tensor must be positive definite");
}

void check_config(const DarcySchemeConfig& cfg) {
  if (cfg.test_degree < 0) fail(ErrorCode::Config, "test degree must be non-negative");
  if (cfg.eta < 0 || cfg.tau < 0)
    fail(ErrorCode::Config, "stabilization constants must be non-negative");
  if (eliminates_velocity(cfg.variant) && cfg.eta != 0)
    fail(ErrorCode::Config, "velocity elimination requires eta = 0");
}

int edge_axis(const Edge& e) { return e.normal[0] != 0 ? 0 : 1; }

int edge_axis_of(const Edge& e) { return e.normal[0] != 0 ? 0 : 1; }

/// Trial values of the flux trace on one edge's quadrature points. The
/// global variant carries one vector-valued network over the whole domain
/// whose components share the hidden features; on an edge only the
/// component along the edge normal enters.
Eigen::MatrixXd flux_trace_values(const DarcySpaces& spaces, const Edge& edge,
                                  const EdgeRule& rule) {
  if (spaces.flux_trace_global) return spaces.flux_trace_global->values(rule.points);
  return spaces.flux_trace[edge.id].values(rule.t);
}

struct FluxTraceColumn {
  int offset;
  int count;
};

FluxTraceColumn flux_trace_column(const ColumnLayout& layout, const DarcySpaces& spaces,
                                  const Edge& edge) {
  if (spaces.flux_trace_global) {
    const int axis = edge_axis_of(edge);
    return {layout.offset(field::kDarcyFluxTrace, 0, axis),
            layout.count(field::kDarcyFluxTrace, 0, axis)};
  }
  return {layout.offset(field::kDarcyFluxTrace, edge.id, 0),
          layout.count(field::kDarcyFluxTrace, edge.id, 0)};
}

}  // namespace

DarcyBlockPlan plan_darcy_block(const Mesh& mesh, const DarcyProblem& problem,
                                const DarcySchemeConfig& config, Subdomain filter) {
  check_problem(problem);
  check_config(config);

  DarcyBlockPlan plan;
  plan.mesh = &mesh;
  plan.problem = &problem;
  plan.config = config;
  plan.entities = plan_entities(mesh, filter);
  if (plan.entities.elements.empty())
    fail(ErrorCode::Config, "darcy block covers no elements");
  return plan;
}

std::vector<BlockSpec> darcy_layout_blocks(const DarcyBlockPlan& plan) {
  const DarcySchemeConfig& cfg = plan.config;
  std::vector<BlockSpec> blocks;
  const bool with_u = !eliminates_velocity(cfg.variant);
  for (int el : plan.entities.elements) {
    if (with_u) {
      blocks.push_back({field::kDarcyVelocity, el, 0, cfg.resolved_n_u()});
      blocks.push_back({field::kDarcyVelocity, el, 1, cfg.resolved_n_u()});
    }
    blocks.push_back({field::kDarcyPressure, el, 0, cfg.resolved_n_p()});
  }
  if (cfg.variant == DarcyVariant::HdpgGlobalTrace) {
    blocks.push_back({field::kDarcyFluxTrace, 0, 0, cfg.resolved_n_uhat()});
  } else if (cfg.variant == DarcyVariant::HdpgFlux2) {
    for (std::size_t i = 0; i < plan.entities.edges.size(); ++i)
      if (plan.entities.roles[i] == DarcyBlockPlan::EdgeRole::InteriorRow)
        blocks.push_back({field::kDarcyPressureTrace, plan.entities.edges[i], 0,
                          cfg.resolved_n_uhat()});
  } else {
    for (int e : plan.entities.edges)
      blocks.push_back({field::kDarcyFluxTrace, e, 0, cfg.resolved_n_uhat()});
  }
  return blocks;
}

int darcy_row_count(const DarcyBlockPlan& plan) {
  const DarcySchemeConfig& cfg = plan.config;
  const int k = cfg.test_degree;
  const int elements = static_cast<int>(plan.entities.elements.size());
  const int dim_v = (k + 1) * (k + 2) / 2;
  const int dim_q = (k + 2) * (k + 3) / 2;

  if (cfg.variant == DarcyVariant::HdpgFlux2) {
    int interior = 0;
    for (auto role : plan.entities.roles)
      if (role == DarcyBlockPlan::EdgeRole::InteriorRow) ++interior;
    return elements * (2 * dim_v + dim_q) + interior * (k + 2);
  }

  int rows = 0;
  if (!eliminates_velocity(cfg.variant))
    rows += elements * (rnn_tests(cfg.variant) ? 2 * cfg.resolved_n_u() : 2 * dim_v);
  for (auto role : plan.entities.roles)
    if (role != DarcyBlockPlan::EdgeRole::NoRow)
      rows += rnn_tests(cfg.variant) ? cfg.resolved_n_uhat() : k + 1;
  rows += elements * (rnn_tests(cfg.variant) ? cfg.resolved_n_p() : dim_q);
  return rows;
}

DarcySpaces make_darcy_spaces(const DarcyBlockPlan& plan) {
  const Mesh& mesh = *plan.mesh;
  const DarcySchemeConfig& cfg = plan.config;
  DarcySpaces spaces;
  spaces.velocity.resize(mesh.elements.size());
  spaces.pressure.resize(mesh.elements.size());

  const FeatureSpaceConfig u_cfg{cfg.resolved_n_u(), cfg.half_width,
                                 derive_seed(cfg.seed, "darcy.u")};
  const FeatureSpaceConfig p_cfg{cfg.resolved_n_p(), cfg.half_width,
                                 derive_seed(cfg.seed, "darcy.p")};
  for (int el : plan.entities.elements) {
    spaces.velocity[el] = init_element_space(u_cfg, el);
    spaces.pressure[el] = init_element_space(p_cfg, el);
  }

  if (cfg.variant == DarcyVariant::HdpgGlobalTrace) {
    const FeatureSpaceConfig g_cfg{cfg.resolved_n_uhat(), cfg.half_width,
                                   derive_seed(cfg.seed, "darcy.uhat")};
    spaces.flux_trace_global = init_global_trace_space(g_cfg, mesh.domain);
  } else if (cfg.variant == DarcyVariant::HdpgFlux2) {
    spaces.pressure_trace.resize(mesh.edges.size());
    spaces.boundary_pressure_trace.resize(mesh.edges.size());
    const FeatureSpaceConfig t_cfg{cfg.resolved_n_uhat(), cfg.half_width,
                                   derive_seed(cfg.seed, "darcy.phat")};
    for (int e : plan.entities.edges) spaces.pressure_trace[e] = init_edge_space(t_cfg, e);
  } else {
    spaces.flux_trace.resize(mesh.edges.size());
    const FeatureSpaceConfig t_cfg{cfg.resolved_n_uhat(), cfg.half_width,
                                   derive_seed(cfg.seed, "darcy.uhat")};
    for (int e : plan.entities.edges) spaces.flux_trace[e] = init_edge_space(t_cfg, e);
  }
  return spaces;
}

namespace {

void assemble_hdpg_family(const DarcyBlockPlan& plan, const DarcySpaces& spaces,
                          const ColumnLayout& layout, DenseSystem& system,
                          std::vector<Eigen::MatrixXd>* elimination) {
  const Mesh& mesh = *plan.mesh;
  const DarcyProblem& problem = *plan.problem;
  const DarcySchemeConfig& cfg = plan.config;
  const int k = cfg.test_degree;
  const int n_u = cfg.resolved_n_u();
  const int n_p = cfg.resolved_n_p();
  const bool eliminate = eliminates_velocity(cfg.variant);
  const bool rnn = rnn_tests(cfg.variant);
  const Mat2 k_inv = problem.permeability.inverse();
  const LineRule line = gauss_line(cfg.resolved_quad());
  const EdgePolyBasis edge_tests(k);

  struct ElementData {
    Eigen::MatrixXd gram_u;   // eq1 tests x u features
    Eigen::MatrixXd grad_p_x; // eq1 tests x p features
    Eigen::MatrixXd grad_p_y;
  };
  std::vector<ElementData> volume(mesh.elements.size());
  std::vector<Eigen::MatrixXd> local_elim(mesh.elements.size());
  std::vector<bool> active(mesh.elements.size(), false);
  for (int el : plan.entities.elements) active[el] = true;

  // Volume pairings and, for the eliminating variants, the per-element map
  // from pressure to velocity coefficients.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const Eigen::MatrixXd u_vals = spaces.velocity[el_id].values(rule.points);
    Eigen::MatrixXd p_dx, p_dy;
    spaces.pressure[el_id].gradients(rule.points, p_dx, p_dy);

    Eigen::MatrixXd tests;
    if (rnn) {
      tests = u_vals;
    } else {
      tests = ElementPolyBasis(k, el).values(rule.points);
    }
    const auto weighted = (tests * rule.weights.asDiagonal()).eval();
    ElementData data;
    data.gram_u = weighted * u_vals.transpose();
    data.grad_p_x = weighted * p_dx.transpose();
    data.grad_p_y = weighted * p_dy.transpose();

    if (eliminate) {
      const int dv = static_cast<int>(tests.rows());
      Eigen::MatrixXd a(2 * dv, 2 * n_u);
      Eigen::MatrixXd b(2 * dv, n_p);
      for (int c = 0; c < 2; ++c) {
        for (int c2 = 0; c2 < 2; ++c2)
          a.block(c * dv, c2 * n_u, dv, n_u) = k_inv(c, c2) * data.gram_u;
        b.block(c * dv, 0, dv, n_p) = (c == 0 ? data.grad_p_x : data.grad_p_y);
      }
      int rank = 0;
      local_elim[el_id] = -least_squares_columns(std::move(a), b, &rank);
      if (rank == 0 || !local_elim[el_id].allFinite())
        fail(ErrorCode::Elimination,
             "velocity elimination block is degenerate on element " +
                 std::to_string(el_id));
    }
    volume[el_id] = std::move(data);
  }

  // Flux-law rows (skipped entirely when the velocity is eliminated).
  if (!eliminate) {
    for (int el_id : plan.entities.elements) {
      const Element& el = mesh.element(el_id);
      const ElementData& data = volume[el_id];
      const int dv = static_cast<int>(data.gram_u.rows());
      const int u0 = layout.offset(field::kDarcyVelocity, el_id, 0);
      const int u1 = layout.offset(field::kDarcyVelocity, el_id, 1);
      const int p0 = layout.offset(field::kDarcyPressure, el_id, 0);

      std::vector<int> row_ids(2 * dv);
      for (int c = 0; c < 2; ++c)
        for (int a = 0; a < dv; ++a) {
          const int r = system.add_row({equation::kDarcyFluxLaw, el_id});
          row_ids[c * dv + a] = r;
          auto row = system.row(r);
          row.segment(u0, n_u) = k_inv(c, 0) * data.gram_u.row(a);
          row.segment(u1, n_u) = k_inv(c, 1) * data.gram_u.row(a);
          row.segment(p0, n_p) = (c == 0 ? data.grad_p_x : data.grad_p_y).row(a);
        }

      if (cfg.eta > 0) {
        for (int e_id : el.edge_ids) {
          const Edge& edge = mesh.edge(e_id);
          const int axis = edge_axis(edge);
          const EdgeRule er = edge_rule(line, edge);
          const Eigen::MatrixXd u_tr = spaces.velocity[el_id].values(er.points);
          const Eigen::MatrixXd flux_tr = flux_trace_values(spaces, edge, er);
          Eigen::MatrixXd tests_tr;
          if (rnn)
            tests_tr = u_tr;
          else
            tests_tr = ElementPolyBasis(k, el).values(er.points);
          const auto weighted = (tests_tr * er.weights.asDiagonal()).eval();
          const Eigen::MatrixXd pen_u = cfg.eta * el.diameter * (weighted * u_tr.transpose());
          const Eigen::MatrixXd pen_f =
              cfg.eta * el.diameter * (weighted * flux_tr.transpose());
          const auto fcol = flux_trace_column(layout, spaces, e_id);
          const int u_axis = axis == 0 ? u0 : u1;
          for (int a = 0; a < dv; ++a) {
            auto row = system.row(row_ids[axis * dv + a]);
            row.segment(u_axis, n_u) += pen_u.row(a);
            row.segment(fcol.offset, fcol.count) -= pen_f.row(a);
          }
        }
      }
    }
  }

  // Pressure-trace rows, one block per edge carrying them.
  for (std::size_t i = 0; i < plan.entities.edges.size(); ++i) {
    if (plan.entities.roles[i] == DarcyBlockPlan::EdgeRole::NoRow) continue;
    const Edge& edge = mesh.edge(plan.entities.edges[i]);
    const EdgeRule er = edge_rule(line, edge);
    Eigen::MatrixXd tests;
    if (rnn)
      tests = spaces.flux_trace[edge.id].values(er.t);
    else
      tests = edge_tests.values(er.t);
    const auto weighted = (tests * er.weights.asDiagonal()).eval();
    const int n_tests = static_cast<int>(tests.rows());

    std::vector<int> row_ids(n_tests);
    for (int a = 0; a < n_tests; ++a)
      row_ids[a] = system.add_row({equation::kDarcyPressureTrace, edge.id});

    for (int nb : edge.neighbors) {
      if (nb < 0 || !active[nb]) continue;
      const double sign = outward_sign(mesh, nb, edge.id);
      const Eigen::MatrixXd p_tr = spaces.pressure[nb].values(er.points);
      const Eigen::MatrixXd pressure_term = sign * (weighted * p_tr.transpose());
      const int p0 = layout.offset(field::kDarcyPressure, nb, 0);
      for (int a = 0; a < n_tests; ++a)
        system.row(row_ids[a]).segment(p0, n_p) -= pressure_term.row(a);

      if (cfg.eta > 0) {
        const Element& el = mesh.element(nb);
        const int axis = edge_axis(edge);
        const Eigen::MatrixXd u_tr = spaces.velocity[nb].values(er.points);
        const Eigen::MatrixXd flux_tr = flux_trace_values(spaces, edge, er);
        const Eigen::MatrixXd pen_u = cfg.eta * el.diameter * (weighted * u_tr.transpose());
        const Eigen::MatrixXd pen_f =
            cfg.eta * el.diameter * (weighted * flux_tr.transpose());
        const int u_axis = layout.offset(field::kDarcyVelocity, nb, axis);
        const auto fcol = flux_trace_column(layout, spaces, edge.id);
        for (int a = 0; a < n_tests; ++a) {
          auto row = system.row(row_ids[a]);
          row.segment(u_axis, n_u) -= pen_u.row(a);
          row.segment(fcol.offset, fcol.count) += pen_f.row(a);
        }
      }

      if (plan.entities.roles[i] == DarcyBlockPlan::EdgeRole::DataRow) {
        Eigen::VectorXd g_vals(er.size());
        for (int q = 0; q < er.size(); ++q)
          g_vals[q] = problem.boundary(er.points.col(q));
        const Eigen::VectorXd rhs = sign * (weighted * g_vals);
        for (int a = 0; a < n_tests; ++a) system.rhs(row_ids[a]) -= rhs[a];
      }
    }
  }

  // Mass rows per element.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const Eigen::MatrixXd u_vals = spaces.velocity[el_id].values(rule.points);

    Eigen::MatrixXd tests, tests_dx, tests_dy;
    if (rnn) {
      tests = spaces.pressure[el_id].values(rule.points);
      spaces.pressure[el_id].gradients(rule.points, tests_dx, tests_dy);
    } else {
      const ElementPolyBasis basis(k + 1, el);
      tests = basis.values(rule.points);
      basis.gradients(rule.points, tests_dx, tests_dy);
    }
    const int dq = static_cast<int>(tests.rows());

    const Eigen::MatrixXd div_x =
        tests_dx * rule.weights.asDiagonal() * u_vals.transpose();
    const Eigen::MatrixXd div_y =
        tests_dy * rule.weights.asDiagonal() * u_vals.transpose();

    Eigen::VectorXd f_vals(rule.size());
    for (int q = 0; q < rule.size(); ++q) f_vals[q] = problem.source(rule.points.col(q));
    const Eigen::VectorXd rhs = tests * rule.weights.asDiagonal() * f_vals;

    std::vector<int> row_ids(dq);
    for (int a = 0; a < dq; ++a) {
      const int r = system.add_row({equation::kDarcyMass, el_id});
      row_ids[a] = r;
      system.rhs(r) = -rhs[a];
    }

    if (eliminate) {
      Eigen::MatrixXd div_u(dq, 2 * n_u);
      div_u << div_x, div_y;
      const Eigen::MatrixXd folded = div_u * local_elim[el_id];
      const int p0 = layout.offset(field::kDarcyPressure, el_id, 0);
      for (int a = 0; a < dq; ++a)
        system.row(row_ids[a]).segment(p0, n_p) += folded.row(a);
    } else {
      const int u0 = layout.offset(field::kDarcyVelocity, el_id, 0);
      const int u1 = layout.offset(field::kDarcyVelocity, el_id, 1);
      for (int a = 0; a < dq; ++a) {
        auto row = system.row(row_ids[a]);
        row.segment(u0, n_u) += div_x.row(a);
        row.segment(u1, n_u) += div_y.row(a);
      }
    }

    // Flux-trace coupling through the element boundary.
    for (int e_id : el.edge_ids) {
      const Edge& edge = mesh.edge(e_id);
      const double sign = outward_sign(mesh, el_id, e_id);
      const EdgeRule er = edge_rule(line, edge);
      Eigen::MatrixXd tests_tr;
      if (rnn)
        tests_tr = spaces.pressure[el_id].values(er.points);
      else
        tests_tr = ElementPolyBasis(k + 1, el).values(er.points);
      const Eigen::MatrixXd flux_tr = flux_trace_values(spaces, edge, er);
      const Eigen::MatrixXd coupling =
          sign * (tests_tr * er.weights.asDiagonal() * flux_tr.transpose());
      const auto fcol = flux_trace_column(layout, spaces, e_id);
      for (int a = 0; a < dq; ++a)
        system.row(row_ids[a]).segment(fcol.offset, fcol.count) -= coupling.row(a);
    }
  }

  if (elimination && eliminate) {
    elimination->resize(mesh.elements.size());
    for (int el_id : plan.entities.elements)
      if (local_elim[el_id].size() > 0) (*elimination)[el_id] = std::move(local_elim[el_id]);
  }
}

void assemble_flux2(const DarcyBlockPlan& plan, DarcySpaces& spaces,
                    const ColumnLayout& layout, DenseSystem& system) {
  const Mesh& mesh = *plan.mesh;
  const DarcyProblem& problem = *plan.problem;
  const DarcySchemeConfig& cfg = plan.config;
  const int k = cfg.test_degree;
  const int n_u = cfg.resolved_n_u();
  const int n_p = cfg.resolved_n_p();
  const int n_t = cfg.resolved_n_uhat();
  const Mat2 k_inv = problem.permeability.inverse();
  const LineRule line = gauss_line(cfg.resolved_quad());

  std::vector<DarcyBlockPlan::EdgeRole> role_of(mesh.edges.size(),
                                                DarcyBlockPlan::EdgeRole::NoRow);
  for (std::size_t i = 0; i < plan.entities.edges.size(); ++i)
    role_of[plan.entities.edges[i]] = plan.entities.roles[i];

  // L2 projection of the boundary data onto each boundary edge's trace span.
  for (std::size_t i = 0; i < plan.entities.edges.size(); ++i) {
    if (plan.entities.roles[i] != DarcyBlockPlan::EdgeRole::DataRow) continue;
    const Edge& edge = mesh.edge(plan.entities.edges[i]);
    const EdgeRule er = edge_rule(line, edge);
    const Eigen::MatrixXd trace = spaces.pressure_trace[edge.id].values(er.t);
    const Eigen::VectorXd sqrt_w = er.weights.array().sqrt();
    Eigen::MatrixXd a = trace.transpose();
    Eigen::VectorXd b(er.size());
    for (int q = 0; q < er.size(); ++q) {
      a.row(q) *= sqrt_w[q];
      b[q] = sqrt_w[q] * problem.boundary(er.points.col(q));
    }
    int rank = 0;
    Eigen::VectorXd coef = least_squares_columns(std::move(a), b, &rank);
    if (rank == 0 || !coef.allFinite())
      fail(ErrorCode::Projection,
           "boundary trace projection is degenerate on edge " + std::to_string(edge.id));
    spaces.boundary_pressure_trace[edge.id] = std::move(coef);
  }

  auto trace_vals_or_data =
      [&](const Edge& edge, const EdgeRule& er,
          Eigen::VectorXd& known) -> std::optional<Eigen::MatrixXd> {
    // Returns trial values for unknown traces, or fills `known` for
    // projected boundary traces.
    const Eigen::MatrixXd vals = spaces.pressure_trace[edge.id].values(er.t);
    if (role_of[edge.id] == DarcyBlockPlan::EdgeRole::DataRow) {
      known = vals.transpose() * spaces.boundary_pressure_trace[edge.id];
      return std::nullopt;
    }
    return vals;
  };

  // Flux-law rows.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const ElementPolyBasis vec_tests(k, el);
    const int dv = vec_tests.size();
    const Eigen::MatrixXd tests = vec_tests.values(rule.points);
    Eigen::MatrixXd tests_dx, tests_dy;
    vec_tests.gradients(rule.points, tests_dx, tests_dy);

    const Eigen::MatrixXd u_vals = spaces.velocity[el_id].values(rule.points);
    const Eigen::MatrixXd p_vals = spaces.pressure[el_id].values(rule.points);
    const auto weighted = (tests * rule.weights.asDiagonal()).eval();
    const Eigen::MatrixXd gram_u = weighted * u_vals.transpose();
    const Eigen::MatrixXd div_px =
        tests_dx * rule.weights.asDiagonal() * p_vals.transpose();
    const Eigen::MatrixXd div_py =
        tests_dy * rule.weights.asDiagonal() * p_vals.transpose();

    const int u0 = layout.offset(field::kDarcyVelocity, el_id, 0);
    const int u1 = layout.offset(field::kDarcyVelocity, el_id, 1);
    const int p0 = layout.offset(field::kDarcyPressure, el_id, 0);

    std::vector<int> row_ids(2 * dv);
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < dv; ++a) {
        const int r = system.add_row({equation::kDarcyFluxLaw, el_id});
        row_ids[c * dv + a] = r;
        auto row = system.row(r);
        row.segment(u0, n_u) = k_inv(c, 0) * gram_u.row(a);
        row.segment(u1, n_u) = k_inv(c, 1) * gram_u.row(a);
        row.segment(p0, n_p) = -(c == 0 ? div_px : div_py).row(a);
      }

    for (int e_id : el.edge_ids) {
      const Edge& edge = mesh.edge(e_id);
      const int axis = edge_axis(edge);
      const double sign = outward_sign(mesh, el_id, e_id);
      const EdgeRule er = edge_rule(line, edge);
      const Eigen::MatrixXd tests_tr = vec_tests.values(er.points);
      const auto weighted_tr = (sign * tests_tr * er.weights.asDiagonal()).eval();
      Eigen::VectorXd known;
      const auto trial = trace_vals_or_data(edge, er, known);
      if (trial) {
        const Eigen::MatrixXd coupling = weighted_tr * trial->transpose();
        const int t0 = layout.offset(field::kDarcyPressureTrace, e_id, 0);
        for (int a = 0; a < dv; ++a)
          system.row(row_ids[axis * dv + a]).segment(t0, n_t) += coupling.row(a);
      } else {
        const Eigen::VectorXd contribution = weighted_tr * known;
        for (int a = 0; a < dv; ++a)
          system.rhs(row_ids[axis * dv + a]) -= contribution[a];
      }
    }
  }

  // Mass rows.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const ElementPolyBasis scalar_tests(k + 1, el);
    const int dq = scalar_tests.size();
    const Eigen::MatrixXd tests = scalar_tests.values(rule.points);
    const auto weighted = (tests * rule.weights.asDiagonal()).eval();

    Eigen::MatrixXd u_dx, u_dy;
    spaces.velocity[el_id].gradients(rule.points, u_dx, u_dy);
    const Eigen::MatrixXd div_x = weighted * u_dx.transpose();
    const Eigen::MatrixXd div_y = weighted * u_dy.transpose();

    Eigen::VectorXd f_vals(rule.size());
    for (int q = 0; q < rule.size(); ++q) f_vals[q] = problem.source(rule.points.col(q));
    const Eigen::VectorXd rhs = weighted * f_vals;

    const int u0 = layout.offset(field::kDarcyVelocity, el_id, 0);
    const int u1 = layout.offset(field::kDarcyVelocity, el_id, 1);
    const int p0 = layout.offset(field::kDarcyPressure, el_id, 0);

    std::vector<int> row_ids(dq);
    for (int a = 0; a < dq; ++a) {
      const int r = system.add_row({equation::kDarcyMass, el_id});
      row_ids[a] = r;
      auto row = system.row(r);
      row.segment(u0, n_u) = -div_x.row(a);
      row.segment(u1, n_u) = -div_y.row(a);
      system.rhs(r) = rhs[a];
    }

    if (cfg.tau > 0) {
      const double tau_h = cfg.tau / el.diameter;
      for (int e_id : el.edge_ids) {
        const Edge& edge = mesh.edge(e_id);
        const EdgeRule er = edge_rule(line, edge);
        const Eigen::MatrixXd tests_tr = scalar_tests.values(er.points);
        const auto weighted_tr = (tests_tr * er.weights.asDiagonal()).eval();
        const Eigen::MatrixXd p_tr = spaces.pressure[el_id].values(er.points);
        const Eigen::MatrixXd pen_p = tau_h * (weighted_tr * p_tr.transpose());
        for (int a = 0; a < dq; ++a)
          system.row(row_ids[a]).segment(p0, n_p) -= pen_p.row(a);

        Eigen::VectorXd known;
        const auto trial = trace_vals_or_data(edge, er, known);
        if (trial) {
          const Eigen::MatrixXd pen_t = tau_h * (weighted_tr * trial->transpose());
          const int t0 = layout.offset(field::kDarcyPressureTrace, e_id, 0);
          for (int a = 0; a < dq; ++a)
            system.row(row_ids[a]).segment(t0, n_t) += pen_t.row(a);
        } else {
          const Eigen::VectorXd contribution = tau_h * (weighted_tr * known);
          for (int a = 0; a < dq; ++a) system.rhs(row_ids[a]) -= contribution[a];
        }
      }
    }
  }

  // Flux-continuity rows on interior edges; the trace test space vanishes on
  // the boundary, so boundary edges emit nothing.
  const EdgePolyBasis edge_tests(k + 1);
  for (std::size_t i = 0; i < plan.entities.edges.size(); ++i) {
    if (plan.entities.roles[i] != DarcyBlockPlan::EdgeRole::InteriorRow) continue;
    const Edge& edge = mesh.edge(plan.entities.edges[i]);
    const int axis = edge_axis(edge);
    const EdgeRule er = edge_rule(line, edge);
    const Eigen::MatrixXd tests = edge_tests.values(er.t);
    const auto weighted = (tests * er.weights.asDiagonal()).eval();
    const int n_tests = edge_tests.size();

    std::vector<int> row_ids(n_tests);
    for (int a = 0; a < n_tests; ++a)
      row_ids[a] = system.add_row({equation::kDarcyFluxContinuity, edge.id});

    const Eigen::MatrixXd trace = spaces.pressure_trace[edge.id].values(er.t);
    const int t0 = layout.offset(field::kDarcyPressureTrace, edge.id, 0);

    for (int nb : edge.neighbors) {
      const Element& el = mesh.element(nb);
      const double sign = outward_sign(mesh, nb, edge.id);
      const double tau_h = cfg.tau / el.diameter;

      const Eigen::MatrixXd u_tr = spaces.velocity[nb].values(er.points);
      const Eigen::MatrixXd flux = sign * (weighted * u_tr.transpose());
      const int u_axis = layout.offset(field::kDarcyVelocity, nb, axis);
      for (int a = 0; a < n_tests; ++a)
        system.row(row_ids[a]).segment(u_axis, n_u) += flux.row(a);

      if (cfg.tau > 0) {
        const Eigen::MatrixXd p_tr = spaces.pressure[nb].values(er.points);
        const Eigen::MatrixXd pen_p = tau_h * (weighted * p_tr.transpose());
        const Eigen::MatrixXd pen_t = tau_h * (weighted * trace.transpose());
        const int p0 = layout.offset(field::kDarcyPressure, nb, 0);
        for (int a = 0; a < n_tests; ++a) {
          auto row = system.row(row_ids[a]);
          row.segment(p0, n_p) += pen_p.row(a);
          row.segment(t0, n_t) -= pen_t.row(a);
        }
      }
    }
  }
}

}  // namespace

void assemble_darcy_rows(const DarcyBlockPlan& plan, const DarcySpaces& spaces,
                         const ColumnLayout& layout, DenseSystem& system,
                         std::vector<Eigen::MatrixXd>* elimination) {
  if (plan.config.variant == DarcyVariant::HdpgFlux2)
    fail(ErrorCode::Config, "flux2 rows are assembled through assemble_darcy");
  assemble_hdpg_family(plan, spaces, layout, system, elimination);
}

}  // namespace detail

DarcyAssembly assemble_darcy(const Mesh& mesh, const DarcyProblem& problem,
                             const DarcySchemeConfig& config) {
  detail::DarcyBlockPlan plan = detail::plan_darcy_block(mesh, problem, config);
  ColumnLayout layout(detail::darcy_layout_blocks(plan));
  DarcySpaces spaces = detail::make_darcy_spaces(plan);

  DarcyAssembly out{DenseSystem(layout.dof()), std::move(layout), {}, config, {}};
  out.system.reserve_rows(detail::darcy_row_count(plan));
  if (config.variant == DarcyVariant::HdpgFlux2) {
    detail::assemble_flux2(plan, spaces, out.layout, out.system);
  } else {
    detail::assemble_hdpg_family(plan, spaces, out.layout, out.system, &out.elimination);
  }
  out.spaces = std::move(spaces);
  return out;
}

namespace {

DarcyAssembly assemble_checked(const Mesh& mesh, const DarcyProblem& problem,
                               const DarcySchemeConfig& config, DarcyVariant expected) {
  if (config.variant != expected)
    fail(ErrorCode::Config, "scheme config carries a different variant");
  return assemble_darcy(mesh, problem, config);
}

}  // namespace

DarcyAssembly assemble_hdpg_darcy(const Mesh& m, const DarcyProblem& p,
                                  const DarcySchemeConfig& c) {
  return assemble_checked(m, p, c, DarcyVariant::Hdpg);
}
DarcyAssembly assemble_hdpg_darcy_reduced(const Mesh& m, const DarcyProblem& p,
                                          const DarcySchemeConfig& c) {
  return assemble_checked(m, p, c, DarcyVariant::HdpgReduced);
}
DarcyAssembly assemble_hdpg_darcy_global_trace(const Mesh& m, const DarcyProblem& p,
                                               const DarcySchemeConfig& c) {
  return assemble_checked(m, p, c, DarcyVariant::HdpgGlobalTrace);
}
DarcyAssembly assemble_hdg_darcy(const Mesh& m, const DarcyProblem& p,
                                 const DarcySchemeConfig& c) {
  return assemble_checked(m, p, c, DarcyVariant::Hdg);
}
DarcyAssembly assemble_hdpg_darcy_flux2(const Mesh& m, const DarcyProblem& p,
                                        const DarcySchemeConfig& c) {
  return assemble_checked(m, p, c, DarcyVariant::HdpgFlux2);
}

DarcySolution::DarcySolution(const Mesh& mesh, const DarcyAssembly& assembly,
                             Eigen::VectorXd coefficients)
    : DarcySolution(mesh, assembly.layout, assembly.spaces, assembly.config,
                    &assembly.elimination, std::move(coefficients)) {}

DarcySolution::DarcySolution(const Mesh& mesh, const ColumnLayout& layout,
                             const DarcySpaces& spaces, const DarcySchemeConfig& config,
                             const std::vector<Eigen::MatrixXd>* elimination,
                             Eigen::VectorXd coefficients)
    : mesh_(&mesh),
      layout_(&layout),
      spaces_(&spaces),
      config_(config),
      x_(std::move(coefficients)) {
  if (x_.size() != layout.dof())
    fail(ErrorCode::Config, "coefficient vector length does not match layout");
  if (elimination && !elimination->empty()) {
    recovered_u_.resize(mesh.elements.size());
    const int n_p = config_.resolved_n_p();
    for (std::size_t el = 0; el < elimination->size(); ++el) {
      const Eigen::MatrixXd& map = (*elimination)[el];
      if (map.size() == 0) continue;
      const int p0 = layout.offset(field::kDarcyPressure, static_cast<int>(el), 0);
      recovered_u_[el] = map * x_.segment(p0, n_p);
    }
  }
}

void DarcySolution::check_point(int element, const Vec2& x) const {
  if (!mesh_->element(element).bounds.contains(x, 1e-10))
    fail(ErrorCode::Topology, "evaluation point lies outside the hinted element");
}

double DarcySolution::pressure(int element, const Vec2& x) const {
  check_point(element, x);
  const int p0 = layout_->offset(field::kDarcyPressure, element, 0);
  const int n_p = config_.resolved_n_p();
  return spaces_->pressure[element].values(x).dot(x_.segment(p0, n_p));
}

Vec2 DarcySolution::pressure_gradient(int element, const Vec2& x) const {
  check_point(element, x);
  const int p0 = layout_->offset(field::kDarcyPressure, element, 0);
  const int n_p = config_.resolved_n_p();
  const Eigen::MatrixX2d g = spaces_->pressure[element].gradients(x);
  return g.transpose() * x_.segment(p0, n_p);
}

Vec2 DarcySolution::velocity(int element, const Vec2& x) const {
  check_point(element, x);
  const int n_u = config_.resolved_n_u();
  const Eigen::VectorXd vals = spaces_->velocity[element].values(x);
  if (!recovered_u_.empty() && recovered_u_[element].size() > 0) {
    const Eigen::VectorXd& coef = recovered_u_[element];
    return {vals.dot(coef.head(n_u)), vals.dot(coef.tail(n_u))};
  }
  const int u0 = layout_->offset(field::kDarcyVelocity, element, 0);
  const int u1 = layout_->offset(field::kDarcyVelocity, element, 1);
  return {vals.dot(x_.segment(u0, n_u)), vals.dot(x_.segment(u1, n_u))};
}

}  // namespace rfhdg
