#include "rfhdg/stokes.hpp"

#include <cmath>

#include "stokes_internal.hpp"

namespace rfhdg {

namespace detail {

namespace {

// Deviatoric pairing dev(E_C) : dev(E_C2) between the three component
// placements (xx, xy, yy).
const double kDevPairing[3][3] = {{0.5, 0, -0.5}, {0, 2.0, 0}, {-0.5, 0, 0.5}};

// Component index d with E_C n_e = e_d for an edge with normal axis `axis`,
// or -1 when the contraction vanishes.
int normal_component(int c, int axis) {
  if (axis == 0) {
    if (c == 0) return 0;  // xx
    if (c == 1) return 1;  // xy
    return -1;             // yy
  }
  if (c == 0) return -1;
  if (c == 1) return 0;
  return 1;
}

int edge_axis(const Edge& e) { return e.normal[0] != 0 ? 0 : 1; }

void check_config(const StokesSchemeConfig& cfg, double nu, const Mat2& inv_kappa) {
  if (!(nu > 0)) fail(ErrorCode::Config, "viscosity must be positive");
  if (cfg.test_degree < 0) fail(ErrorCode::Config, "test degree must be non-negative");
  if (cfg.eta < 0) fail(ErrorCode::Config, "stabilization constant must be non-negative");
  if (std::abs(inv_kappa(0, 1) - inv_kappa(1, 0)) > 1e-14 * (1.0 + inv_kappa.norm()))
    fail(ErrorCode::Config, "inverse permeability must be symmetric");
}

}  // namespace

StokesBlockPlan plan_stokes_block(const Mesh& mesh, double nu, const Mat2& inv_kappa,
                                  VectorFn source, VectorFn boundary,
                                  const StokesSchemeConfig& config, Subdomain filter) {
  check_config(config, nu, inv_kappa);
  StokesBlockPlan plan;
  plan.mesh = &mesh;
  plan.nu = nu;
  plan.inv_kappa = inv_kappa;
  plan.source = std::move(source);
  plan.boundary = std::move(boundary);
  plan.config = config;
  plan.entities = plan_entities(mesh, filter);
  if (plan.entities.elements.empty())
    fail(ErrorCode::Config, "stokes block covers no elements");
  return plan;
}

std::vector<BlockSpec> stokes_layout_blocks(const StokesBlockPlan& plan) {
  const StokesSchemeConfig& cfg = plan.config;
  std::vector<BlockSpec> blocks;
  for (int el : plan.entities.elements) {
    for (int c = 0; c < 3; ++c)
      blocks.push_back({field::kStokesStress, el, c, cfg.resolved_n_sigma()});
    for (int c = 0; c < 2; ++c)
      blocks.push_back({field::kStokesVelocity, el, c, cfg.resolved_n_u()});
  }
  for (int e : plan.entities.edges)
    for (int c = 0; c < 2; ++c)
      blocks.push_back({field::kStokesStressTrace, e, c, cfg.resolved_n_sigmahat()});
  return blocks;
}

int stokes_row_count(const StokesBlockPlan& plan) {
  const int k = plan.config.test_degree;
  const int dim_k = (k + 1) * (k + 2) / 2;
  const int dim_k1 = (k + 2) * (k + 3) / 2;
  const int elements = static_cast<int>(plan.entities.elements.size());
  int rows = elements * (3 * dim_k + 2 * dim_k1);
  for (auto role : plan.entities.roles)
    if (role != EdgeRole::NoRow) rows += 2 * (k + 1);
  if (plan.config.mean_trace_row) rows += 1;
  return rows;
}

StokesSpaces make_stokes_spaces(const StokesBlockPlan& plan) {
  const Mesh& mesh = *plan.mesh;
  const StokesSchemeConfig& cfg = plan.config;
  StokesSpaces spaces;
  spaces.stress.resize(mesh.elements.size());
  spaces.velocity.resize(mesh.elements.size());
  spaces.stress_trace.resize(mesh.edges.size());

  const FeatureSpaceConfig s_cfg{cfg.resolved_n_sigma(), cfg.half_width,
                                 derive_seed(cfg.seed, "stokes.sigma")};
  const FeatureSpaceConfig u_cfg{cfg.resolved_n_u(), cfg.half_width,
                                 derive_seed(cfg.seed, "stokes.u")};
  const FeatureSpaceConfig t_cfg{cfg.resolved_n_sigmahat(), cfg.half_width,
                                 derive_seed(cfg.seed, "stokes.sigmahat")};
  for (int el : plan.entities.elements) {
    spaces.stress[el] = init_element_space(s_cfg, el);
    spaces.velocity[el] = init_element_space(u_cfg, el);
  }
  for (int e : plan.entities.edges) spaces.stress_trace[e] = init_edge_space(t_cfg, e);
  return spaces;
}

void assemble_stokes_rows(const StokesBlockPlan& plan, const StokesSpaces& spaces,
                          const ColumnLayout& layout, DenseSystem& system) {
  const Mesh& mesh = *plan.mesh;
  const StokesSchemeConfig& cfg = plan.config;
  const int k = cfg.test_degree;
  const int n_s = cfg.resolved_n_sigma();
  const int n_t = cfg.resolved_n_sigmahat();
  const int n_u = cfg.resolved_n_u();
  const double inv_2nu = 1.0 / (2.0 * plan.nu);
  const bool with_kappa = !plan.inv_kappa.isZero(0.0);
  const LineRule line = gauss_line(cfg.resolved_quad());
  const EdgePolyBasis edge_tests(k);

  std::vector<bool> active(mesh.elements.size(), false);
  for (int el : plan.entities.elements) active[el] = true;

  // Constitutive rows: (1/2nu)(sigma^d, tau^d) - (eps(u), tau) per element,
  // plus the eta-weighted boundary penalty.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const ElementPolyBasis tests(k, el);
    const int dv = tests.size();
    const Eigen::MatrixXd t_vals = tests.values(rule.points);
    const auto weighted = (t_vals * rule.weights.asDiagonal()).eval();

    const Eigen::MatrixXd s_vals = spaces.stress[el_id].values(rule.points);
    Eigen::MatrixXd u_dx, u_dy;
    spaces.velocity[el_id].gradients(rule.points, u_dx, u_dy);

    const Eigen::MatrixXd gram_s = weighted * s_vals.transpose();
    const Eigen::MatrixXd strain_x = weighted * u_dx.transpose();
    const Eigen::MatrixXd strain_y = weighted * u_dy.transpose();

    std::array<int, 3> s_col;
    for (int c = 0; c < 3; ++c) s_col[c] = layout.offset(field::kStokesStress, el_id, c);
    const int u0 = layout.offset(field::kStokesVelocity, el_id, 0);
    const int u1 = layout.offset(field::kStokesVelocity, el_id, 1);

    std::vector<int> row_ids(3 * dv);
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < dv; ++a) {
        const int r = system.add_row({equation::kStokesConstitutive, el_id});
        row_ids[c * dv + a] = r;
        auto row = system.row(r);
        for (int c2 = 0; c2 < 3; ++c2)
          if (kDevPairing[c][c2] != 0)
            row.segment(s_col[c2], n_s) += inv_2nu * kDevPairing[c][c2] * gram_s.row(a);
        // tau : eps(u); the xy placement picks up both gradient components.
        if (c == 0) row.segment(u0, n_u) -= strain_x.row(a);
        if (c == 1) {
          row.segment(u0, n_u) -= strain_y.row(a);
          row.segment(u1, n_u) -= strain_x.row(a);
        }
        if (c == 2) row.segment(u1, n_u) -= strain_y.row(a);
      }

    if (cfg.eta > 0) {
      for (int e_id : el.edge_ids) {
        const Edge& edge = mesh.edge(e_id);
        const int axis = edge_axis(edge);
        const EdgeRule er = edge_rule(line, edge);
        const Eigen::MatrixXd t_tr = tests.values(er.points);
        const auto weighted_tr =
            (cfg.eta * el.diameter * t_tr * er.weights.asDiagonal()).eval();
        const Eigen::MatrixXd s_tr = spaces.stress[el_id].values(er.points);
        const Eigen::MatrixXd trace_tr = spaces.stress_trace[e_id].values(er.t);
        const Eigen::MatrixXd pen_s = weighted_tr * s_tr.transpose();
        const Eigen::MatrixXd pen_t = weighted_tr * trace_tr.transpose();
        for (int c = 0; c < 3; ++c) {
          const int d = normal_component(c, axis);
          if (d < 0) continue;
          for (int c2 = 0; c2 < 3; ++c2) {
            if (normal_component(c2, axis) != d) continue;
            for (int a = 0; a < dv; ++a)
              system.row(row_ids[c * dv + a]).segment(s_col[c2], n_s) += pen_s.row(a);
          }
          const int t_col = layout.offset(field::kStokesStressTrace, e_id, d);
          for (int a = 0; a < dv; ++a)
            system.row(row_ids[c * dv + a]).segment(t_col, n_t) -= pen_t.row(a);
        }
      }
    }
  }

  // Velocity-trace rows per edge.
  for (std::size_t i = 0; i < plan.entities.edges.size(); ++i) {
    if (plan.entities.roles[i] == EdgeRole::NoRow) continue;
    const Edge& edge = mesh.edge(plan.entities.edges[i]);
    const int axis = edge_axis(edge);
    const EdgeRule er = edge_rule(line, edge);
    const Eigen::MatrixXd tests = edge_tests.values(er.t);
    const auto weighted = (tests * er.weights.asDiagonal()).eval();
    const int kp1 = edge_tests.size();

    std::vector<int> row_ids(2 * kp1);
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < kp1; ++a)
        row_ids[c * kp1 + a] = system.add_row({equation::kStokesVelocityTrace, edge.id});

    for (int nb : edge.neighbors) {
      if (nb < 0 || !active[nb]) continue;
      const Element& el = mesh.element(nb);
      const double sign = outward_sign(mesh, nb, edge.id);
      const Eigen::MatrixXd u_tr = spaces.velocity[nb].values(er.points);
      const Eigen::MatrixXd u_term = sign * (weighted * u_tr.transpose());
      const int u0 = layout.offset(field::kStokesVelocity, nb, 0);
      const int u1 = layout.offset(field::kStokesVelocity, nb, 1);
      for (int a = 0; a < kp1; ++a) {
        system.row(row_ids[a]).segment(u0, n_u) += u_term.row(a);
        system.row(row_ids[kp1 + a]).segment(u1, n_u) += u_term.row(a);
      }

      if (cfg.eta > 0) {
        const auto weighted_pen = (cfg.eta * el.diameter * weighted).eval();
        const Eigen::MatrixXd s_tr = spaces.stress[nb].values(er.points);
        const Eigen::MatrixXd trace_tr = spaces.stress_trace[edge.id].values(er.t);
        const Eigen::MatrixXd pen_s = weighted_pen * s_tr.transpose();
        const Eigen::MatrixXd pen_t = weighted_pen * trace_tr.transpose();
        std::array<int, 3> s_col;
        for (int c = 0; c < 3; ++c) s_col[c] = layout.offset(field::kStokesStress, nb, c);
        for (int c2 = 0; c2 < 3; ++c2) {
          const int d = normal_component(c2, axis);
          if (d < 0) continue;
          for (int a = 0; a < kp1; ++a)
            system.row(row_ids[d * kp1 + a]).segment(s_col[c2], n_s) -= pen_s.row(a);
        }
        for (int c = 0; c < 2; ++c) {
          const int t_col = layout.offset(field::kStokesStressTrace, edge.id, c);
          for (int a = 0; a < kp1; ++a)
            system.row(row_ids[c * kp1 + a]).segment(t_col, n_t) += pen_t.row(a);
        }
      }

      if (plan.entities.roles[i] == EdgeRole::DataRow) {
        Eigen::MatrixXd g_vals(er.size(), 2);
        for (int q = 0; q < er.size(); ++q) {
          const Vec2 g = plan.boundary(er.points.col(q));
          g_vals(q, 0) = g[0];
          g_vals(q, 1) = g[1];
        }
        const Eigen::MatrixXd rhs = sign * (weighted * g_vals);
        for (int c = 0; c < 2; ++c)
          for (int a = 0; a < kp1; ++a) system.rhs(row_ids[c * kp1 + a]) += rhs(a, c);
      }
    }
  }

  // Momentum rows per element: -(sigma, eps(v)) + (sigmahat n, v) = -(f, v),
  // with the Brinkman drag term when an inverse permeability is set.
  for (int el_id : plan.entities.elements) {
    const Element& el = mesh.element(el_id);
    const RectRule rule = tensor_rect(line, el);
    const ElementPolyBasis tests(k + 1, el);
    const int dq = tests.size();
    const Eigen::MatrixXd t_vals = tests.values(rule.points);
    Eigen::MatrixXd t_dx, t_dy;
    tests.gradients(rule.points, t_dx, t_dy);
    const auto weighted = (t_vals * rule.weights.asDiagonal()).eval();

    const Eigen::MatrixXd s_vals = spaces.stress[el_id].values(rule.points);
    const Eigen::MatrixXd strain_x =
        t_dx * rule.weights.asDiagonal() * s_vals.transpose();
    const Eigen::MatrixXd strain_y =
        t_dy * rule.weights.asDiagonal() * s_vals.transpose();

    Eigen::MatrixXd f_vals(rule.size(), 2);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 f = plan.source(rule.points.col(q));
      f_vals(q, 0) = f[0];
      f_vals(q, 1) = f[1];
    }
    const Eigen::MatrixXd rhs = weighted * f_vals;

    std::array<int, 3> s_col;
    for (int c = 0; c < 3; ++c) s_col[c] = layout.offset(field::kStokesStress, el_id, c);
    const int u0 = layout.offset(field::kStokesVelocity, el_id, 0);
    const int u1 = layout.offset(field::kStokesVelocity, el_id, 1);

    Eigen::MatrixXd gram_u;
    if (with_kappa) {
      const Eigen::MatrixXd u_vals = spaces.velocity[el_id].values(rule.points);
      gram_u = weighted * u_vals.transpose();
    }

    std::vector<int> row_ids(2 * dq);
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < dq; ++a) {
        const int r = system.add_row({equation::kStokesMomentum, el_id});
        row_ids[c * dq + a] = r;
        auto row = system.row(r);
        if (c == 0) {
          row.segment(s_col[0], n_s) -= strain_x.row(a);
          row.segment(s_col[1], n_s) -= strain_y.row(a);
        } else {
          row.segment(s_col[1], n_s) -= strain_x.row(a);
          row.segment(s_col[2], n_s) -= strain_y.row(a);
        }
        if (with_kappa) {
          row.segment(u0, n_u) -= plan.nu * plan.inv_kappa(c, 0) * gram_u.row(a);
          row.segment(u1, n_u) -= plan.nu * plan.inv_kappa(c, 1) * gram_u.row(a);
        }
        system.rhs(r) = -rhs(a, c);
      }

    for (int e_id : el.edge_ids) {
      const Edge& edge = mesh.edge(e_id);
      const double sign = outward_sign(mesh, el_id, e_id);
      const EdgeRule er = edge_rule(line, edge);
      const Eigen::MatrixXd t_tr = tests.values(er.points);
      const Eigen::MatrixXd trace_tr = spaces.stress_trace[e_id].values(er.t);
      const Eigen::MatrixXd coupling =
          sign * (t_tr * er.weights.asDiagonal() * trace_tr.transpose());
      for (int c = 0; c < 2; ++c) {
        const int t_col = layout.offset(field::kStokesStressTrace, e_id, c);
        for (int a = 0; a < dq; ++a)
          system.row(row_ids[c * dq + a]).segment(t_col, n_t) += coupling.row(a);
      }
    }
  }

  // One row pinning the mean stress trace over the block.
  if (cfg.mean_trace_row) {
    const int r = system.add_row({equation::kStokesMeanTrace, 0});
    auto row = system.row(r);
    for (int el_id : plan.entities.elements) {
      const Element& el = mesh.element(el_id);
      const RectRule rule = tensor_rect(line, el);
      const Eigen::MatrixXd s_vals = spaces.stress[el_id].values(rule.points);
      const Eigen::VectorXd integrals = s_vals * rule.weights;
      row.segment(layout.offset(field::kStokesStress, el_id, 0), n_s) +=
          integrals.transpose();
      row.segment(layout.offset(field::kStokesStress, el_id, 2), n_s) +=
          integrals.transpose();
    }
  }
}

}  // namespace detail

namespace {

StokesAssembly assemble_stokes_core(const Mesh& mesh, double nu, const Mat2& inv_kappa,
                                    const VectorFn& source, const VectorFn& boundary,
                                    const StokesSchemeConfig& config) {
  detail::StokesBlockPlan plan =
      detail::plan_stokes_block(mesh, nu, inv_kappa, source, boundary, config);
  ColumnLayout layout(detail::stokes_layout_blocks(plan));
  StokesSpaces spaces = detail::make_stokes_spaces(plan);

  StokesAssembly out{DenseSystem(layout.dof()), std::move(layout), {}, config};
  out.system.reserve_rows(detail::stokes_row_count(plan));
  detail::assemble_stokes_rows(plan, spaces, out.layout, out.system);
  out.spaces = std::move(spaces);
  return out;
}

}  // namespace

StokesAssembly assemble_hdpg_stokes(const Mesh& mesh, const StokesProblem& problem,
                                    const StokesSchemeConfig& config) {
  return assemble_stokes_core(mesh, problem.nu, Mat2::Zero(), problem.source,
                              problem.boundary, config);
}

StokesAssembly assemble_brinkman(const Mesh& mesh, const BrinkmanProblem& problem,
                                 const StokesSchemeConfig& config) {
  return assemble_stokes_core(mesh, problem.nu, problem.inv_kappa, problem.source,
                              problem.boundary, config);
}

std::vector<SymTensor> strain_of_vector_features(const ElementFeatureSpace& space,
                                                 const Vec2& x) {
  const Eigen::MatrixX2d g = space.gradients(x);
  std::vector<SymTensor> out;
  out.reserve(2 * space.size());
  for (int i = 0; i < space.size(); ++i)
    out.push_back({g(i, 0), 0.5 * g(i, 1), 0.0});
  for (int i = 0; i < space.size(); ++i)
    out.push_back({0.0, 0.5 * g(i, 0), g(i, 1)});
  return out;
}

StokesSolution::StokesSolution(const Mesh& mesh, const StokesAssembly& assembly,
                               Eigen::VectorXd coefficients)
    : StokesSolution(mesh, assembly.layout, assembly.spaces, assembly.config,
                     std::move(coefficients)) {}

StokesSolution::StokesSolution(const Mesh& mesh, const ColumnLayout& layout,
                               const StokesSpaces& spaces,
                               const StokesSchemeConfig& config,
                               Eigen::VectorXd coefficients)
    : mesh_(&mesh),
      layout_(&layout),
      spaces_(&spaces),
      config_(config),
      x_(std::move(coefficients)) {
  if (x_.size() != layout.dof())
    fail(ErrorCode::Config, "coefficient vector length does not match layout");
}

Vec2 StokesSolution::velocity(int element, const Vec2& x) const {
  const int n_u = config_.resolved_n_u();
  const Eigen::VectorXd vals = spaces_->velocity[element].values(x);
  const int u0 = layout_->offset(field::kStokesVelocity, element, 0);
  const int u1 = layout_->offset(field::kStokesVelocity, element, 1);
  return {vals.dot(x_.segment(u0, n_u)), vals.dot(x_.segment(u1, n_u))};
}

SymTensor StokesSolution::stress(int element, const Vec2& x) const {
  const int n_s = config_.resolved_n_sigma();
  const Eigen::VectorXd vals = spaces_->stress[element].values(x);
  SymTensor s;
  s.xx = vals.dot(x_.segment(layout_->offset(field::kStokesStress, element, 0), n_s));
  s.xy = vals.dot(x_.segment(layout_->offset(field::kStokesStress, element, 1), n_s));
  s.yy = vals.dot(x_.segment(layout_->offset(field::kStokesStress, element, 2), n_s));
  return s;
}

double StokesSolution::pressure(int element, const Vec2& x) const {
  return -0.5 * stress(element, x).trace();
}

}  // namespace rfhdg
