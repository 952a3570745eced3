#include "rfhdg/coupled.hpp"

#include <cmath>

#include "darcy_internal.hpp"
#include "stokes_internal.hpp"

namespace rfhdg {

namespace {

// Fixed interface frame for a horizontal divider with Stokes above: n is the
// Stokes-outward normal (0, -1) and t = (1, 0). The edge's stored global
// normal is (0, 1), so quantities paired with n flip sign.
constexpr double kNormalDotEdgeNormal = -1.0;

struct SamplePlacement {
  std::vector<Vec2> points;
  std::vector<int> edges;
};

SamplePlacement place_samples(const Mesh& mesh, int count) {
  if (count < 1) fail(ErrorCode::Config, "interface needs at least one sampling point");
  if (!mesh.divider_y) fail(ErrorCode::Config, "mesh carries no interface");

  std::vector<int> interface_edges;
  for (const Edge& e : mesh.edges)
    if (e.kind == EdgeKind::Interface) interface_edges.push_back(e.id);
  if (interface_edges.empty()) fail(ErrorCode::Config, "mesh carries no interface edges");

  SamplePlacement out;
  const double y = *mesh.divider_y;
  const double x0 = mesh.domain.x_min;
  const double span = mesh.domain.width();
  for (int i = 1; i <= count; ++i) {
    const Vec2 p(x0 + span * i / (count + 1), y);
    int edge_id = -1;
    for (int e : interface_edges) {
      const Edge& edge = mesh.edge(e);
      if (p[0] >= edge.a[0] - 1e-12 && p[0] <= edge.b[0] + 1e-12) {
        edge_id = e;
        break;
      }
    }
    if (edge_id < 0)
      fail(ErrorCode::Topology, "sampling point does not lie on an interface edge");
    out.points.push_back(p);
    out.edges.push_back(edge_id);
  }
  return out;
}

struct InterfaceOperands {
  // All trial values at one sampling point.
  Eigen::VectorXd stokes_u;   // Stokes element velocity features
  Eigen::VectorXd darcy_u;    // Darcy element velocity features
  Eigen::VectorXd darcy_p;    // Darcy element pressure features
  Eigen::VectorXd trace;      // edge feature values at the point's parameter
  int stokes_element = -1;
  int darcy_element = -1;
};

InterfaceOperands interface_operands(const Mesh& mesh, const CoupledAssembly& assembly,
                                     const Vec2& point, int edge_id) {
  const Edge& edge = mesh.edge(edge_id);
  InterfaceOperands ops;
  // The edge normal is (0, 1): neighbors[1] sits above (Stokes).
  ops.stokes_element = edge.neighbors[1];
  ops.darcy_element = edge.neighbors[0];
  if (ops.stokes_element < 0 || ops.darcy_element < 0)
    fail(ErrorCode::Topology, "interface edge misses a neighbor");

  const double t = (point - edge.a).norm() / edge.length;
  ops.stokes_u = assembly.stokes_spaces.velocity[ops.stokes_element].values(point);
  ops.darcy_u = assembly.darcy_spaces.velocity[ops.darcy_element].values(point);
  ops.darcy_p = assembly.darcy_spaces.pressure[ops.darcy_element].values(point);
  ops.trace = assembly.stokes_spaces.stress_trace[edge_id].values(t);
  return ops;
}

Eigen::VectorXd darcy_flux_values(const CoupledAssembly& assembly, const Mesh& mesh,
                                  const Vec2& point, int edge_id) {
  const Edge& edge = mesh.edge(edge_id);
  const double t = (point - edge.a).norm() / edge.length;
  return assembly.darcy_spaces.flux_trace[edge_id].values(t);
}

}  // namespace

CoupledAssembly assemble_stokes_darcy(const Mesh& mesh, const CoupledProblem& problem,
                                      const StokesSchemeConfig& stokes_config,
                                      const DarcySchemeConfig& darcy_config,
                                      const InterfaceConfig& iface) {
  if (stokes_config.eta != 0 || darcy_config.eta != 0)
    fail(ErrorCode::Config, "coupled assembly runs unstabilized; set eta = 0");
  if (darcy_config.variant != DarcyVariant::Hdpg)
    fail(ErrorCode::Config, "coupled assembly uses the plain flux-trace scheme");
  if (!problem.kappa) fail(ErrorCode::Config, "coupled problem needs a kappa field");

  detail::StokesBlockPlan stokes_plan = detail::plan_stokes_block(
      mesh, problem.stokes.nu, Mat2::Zero(), problem.stokes.source,
      problem.stokes.boundary, stokes_config, Subdomain::Stokes);
  detail::DarcyBlockPlan darcy_plan =
      detail::plan_darcy_block(mesh, problem.darcy, darcy_config, Subdomain::Darcy);

  std::vector<BlockSpec> blocks = detail::stokes_layout_blocks(stokes_plan);
  {
    std::vector<BlockSpec> darcy_blocks = detail::darcy_layout_blocks(darcy_plan);
    blocks.insert(blocks.end(), std::make_move_iterator(darcy_blocks.begin()),
                  std::make_move_iterator(darcy_blocks.end()));
  }

  const SamplePlacement samples = place_samples(mesh, iface.sample_count);

  CoupledAssembly out{DenseSystem(0),
                      ColumnLayout(std::move(blocks)),
                      {},
                      {},
                      stokes_config,
                      darcy_config,
                      problem.law,
                      problem.stokes.nu,
                      problem.kappa,
                      samples.points,
                      samples.edges};
  out.system = DenseSystem(out.layout.dof());
  out.system.reserve_rows(detail::stokes_row_count(stokes_plan) +
                          detail::darcy_row_count(darcy_plan) +
                          3 * iface.sample_count);

  out.stokes_spaces = detail::make_stokes_spaces(stokes_plan);
  out.darcy_spaces = detail::make_darcy_spaces(darcy_plan);

  detail::assemble_stokes_rows(stokes_plan, out.stokes_spaces, out.layout, out.system);
  detail::assemble_darcy_rows(darcy_plan, out.darcy_spaces, out.layout, out.system,
                              nullptr);

  // Collocated interface conditions, one triple of rows per sampling point.
  const int n_su = stokes_config.resolved_n_u();
  const int n_st = stokes_config.resolved_n_sigmahat();
  const int n_du = darcy_config.resolved_n_u();
  const int n_dp = darcy_config.resolved_n_p();
  const int n_df = darcy_config.resolved_n_uhat();

  for (int i = 0; i < iface.sample_count; ++i) {
    const Vec2& p = samples.points[i];
    const int edge_id = samples.edges[i];
    const InterfaceOperands ops = interface_operands(mesh, out, p, edge_id);
    const Eigen::VectorXd flux = darcy_flux_values(out, mesh, p, edge_id);

    const int su_y = out.layout.offset(field::kStokesVelocity, ops.stokes_element, 1);
    const int su_x = out.layout.offset(field::kStokesVelocity, ops.stokes_element, 0);
    const int st_x = out.layout.offset(field::kStokesStressTrace, edge_id, 0);
    const int st_y = out.layout.offset(field::kStokesStressTrace, edge_id, 1);
    const int du_x = out.layout.offset(field::kDarcyVelocity, ops.darcy_element, 0);
    const int dp = out.layout.offset(field::kDarcyPressure, ops.darcy_element, 0);
    const int df = out.layout.offset(field::kDarcyFluxTrace, edge_id, 0);

    // Mass conservation u^S.n = uhat^D.n with n = (0, -1).
    {
      const int r = out.system.add_row({equation::kInterfaceMass, i});
      auto row = out.system.row(r);
      row.segment(su_y, n_su) = -ops.stokes_u.transpose();
      row.segment(df, n_df) = -kNormalDotEdgeNormal * flux.transpose();
    }
    // Normal force balance (sigmahat n).n + p^D = 0.
    {
      const int r = out.system.add_row({equation::kInterfaceNormalForce, i});
      auto row = out.system.row(r);
      row.segment(st_y, n_st) = ops.trace.transpose();
      row.segment(dp, n_dp) = ops.darcy_p.transpose();
    }
    // Tangential slip (sigmahat n).t + nu kappa^{-1} (u.t) = 0.
    {
      const int r = out.system.add_row({equation::kInterfaceTangential, i});
      auto row = out.system.row(r);
      const double drag = out.nu / out.kappa(p);
      row.segment(st_x, n_st) = -ops.trace.transpose();
      row.segment(su_x, n_su) = drag * ops.stokes_u.transpose();
      if (out.law == InterfaceLaw::BJ)
        row.segment(du_x, n_du) = -drag * ops.darcy_u.transpose();
    }
  }
  return out;
}

std::vector<InterfaceResidualTriple> interface_residuals(const Mesh& mesh,
                                                         const CoupledAssembly& assembly,
                                                         const Eigen::VectorXd& x) {
  if (x.size() != assembly.layout.dof())
    fail(ErrorCode::Config, "coefficient vector length does not match layout");
  const int n_su = assembly.stokes_config.resolved_n_u();
  const int n_st = assembly.stokes_config.resolved_n_sigmahat();
  const int n_du = assembly.darcy_config.resolved_n_u();
  const int n_dp = assembly.darcy_config.resolved_n_p();
  const int n_df = assembly.darcy_config.resolved_n_uhat();

  std::vector<InterfaceResidualTriple> out;
  out.reserve(assembly.sample_points.size());
  for (std::size_t i = 0; i < assembly.sample_points.size(); ++i) {
    const Vec2& p = assembly.sample_points[i];
    const int edge_id = assembly.sample_edges[i];
    const InterfaceOperands ops = interface_operands(mesh, assembly, p, edge_id);
    const Eigen::VectorXd flux = darcy_flux_values(assembly, mesh, p, edge_id);

    const auto seg = [&](const char* f, int entity, int comp, int n) {
      return x.segment(assembly.layout.offset(f, entity, comp), n);
    };
    const double us_x = ops.stokes_u.dot(seg(field::kStokesVelocity, ops.stokes_element, 0, n_su));
    const double us_y = ops.stokes_u.dot(seg(field::kStokesVelocity, ops.stokes_element, 1, n_su));
    const double trace_x = ops.trace.dot(seg(field::kStokesStressTrace, edge_id, 0, n_st));
    const double trace_y = ops.trace.dot(seg(field::kStokesStressTrace, edge_id, 1, n_st));
    const double ud_x = ops.darcy_u.dot(seg(field::kDarcyVelocity, ops.darcy_element, 0, n_du));
    const double pd = ops.darcy_p.dot(seg(field::kDarcyPressure, ops.darcy_element, 0, n_dp));
    const double flux_val = flux.dot(seg(field::kDarcyFluxTrace, edge_id, 0, n_df));

    InterfaceResidualTriple triple;
    triple.mass = -us_y - kNormalDotEdgeNormal * flux_val;
    triple.normal_force = trace_y + pd;
    const double drag = assembly.nu / assembly.kappa(p);
    triple.tangential = -trace_x + drag * us_x;
    if (assembly.law == InterfaceLaw::BJ) triple.tangential -= drag * ud_x;
    out.push_back(triple);
  }
  return out;
}

CoupledSolution::CoupledSolution(const Mesh& mesh, const CoupledAssembly& assembly,
                                 Eigen::VectorXd coefficients)
    : stokes_(mesh, assembly.layout, assembly.stokes_spaces, assembly.stokes_config,
              coefficients),
      darcy_(mesh, assembly.layout, assembly.darcy_spaces, assembly.darcy_config,
             nullptr, std::move(coefficients)) {}

}  // namespace rfhdg
