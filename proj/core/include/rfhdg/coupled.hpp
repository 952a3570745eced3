#pragma once

#include "rfhdg/darcy.hpp"
#include "rfhdg/stokes.hpp"

namespace rfhdg {

/// Collocation points on the interface: `sample_count` equispaced points in
/// the open interval of the dividing line, endpoints excluded.
struct InterfaceConfig {
  int sample_count = 30;  // M
};

namespace equation {
inline constexpr const char* kInterfaceMass = "interface.mass";
inline constexpr const char* kInterfaceNormalForce = "interface.normal_force";
inline constexpr const char* kInterfaceTangential = "interface.tangential";
}  // namespace equation

struct CoupledAssembly {
  DenseSystem system;
  ColumnLayout layout;
  StokesSpaces stokes_spaces;
  DarcySpaces darcy_spaces;
  StokesSchemeConfig stokes_config;
  DarcySchemeConfig darcy_config;
  InterfaceLaw law = InterfaceLaw::BJS;
  double nu = 1.0;
  ScalarFn kappa;
  std::vector<Vec2> sample_points;
  std::vector<int> sample_edges;  // interface edge holding each point
};

/// Block-diagonal Stokes (above) and Darcy (below) schemes glued by 3M
/// collocation rows for the mass, normal-force, and tangential-slip
/// conditions. Both schemes run unstabilized (eta = 0); boundary data applies
/// only on the external boundaries of each subdomain.
CoupledAssembly assemble_stokes_darcy(const Mesh& mesh, const CoupledProblem& problem,
                                      const StokesSchemeConfig& stokes_config,
                                      const DarcySchemeConfig& darcy_config,
                                      const InterfaceConfig& iface);

struct InterfaceResidualTriple {
  double mass = 0;
  double normal_force = 0;
  double tangential = 0;
};

/// Evaluates the three discrete interface conditions at each sampling point
/// for a solved coefficient vector.
std::vector<InterfaceResidualTriple> interface_residuals(const Mesh& mesh,
                                                         const CoupledAssembly& assembly,
                                                         const Eigen::VectorXd& x);

/// Paired evaluators over the combined coefficient vector.
class CoupledSolution {
public:
  CoupledSolution(const Mesh& mesh, const CoupledAssembly& assembly,
                  Eigen::VectorXd coefficients);

  const StokesSolution& stokes() const { return stokes_; }
  const DarcySolution& darcy() const { return darcy_; }

private:
  StokesSolution stokes_;
  DarcySolution darcy_;
};

}  // namespace rfhdg
