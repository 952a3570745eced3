#pragma once

#include "rfhdg/config.hpp"
#include "rfhdg/metrics.hpp"

namespace rfhdg {

/// Darcy problem u = -K grad p, div u = f, p = g on the boundary.
struct DarcyProblem {
  Mat2 permeability = Mat2::Identity();  // K = K^t, positive definite
  ScalarFn source;                       // f
  ScalarFn boundary;                     // g

  ScalarFn exact_p;
  VectorFn exact_grad_p;
  VectorFn exact_u;
  bool has_exact = false;
};

/// Stokes problem in velocity-stress form; pressure is -tr(sigma)/2.
struct StokesProblem {
  double nu = 1.0;
  VectorFn source;    // f
  VectorFn boundary;  // g, with zero net flux through the boundary

  VectorFn exact_u;
  TensorFn exact_sigma;
  ScalarFn exact_p;
  bool has_exact = false;
};

struct BrinkmanProblem {
  double nu = 1.0;
  Mat2 inv_kappa = Mat2::Zero();  // symmetric positive semidefinite
  VectorFn source;
  VectorFn boundary;

  VectorFn exact_u;
  TensorFn exact_sigma;
  ScalarFn exact_p;
  bool has_exact = false;
};

enum class InterfaceLaw { BJS, BJ };

/// Stokes flow above a horizontal interface, Darcy flow below. Boundary data
/// of each subproblem applies on its external boundary only.
struct CoupledProblem {
  StokesProblem stokes;
  DarcyProblem darcy;
  ScalarFn kappa;  // friction coefficient on the interface
  InterfaceLaw law = InterfaceLaw::BJS;
  double alpha = 1.0;
};

/// Anisotropic Darcy flow on the unit square, K = [[10, 2], [2, 100]],
/// p = x(1-x) y(1-y) e^{xy}.
DarcyProblem example1();

/// Oscillatory Darcy flow, p = (1/m) sum_i sin(2^i pi x) sin(2^i pi y), K = I.
DarcyProblem example2(int m);

/// Stokes flow with u = (sin^2(pi x) sin(2 pi y), -sin(2 pi x) sin^2(pi y)),
/// p = cos(pi x) cos(pi y).
StokesProblem example3(double nu);

/// Coupled flow on (0, pi) x (-pi, pi), interface at y = 0, K = alpha I,
/// kappa = 1, Beavers-Joseph law.
CoupledProblem example4(double alpha, double nu);

/// Brinkman flow with a biquartic divergence-free velocity, kappa^{-1} = alpha I.
BrinkmanProblem example5(double alpha);

/// The configurations behind the published benchmark tables, for the CLI
/// reproduction mode. Known ids: "1", "2", "3", "5", "6", "ex3", "ex4", "ex5".
std::vector<RunConfig> preset_run_table(const std::string& table_id);

}  // namespace rfhdg
