#pragma once

#include "rfhdg/feature_space.hpp"
#include "rfhdg/poly_basis.hpp"
#include "rfhdg/problems.hpp"
#include "rfhdg/system.hpp"

namespace rfhdg {

struct StokesSchemeConfig {
  int test_degree = 4;  // k; tensor and edge tests at k, vector tests at k+1
  // Neuron counts; 0 keeps the dimension-matched defaults
  // N_sigma = dim P_k, N_sigmahat = dim P_k(e), N_u = dim P_{k+1}.
  int n_sigma = 0, n_sigmahat = 0, n_u = 0;
  double eta = 0;
  double half_width = 0.9;
  std::uint64_t seed = 1;
  int quad_points = 0;  // 0 -> test_degree + 5
  bool mean_trace_row = true;

  int resolved_n_sigma() const {
    return n_sigma > 0 ? n_sigma : (test_degree + 1) * (test_degree + 2) / 2;
  }
  int resolved_n_sigmahat() const { return n_sigmahat > 0 ? n_sigmahat : test_degree + 1; }
  int resolved_n_u() const {
    return n_u > 0 ? n_u : (test_degree + 2) * (test_degree + 3) / 2;
  }
  int resolved_quad() const { return quad_points > 0 ? quad_points : test_degree + 5; }
};

/// Stress is stored as 3 shared-feature components (xx, xy, yy) per element;
/// the edge trace holds the 2 components of sigma.n_e per edge.
struct StokesSpaces {
  std::vector<ElementFeatureSpace> stress;
  std::vector<ElementFeatureSpace> velocity;
  std::vector<EdgeFeatureSpace> stress_trace;
};

namespace field {
inline constexpr const char* kStokesStress = "stokes.sigma";
inline constexpr const char* kStokesVelocity = "stokes.u";
inline constexpr const char* kStokesStressTrace = "stokes.sigmahat";
}  // namespace field

namespace equation {
inline constexpr const char* kStokesConstitutive = "stokes.constitutive";
inline constexpr const char* kStokesVelocityTrace = "stokes.velocity_trace";
inline constexpr const char* kStokesMomentum = "stokes.momentum";
inline constexpr const char* kStokesMeanTrace = "stokes.mean_trace";
}  // namespace equation

struct StokesAssembly {
  DenseSystem system;
  ColumnLayout layout;
  StokesSpaces spaces;
  StokesSchemeConfig config;
};

StokesAssembly assemble_hdpg_stokes(const Mesh& mesh, const StokesProblem& problem,
                                    const StokesSchemeConfig& config);

/// Same scheme with the extra volume term -nu (kappa^{-1} u, v) in the
/// momentum rows; a zero inverse permeability reproduces the Stokes system
/// exactly.
StokesAssembly assemble_brinkman(const Mesh& mesh, const BrinkmanProblem& problem,
                                 const StokesSchemeConfig& config);

/// Symmetric gradients of the element velocity features at x, one per
/// (component, neuron) pair: member (c, i) is eps(phi_i e_c).
std::vector<SymTensor> strain_of_vector_features(const ElementFeatureSpace& space,
                                                 const Vec2& x);

class StokesSolution {
public:
  StokesSolution(const Mesh& mesh, const StokesAssembly& assembly,
                 Eigen::VectorXd coefficients);
  StokesSolution(const Mesh& mesh, const ColumnLayout& layout,
                 const StokesSpaces& spaces, const StokesSchemeConfig& config,
                 Eigen::VectorXd coefficients);

  Vec2 velocity(int element, const Vec2& x) const;
  SymTensor stress(int element, const Vec2& x) const;
  /// Post-processed pressure -tr(sigma)/2.
  double pressure(int element, const Vec2& x) const;

  const Eigen::VectorXd& coefficients() const { return x_; }

private:
  const Mesh* mesh_;
  const ColumnLayout* layout_;
  const StokesSpaces* spaces_;
  StokesSchemeConfig config_;
  Eigen::VectorXd x_;
};

}  // namespace rfhdg
