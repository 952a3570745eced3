#pragma once

#include <optional>

#include "rfhdg/feature_space.hpp"
#include "rfhdg/problems.hpp"
#include "rfhdg/quadrature.hpp"
#include "rfhdg/system.hpp"

namespace rfhdg {

enum class DarcyVariant { Hdpg, HdpgReduced, HdpgGlobalTrace, Hdg, HdpgFlux2 };

struct DarcySchemeConfig {
  DarcyVariant variant = DarcyVariant::Hdpg;
  int test_degree = 3;  // k; edge and vector tests use k, scalar tests k+1
  // Neuron counts; 0 keeps the dimension-matched defaults
  // N_u = dim [P_k]^2, N_uhat = dim P_k(e), N_p = dim [P_{k+1}]^2.
  int n_u = 0, n_uhat = 0, n_p = 0;
  double eta = 0;  // stabilization weight, scaled by h_K on element boundaries
  double tau = 0;  // second-hybridization weight, scaled by 1/h_K
  double half_width = 0.6;
  std::uint64_t seed = 1;
  int quad_points = 0;  // 0 -> test_degree + 5 per direction

  int resolved_n_u() const {
    return n_u > 0 ? n_u : (test_degree + 1) * (test_degree + 2) / 2;
  }
  int resolved_n_uhat() const { return n_uhat > 0 ? n_uhat : test_degree + 1; }
  int resolved_n_p() const {
    return n_p > 0 ? n_p : (test_degree + 2) * (test_degree + 3) / 2;
  }
  int resolved_quad() const { return quad_points > 0 ? quad_points : test_degree + 5; }
};

/// Per-entity randomized trial spaces of one Darcy discretization. Entries
/// are indexed by mesh entity id; inactive entities stay default-constructed.
struct DarcySpaces {
  std::vector<ElementFeatureSpace> velocity;
  std::vector<ElementFeatureSpace> pressure;
  std::vector<EdgeFeatureSpace> flux_trace;
  std::optional<ElementFeatureSpace> flux_trace_global;
  std::vector<EdgeFeatureSpace> pressure_trace;              // flux2 variant
  std::vector<Eigen::VectorXd> boundary_pressure_trace;      // flux2: projected g
};

namespace field {
inline constexpr const char* kDarcyVelocity = "darcy.u";
inline constexpr const char* kDarcyPressure = "darcy.p";
inline constexpr const char* kDarcyFluxTrace = "darcy.uhat";
inline constexpr const char* kDarcyPressureTrace = "darcy.phat";
}  // namespace field

namespace equation {
inline constexpr const char* kDarcyFluxLaw = "darcy.flux_law";
inline constexpr const char* kDarcyPressureTrace = "darcy.pressure_trace";
inline constexpr const char* kDarcyMass = "darcy.mass";
inline constexpr const char* kDarcyFluxContinuity = "darcy.flux_continuity";
}  // namespace equation

struct DarcyAssembly {
  DenseSystem system;
  ColumnLayout layout;
  DarcySpaces spaces;
  DarcySchemeConfig config;
  /// Per-element map from pressure coefficients to velocity coefficients,
  /// populated by the u-eliminating variants.
  std::vector<Eigen::MatrixXd> elimination;
};

/// Dispatches on config.variant.
DarcyAssembly assemble_darcy(const Mesh& mesh, const DarcyProblem& problem,
                             const DarcySchemeConfig& config);

DarcyAssembly assemble_hdpg_darcy(const Mesh&, const DarcyProblem&,
                                  const DarcySchemeConfig&);
DarcyAssembly assemble_hdpg_darcy_reduced(const Mesh&, const DarcyProblem&,
                                          const DarcySchemeConfig&);
DarcyAssembly assemble_hdpg_darcy_global_trace(const Mesh&, const DarcyProblem&,
                                               const DarcySchemeConfig&);
DarcyAssembly assemble_hdg_darcy(const Mesh&, const DarcyProblem&,
                                 const DarcySchemeConfig&);
DarcyAssembly assemble_hdpg_darcy_flux2(const Mesh&, const DarcyProblem&,
                                        const DarcySchemeConfig&);

/// Pointwise evaluator over a solved coefficient vector. Velocity of the
/// u-eliminating variants is recovered element-wise through the stored
/// elimination maps. The layout and spaces must outlive the evaluator.
class DarcySolution {
public:
  DarcySolution(const Mesh& mesh, const DarcyAssembly& assembly,
                Eigen::VectorXd coefficients);
  DarcySolution(const Mesh& mesh, const ColumnLayout& layout, const DarcySpaces& spaces,
                const DarcySchemeConfig& config,
                const std::vector<Eigen::MatrixXd>* elimination,
                Eigen::VectorXd coefficients);

  double pressure(int element, const Vec2& x) const;
  Vec2 pressure_gradient(int element, const Vec2& x) const;
  Vec2 velocity(int element, const Vec2& x) const;

  const Eigen::VectorXd& coefficients() const { return x_; }

private:
  void check_point(int element, const Vec2& x) const;

  const Mesh* mesh_;
  const ColumnLayout* layout_;
  const DarcySpaces* spaces_;
  DarcySchemeConfig config_;
  Eigen::VectorXd x_;
  std::vector<Eigen::VectorXd> recovered_u_;  // per element, 2 N_u entries
};

}  // namespace rfhdg
