#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "rfhdg/poly_basis.hpp"
#include "rfhdg/quadrature.hpp"

namespace rfhdg {

// Numeric fields are evaluated element-wise; exact fields are global closures.
using ElementScalarFn = std::function<double(const Element&, const Vec2&)>;
using ElementVectorFn = std::function<Vec2(const Element&, const Vec2&)>;
using ElementTensorFn = std::function<SymTensor(const Element&, const Vec2&)>;
using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;
using TensorFn = std::function<SymTensor(const Vec2&)>;

struct NormOptions {
  int quad_points = 8;
  std::optional<Subdomain> filter;  // restrict to one subdomain's elements
};

/// |num - exact|_L2 / |exact|_L2 over the mesh (Frobenius pointwise norm for
/// vectors and tensors). Throws a normalization error when |exact| = 0.
double relative_l2(const Mesh& mesh, const ElementScalarFn& num, const ScalarFn& exact,
                   const NormOptions& opts);
double relative_l2(const Mesh& mesh, const ElementVectorFn& num, const VectorFn& exact,
                   const NormOptions& opts);
double relative_l2(const Mesh& mesh, const ElementTensorFn& num, const TensorFn& exact,
                   const NormOptions& opts);

/// Relative H1 seminorm from gradient evaluators.
double relative_semi_h1(const Mesh& mesh, const ElementVectorFn& num_grad,
                        const VectorFn& exact_grad, const NormOptions& opts);

double relative_l1(const Mesh& mesh, const ElementScalarFn& num, const ScalarFn& exact,
                   const NormOptions& opts);

/// Per-run error summary; keys are field names such as "p", "u", "sigma".
struct ErrorReport {
  std::map<std::string, double> e0;    // relative L2
  std::map<std::string, double> e1;    // relative semi-H1
  std::map<std::string, double> eps1;  // relative L1
  int dof = 0;
  int rows = 0;
  double residual_norm = 0;
  double runtime_ms = 0;
};

/// Entry-wise arithmetic mean; metric maps must agree across reports.
ErrorReport mean_report(const std::vector<ErrorReport>& reports);

}  // namespace rfhdg
