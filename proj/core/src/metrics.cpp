#include "rfhdg/metrics.hpp"

#include <cmath>

namespace rfhdg {

namespace {

bool selected(const Element& el, const NormOptions& opts) {
  return !opts.filter || el.subdomain == *opts.filter;
}

template <typename NumFn, typename ExactFn, typename SqFn>
double relative_norm(const Mesh& mesh, const NumFn& num, const ExactFn& exact,
                     const NormOptions& opts, const SqFn& contribution) {
  const LineRule line = gauss_line(opts.quad_points);
  double diff = 0, ref = 0;
  for (const Element& el : mesh.elements) {
    if (!selected(el, opts)) continue;
    const RectRule rule = tensor_rect(line, el);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = rule.points.col(q);
      contribution(num(el, x), exact(x), rule.weights[q], diff, ref);
    }
  }
  if (!(ref > 0)) fail(ErrorCode::Normalization, "exact field has zero norm");
  return diff / ref;
}

}  // namespace

double relative_l2(const Mesh& mesh, const ElementScalarFn& num, const ScalarFn& exact,
                   const NormOptions& opts) {
  const double r = relative_norm(
      mesh, num, exact, opts,
      [](double a, double b, double w, double& diff, double& ref) {
        diff += w * (a - b) * (a - b);
        ref += w * b * b;
      });
  return std::sqrt(r);
}

double relative_l2(const Mesh& mesh, const ElementVectorFn& num, const VectorFn& exact,
                   const NormOptions& opts) {
  const double r = relative_norm(
      mesh, num, exact, opts,
      [](const Vec2& a, const Vec2& b, double w, double& diff, double& ref) {
        diff += w * (a - b).squaredNorm();
        ref += w * b.squaredNorm();
      });
  return std::sqrt(r);
}

double relative_l2(const Mesh& mesh, const ElementTensorFn& num, const TensorFn& exact,
                   const NormOptions& opts) {
  const double r = relative_norm(
      mesh, num, exact, opts,
      [](const SymTensor& a, const SymTensor& b, double w, double& diff, double& ref) {
        diff += w * (a - b).frobenius_sq();
        ref += w * b.frobenius_sq();
      });
  return std::sqrt(r);
}

double relative_semi_h1(const Mesh& mesh, const ElementVectorFn& num_grad,
                        const VectorFn& exact_grad, const NormOptions& opts) {
  return relative_l2(mesh, num_grad, exact_grad, opts);
}

double relative_l1(const Mesh& mesh, const ElementScalarFn& num, const ScalarFn& exact,
                   const NormOptions& opts) {
  return relative_norm(mesh, num, exact, opts,
                       [](double a, double b, double w, double& diff, double& ref) {
                         diff += w * std::abs(a - b);
                         ref += w * std::abs(b);
                       });
}

ErrorReport mean_report(const std::vector<ErrorReport>& reports) {
  if (reports.empty()) fail(ErrorCode::Config, "cannot average zero reports");
  ErrorReport mean = reports.front();
  auto accumulate = [&](auto member) {
    for (auto& [key, value] : mean.*member) {
      value = 0;
      for (const ErrorReport& r : reports) value += (r.*member).at(key);
      value /= static_cast<double>(reports.size());
    }
  };
  accumulate(&ErrorReport::e0);
  accumulate(&ErrorReport::e1);
  accumulate(&ErrorReport::eps1);
  mean.residual_norm = 0;
  mean.runtime_ms = 0;
  for (const ErrorReport& r : reports) {
    mean.residual_norm += r.residual_norm;
    mean.runtime_ms += r.runtime_ms;
  }
  mean.residual_norm /= static_cast<double>(reports.size());
  mean.runtime_ms /= static_cast<double>(reports.size());
  return mean;
}

}  // namespace rfhdg
