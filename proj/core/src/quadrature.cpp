#include "rfhdg/quadrature.hpp"

#include <cmath>

namespace rfhdg {

LineRule gauss_line(int n) {
  if (n < 1) fail(ErrorCode::Config, "quadrature rule needs at least one point");

  // Roots of the Legendre polynomial P_n on [-1, 1] by Newton iteration,
  // then mapped to [0, 1]. Symmetric pairs are filled from one half.
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);  // descending x -> ascending point
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

RectRule tensor_rect(const LineRule& rule, const Element& element) {
  if (element.area() <= 0) fail(ErrorCode::Config, "element has non-positive area");
  const int n = rule.size();
  RectRule out;
  out.points.resize(2, n * n);
  out.weights.resize(n * n);
  const Domain& b = element.bounds;
  const double dx = b.width(), dy = b.height();
  int q = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i, ++q) {
      out.points.col(q) = Vec2(b.x_min + dx * rule.points[i], b.y_min + dy * rule.points[j]);
      out.weights[q] = rule.weights[i] * rule.weights[j] * dx * dy;
    }
  }
  return out;
}

EdgeRule edge_rule(const LineRule& rule, const Edge& edge) {
  if (edge.length <= 0) fail(ErrorCode::Config, "edge has non-positive length");
  const int n = rule.size();
  EdgeRule out;
  out.points.resize(2, n);
  out.weights = rule.weights * edge.length;
  out.t = rule.points;
  for (int i = 0; i < n; ++i) out.points.col(i) = edge.point(rule.points[i]);
  return out;
}

}  // namespace rfhdg
