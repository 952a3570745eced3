#include "rfhdg/poly_basis.hpp"

#include <cmath>

namespace rfhdg {

namespace {

// Legendre polynomials P_0..P_n and derivatives at u in [-1, 1].
void legendre_all(int n, double u, Eigen::VectorXd& p, Eigen::VectorXd& dp) {
  p.resize(n + 1);
  dp.resize(n + 1);
  p[0] = 1.0;
  dp[0] = 0.0;
  if (n >= 1) {
    p[1] = u;
    dp[1] = 1.0;
  }
  for (int k = 1; k < n; ++k) {
    p[k + 1] = ((2 * k + 1) * u * p[k] - k * p[k - 1]) / (k + 1);
    dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k];
  }
}

// Orthonormal shifted Legendre on [0, 1]: q_k(s) = sqrt(2k+1) P_k(2s-1).
void shifted_orthonormal(int n, double s, Eigen::VectorXd& q, Eigen::VectorXd& dq) {
  legendre_all(n, 2.0 * s - 1.0, q, dq);
  for (int k = 0; k <= n; ++k) {
    const double c = std::sqrt(2.0 * k + 1.0);
    q[k] *= c;
    dq[k] *= 2.0 * c;  // chain rule for s -> 2s-1
  }
}

}  // namespace

ElementPolyBasis::ElementPolyBasis(int degree, const Element& element)
    : degree_(degree), bounds_(element.bounds) {
  if (degree < 0) fail(ErrorCode::Config, "polynomial degree must be non-negative");
}

Eigen::VectorXd ElementPolyBasis::values(const Vec2& x) const {
  Eigen::Matrix2Xd pts(2, 1);
  pts.col(0) = x;
  return values(pts).col(0);
}

Eigen::MatrixX2d ElementPolyBasis::gradients(const Vec2& x) const {
  Eigen::Matrix2Xd pts(2, 1);
  pts.col(0) = x;
  Eigen::MatrixXd dx, dy;
  gradients(pts, dx, dy);
  Eigen::MatrixX2d g(size(), 2);
  g.col(0) = dx.col(0);
  g.col(1) = dy.col(0);
  return g;
}

Eigen::MatrixXd ElementPolyBasis::values(const Eigen::Matrix2Xd& points) const {
  const int q_count = static_cast<int>(points.cols());
  Eigen::MatrixXd out(size(), q_count);
  Eigen::VectorXd qx, dqx, qy, dqy;
  for (int q = 0; q < q_count; ++q) {
    const double sx = (points(0, q) - bounds_.x_min) / bounds_.width();
    const double sy = (points(1, q) - bounds_.y_min) / bounds_.height();
    shifted_orthonormal(degree_, sx, qx, dqx);
    shifted_orthonormal(degree_, sy, qy, dqy);
    int m = 0;
    for (int d = 0; d <= degree_; ++d)
      for (int a = d; a >= 0; --a, ++m) out(m, q) = qx[a] * qy[d - a];
  }
  return out;
}

void ElementPolyBasis::gradients(const Eigen::Matrix2Xd& points, Eigen::MatrixXd& dx,
                                 Eigen::MatrixXd& dy) const {
  const int q_count = static_cast<int>(points.cols());
  dx.resize(size(), q_count);
  dy.resize(size(), q_count);
  const double inv_w = 1.0 / bounds_.width();
  const double inv_h = 1.0 / bounds_.height();
  Eigen::VectorXd qx, dqx, qy, dqy;
  for (int q = 0; q < q_count; ++q) {
    const double sx = (points(0, q) - bounds_.x_min) * inv_w;
    const double sy = (points(1, q) - bounds_.y_min) * inv_h;
    shifted_orthonormal(degree_, sx, qx, dqx);
    shifted_orthonormal(degree_, sy, qy, dqy);
    int m = 0;
    for (int d = 0; d <= degree_; ++d)
      for (int a = d; a >= 0; --a, ++m) {
        dx(m, q) = dqx[a] * qy[d - a] * inv_w;
        dy(m, q) = qx[a] * dqy[d - a] * inv_h;
      }
  }
}

Eigen::VectorXd EdgePolyBasis::values(double t) const {
  Eigen::VectorXd q, dq;
  shifted_orthonormal(degree_, t, q, dq);
  return q;
}

Eigen::MatrixXd EdgePolyBasis::values(const Eigen::VectorXd& ts) const {
  Eigen::MatrixXd out(size(), ts.size());
  for (Eigen::Index i = 0; i < ts.size(); ++i) out.col(i) = values(ts[i]);
  return out;
}

SymTensor SymTensorPolyBasis::value(int member, const Vec2& x) const {
  const double v = scalar_.values(x)[scalar_index(member)];
  return place(component(member), v);
}

Vec2 SymTensorPolyBasis::divergence(int member, const Vec2& x) const {
  const Eigen::MatrixX2d g = scalar_.gradients(x);
  const int j = scalar_index(member);
  const double gx = g(j, 0), gy = g(j, 1);
  switch (component(member)) {
    case XX: return {gx, 0};
    case XY: return {gy, gx};
    default: return {0, gy};
  }
}

}  // namespace rfhdg
