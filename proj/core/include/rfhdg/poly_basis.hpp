#pragma once

#include <Eigen/Core>

#include "rfhdg/mesh.hpp"

namespace rfhdg {

/// 2x2 symmetric tensor stored as its three independent components.
struct SymTensor {
  double xx = 0, xy = 0, yy = 0;

  static SymTensor identity() { return {1, 0, 1}; }
  double trace() const { return xx + yy; }
  SymTensor deviatoric() const {
    const double half_tr = 0.5 * trace();
    return {xx - half_tr, xy, yy - half_tr};
  }
  Vec2 dot(const Vec2& n) const {
    return {xx * n[0] + xy * n[1], xy * n[0] + yy * n[1]};
  }
  /// Frobenius inner product, counting the off-diagonal entry twice.
  double inner(const SymTensor& o) const {
    return xx * o.xx + 2.0 * xy * o.xy + yy * o.yy;
  }
  SymTensor operator-(const SymTensor& o) const {
    return {xx - o.xx, xy - o.xy, yy - o.yy};
  }
  SymTensor operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  double frobenius_sq() const { return inner(*this); }
};

/// Total-degree-k scalar polynomial basis on a rectangle, built from shifted
/// Legendre products so the functions are L2-orthonormal on the unit
/// reference square. Members are ordered degree-major.
class ElementPolyBasis {
public:
  ElementPolyBasis(int degree, const Element& element);

  int degree() const { return degree_; }
  int size() const { return (degree_ + 1) * (degree_ + 2) / 2; }

  Eigen::VectorXd values(const Vec2& x) const;
  Eigen::MatrixX2d gradients(const Vec2& x) const;

  Eigen::MatrixXd values(const Eigen::Matrix2Xd& points) const;
  void gradients(const Eigen::Matrix2Xd& points, Eigen::MatrixXd& dx,
                 Eigen::MatrixXd& dy) const;

private:
  int degree_;
  Domain bounds_;
};

/// Degree-k basis in the edge parameter t, orthonormal on [0, 1].
class EdgePolyBasis {
public:
  explicit EdgePolyBasis(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  Eigen::VectorXd values(double t) const;
  Eigen::MatrixXd values(const Eigen::VectorXd& ts) const;

private:
  int degree_;
};

/// Symmetric 2x2 tensor test functions: each member places one scalar basis
/// function into one of the components xx, xy (=yx), or yy. Members are
/// ordered component-major over the scalar basis.
class SymTensorPolyBasis {
public:
  enum Component { XX = 0, XY = 1, YY = 2 };

  SymTensorPolyBasis(int degree, const Element& element)
      : scalar_(degree, element) {}

  const ElementPolyBasis& scalar() const { return scalar_; }
  int size() const { return 3 * scalar_.size(); }
  Component component(int member) const {
    return static_cast<Component>(member / scalar_.size());
  }
  int scalar_index(int member) const { return member % scalar_.size(); }

  SymTensor value(int member, const Vec2& x) const;
  Vec2 divergence(int member, const Vec2& x) const;

  static SymTensor place(Component c, double v) {
    switch (c) {
      case XX: return {v, 0, 0};
      case XY: return {0, v, 0};
      default: return {0, 0, v};
    }
  }

private:
  ElementPolyBasis scalar_;
};

}  // namespace rfhdg
