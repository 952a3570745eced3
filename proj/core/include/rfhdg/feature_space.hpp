#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "rfhdg/mesh.hpp"

namespace rfhdg {

/// Sampling parameters for one randomized feature space: every hidden weight
/// and bias is drawn i.i.d. from U(-half_width, half_width) and frozen.
struct FeatureSpaceConfig {
  int neurons = 1;
  double half_width = 1.0;  // r
  std::uint64_t seed = 0;
};

enum class EntityKind : std::uint64_t { Element = 1, Edge = 2, Global = 3 };

/// tanh feature basis on 2D points: phi_i(x) = tanh(W_i . x + b_i).
/// Inputs are global physical coordinates.
class ElementFeatureSpace {
public:
  ElementFeatureSpace() = default;
  ElementFeatureSpace(Eigen::MatrixX2d weights, Eigen::VectorXd biases);

  int size() const { return static_cast<int>(biases_.size()); }
  const Eigen::MatrixX2d& weights() const { return weights_; }
  const Eigen::VectorXd& biases() const { return biases_; }

  Eigen::VectorXd values(const Vec2& x) const;
  /// Row i = (1 - tanh^2(W_i . x + b_i)) W_i.
  Eigen::MatrixX2d gradients(const Vec2& x) const;

  /// Batched evaluation, one column per point.
  Eigen::MatrixXd values(const Eigen::Matrix2Xd& points) const;
  void gradients(const Eigen::Matrix2Xd& points, Eigen::MatrixXd& dx,
                 Eigen::MatrixXd& dy) const;

private:
  Eigen::MatrixX2d weights_;
  Eigen::VectorXd biases_;
};

/// tanh feature basis on an edge parameter t in [0, 1] with the flipped
/// second branch: phi_i(t) = tanh(w_i t + b_i) + tanh(w_{N-1-i} (1-t) + b_{N-1-i}),
/// so that phi(1-t) is phi(t) with the components reversed.
class EdgeFeatureSpace {
public:
  EdgeFeatureSpace() = default;
  EdgeFeatureSpace(Eigen::VectorXd weights, Eigen::VectorXd biases);

  int size() const { return static_cast<int>(biases_.size()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& biases() const { return biases_; }

  Eigen::VectorXd values(double t) const;
  Eigen::MatrixXd values(const Eigen::VectorXd& ts) const;

private:
  Eigen::VectorXd weights_;
  Eigen::VectorXd biases_;
};

/// Deterministic function of (config.seed, entity_index): the same inputs
/// reproduce bit-identical spaces, distinct entities get independent draws.
ElementFeatureSpace init_element_space(const FeatureSpaceConfig& config,
                                       std::uint64_t entity_index);

EdgeFeatureSpace init_edge_space(const FeatureSpaceConfig& config,
                                 std::uint64_t entity_index);

/// One feature space over the whole domain, evaluated only at edge points.
ElementFeatureSpace init_global_trace_space(const FeatureSpaceConfig& config,
                                            const Domain& domain);

/// Independent sub-seed for a named field sharing one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view field_tag);

}  // namespace rfhdg
