#include "rfhdg/feature_space.hpp"

#include <random>

namespace rfhdg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform draws in (-r, r) from a stream keyed by (seed, kind, index).
/// Doubles come from the top 53 bits of the generator output so the values
/// do not depend on the standard library's distribution implementation.
class UniformStream {
public:
  UniformStream(std::uint64_t seed, EntityKind kind, std::uint64_t index,
                double half_width)
      : half_width_(half_width) {
    std::uint64_t state = splitmix64(seed);
    state = splitmix64(state ^ static_cast<std::uint64_t>(kind));
    state = splitmix64(state ^ index);
    gen_.seed(state);
  }

  double next() {
    const double u = (gen_() >> 11) * 0x1.0p-53;  // [0, 1)
    return half_width_ * (2.0 * u - 1.0);
  }

private:
  std::mt19937_64 gen_;
  double half_width_;
};

void check_config(const FeatureSpaceConfig& config) {
  if (config.neurons < 1) fail(ErrorCode::Config, "feature space needs at least one neuron");
  if (!(config.half_width > 0)) fail(ErrorCode::Config, "feature half-width must be positive");
}

}  // namespace

ElementFeatureSpace::ElementFeatureSpace(Eigen::MatrixX2d weights,
                                         Eigen::VectorXd biases)
    : weights_(std::move(weights)), biases_(std::move(biases)) {
  if (weights_.rows() != biases_.size())
    fail(ErrorCode::Config, "weight and bias counts differ");
}

Eigen::VectorXd ElementFeatureSpace::values(const Vec2& x) const {
  return ((weights_ * x + biases_).array().tanh()).matrix();
}

Eigen::MatrixX2d ElementFeatureSpace::gradients(const Vec2& x) const {
  const Eigen::ArrayXd t = (weights_ * x + biases_).array().tanh();
  const Eigen::ArrayXd s = 1.0 - t * t;
  Eigen::MatrixX2d g(size(), 2);
  g.col(0) = (s * weights_.col(0).array()).matrix();
  g.col(1) = (s * weights_.col(1).array()).matrix();
  return g;
}

Eigen::MatrixXd ElementFeatureSpace::values(const Eigen::Matrix2Xd& points) const {
  Eigen::MatrixXd z = weights_ * points;
  z.colwise() += biases_;
  return z.array().tanh().matrix();
}

void ElementFeatureSpace::gradients(const Eigen::Matrix2Xd& points,
                                    Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const {
  Eigen::MatrixXd z = weights_ * points;
  z.colwise() += biases_;
  const Eigen::ArrayXXd s = 1.0 - z.array().tanh().square();
  dx = (s.colwise() * weights_.col(0).array()).matrix();
  dy = (s.colwise() * weights_.col(1).array()).matrix();
}

EdgeFeatureSpace::EdgeFeatureSpace(Eigen::VectorXd weights, Eigen::VectorXd biases)
    : weights_(std::move(weights)), biases_(std::move(biases)) {
  if (weights_.size() != biases_.size())
    fail(ErrorCode::Config, "weight and bias counts differ");
}

Eigen::VectorXd EdgeFeatureSpace::values(double t) const {
  const int n = size();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const int j = n - 1 - i;
    out[i] = std::tanh(weights_[i] * t + biases_[i]) +
             std::tanh(weights_[j] * (1.0 - t) + biases_[j]);
  }
  return out;
}

Eigen::MatrixXd EdgeFeatureSpace::values(const Eigen::VectorXd& ts) const {
  const int n = size();
  Eigen::MatrixXd out(n, ts.size());
  for (Eigen::Index q = 0; q < ts.size(); ++q) out.col(q) = values(ts[q]);
  return out;
}

ElementFeatureSpace init_element_space(const FeatureSpaceConfig& config,
                                       std::uint64_t entity_index) {
  check_config(config);
  UniformStream stream(config.seed, EntityKind::Element, entity_index, config.half_width);
  Eigen::MatrixX2d w(config.neurons, 2);
  Eigen::VectorXd b(config.neurons);
  for (int i = 0; i < config.neurons; ++i) {
    w(i, 0) = stream.next();
    w(i, 1) = stream.next();
  }
  for (int i = 0; i < config.neurons; ++i) b[i] = stream.next();
  return ElementFeatureSpace(std::move(w), std::move(b));
}

EdgeFeatureSpace init_edge_space(const FeatureSpaceConfig& config,
                                 std::uint64_t entity_index) {
  check_config(config);
  UniformStream stream(config.seed, EntityKind::Edge, entity_index, config.half_width);
  Eigen::VectorXd w(config.neurons), b(config.neurons);
  for (int i = 0; i < config.neurons; ++i) w[i] = stream.next();
  for (int i = 0; i < config.neurons; ++i) b[i] = stream.next();
  return EdgeFeatureSpace(std::move(w), std::move(b));
}

ElementFeatureSpace init_global_trace_space(const FeatureSpaceConfig& config,
                                            const Domain&) {
  check_config(config);
  UniformStream stream(config.seed, EntityKind::Global, 0, config.half_width);
  Eigen::MatrixX2d w(config.neurons, 2);
  Eigen::VectorXd b(config.neurons);
  for (int i = 0; i < config.neurons; ++i) {
    w(i, 0) = stream.next();
    w(i, 1) = stream.next();
  }
  for (int i = 0; i < config.neurons; ++i) b[i] = stream.next();
  return ElementFeatureSpace(std::move(w), std::move(b));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view field_tag) {
  std::uint64_t h = splitmix64(master);
  for (char c : field_tag) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

}  // namespace rfhdg
