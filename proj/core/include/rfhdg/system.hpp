#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "rfhdg/error.hpp"

namespace rfhdg {

/// One contiguous column block: `count` coefficients of one (field, entity,
/// component) triple.
struct BlockSpec {
  std::string field;
  int entity = 0;
  int component = 0;
  int count = 0;
};

/// Disjoint, contiguous column blocks with O(1) offset lookup.
class ColumnLayout {
public:
  ColumnLayout() = default;
  explicit ColumnLayout(std::vector<BlockSpec> blocks);

  int dof() const { return dof_; }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }

  bool has(std::string_view field, int entity, int component) const;
  /// First column of the block; throws a layout error when absent.
  int offset(std::string_view field, int entity, int component) const;
  int count(std::string_view field, int entity, int component) const;

private:
  int find(std::string_view field, int entity, int component) const;

  std::vector<BlockSpec> blocks_;
  std::vector<int> offsets_;
  std::unordered_map<std::string, int> index_;
  int dof_ = 0;
};

/// Which weak-form equation and entity produced a row.
struct RowTag {
  std::string equation;
  int entity = 0;
};

/// Dense rectangular system assembled row by row.
class DenseSystem {
public:
  using RowMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit DenseSystem(int cols) : cols_(cols) {}

  void reserve_rows(int rows);
  /// Appends a zeroed row and returns its index.
  int add_row(RowTag tag);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Eigen::Ref<Eigen::RowVectorXd> row(int r) { return matrix_.row(r); }
  double& rhs(int r) { return rhs_[r]; }

  const RowMatrix& matrix() const { return matrix_; }
  const Eigen::VectorXd& rhs_vector() const { return rhs_; }
  const std::vector<RowTag>& provenance() const { return provenance_; }

  /// Plain-text coordinate dump: "row col value" per nonzero of A, then the
  /// right-hand side with the one-past-last column index.
  void dump(std::ostream& os) const;

private:
  int cols_ = 0;
  int rows_ = 0;
  RowMatrix matrix_;
  Eigen::VectorXd rhs_;
  std::vector<RowTag> provenance_;
};

struct LeastSquaresSolution {
  Eigen::VectorXd x;
  double residual_norm = 0;
  int numerical_rank = 0;
};

/// Minimizes |Ax - b| by column-pivoted orthogonal factorization. With
/// rank_tol = 0 the tolerance defaults to max(rows, cols) * machine epsilon,
/// applied relative to the largest diagonal of the pivoted triangular factor.
LeastSquaresSolution solve_least_squares(const DenseSystem& system,
                                         double rank_tol = 0.0);

/// Multi-right-hand-side variant on a raw matrix, used by the local
/// elimination and projection steps. Returns the minimizer columns.
Eigen::MatrixXd least_squares_columns(Eigen::MatrixXd a, const Eigen::MatrixXd& b,
                                      int* rank = nullptr, double rank_tol = 0.0);

/// Partial residual norms keyed by weak-form equation tag; their squares sum
/// to the full squared residual.
std::map<std::string, double> residual_by_provenance(const DenseSystem& system,
                                                     const Eigen::VectorXd& x);

}  // namespace rfhdg
