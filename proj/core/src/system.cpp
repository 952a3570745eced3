#include "rfhdg/system.hpp"

#include <cmath>
#include <limits>

#include <Eigen/QR>

namespace rfhdg {

namespace {

std::string block_key(std::string_view field, int entity, int component) {
  std::string key(field);
  key += '\x1f';
  key += std::to_string(entity);
  key += '\x1f';
  key += std::to_string(component);
  return key;
}

}  // namespace

ColumnLayout::ColumnLayout(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) fail(ErrorCode::Layout, "layout needs at least one block");
  offsets_.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const BlockSpec& b = blocks_[i];
    if (b.count < 1) fail(ErrorCode::Layout, "block '" + b.field + "' has no columns");
    auto [it, inserted] =
        index_.emplace(block_key(b.field, b.entity, b.component), static_cast<int>(i));
    if (!inserted)
      fail(ErrorCode::Layout, "duplicate block (" + b.field + ", " +
                                  std::to_string(b.entity) + ", " +
                                  std::to_string(b.component) + ")");
    offsets_.push_back(dof_);
    dof_ += b.count;
  }
}

int ColumnLayout::find(std::string_view field, int entity, int component) const {
  auto it = index_.find(block_key(field, entity, component));
  return it == index_.end() ? -1 : it->second;
}

bool ColumnLayout::has(std::string_view field, int entity, int component) const {
  return find(field, entity, component) >= 0;
}

int ColumnLayout::offset(std::string_view field, int entity, int component) const {
  const int i = find(field, entity, component);
  if (i < 0)
    fail(ErrorCode::Layout, "unknown block (" + std::string(field) + ", " +
                                std::to_string(entity) + ", " +
                                std::to_string(component) + ")");
  return offsets_[i];
}

int ColumnLayout::count(std::string_view field, int entity, int component) const {
  const int i = find(field, entity, component);
  if (i < 0) fail(ErrorCode::Layout, "unknown block (" + std::string(field) + ")");
  return blocks_[i].count;
}

void DenseSystem::reserve_rows(int rows) {
  if (rows <= matrix_.rows()) return;
  matrix_.conservativeResize(rows, cols_);
  rhs_.conservativeResize(rows);
  provenance_.reserve(rows);
}

int DenseSystem::add_row(RowTag tag) {
  if (rows_ == matrix_.rows()) reserve_rows(std::max(16, 2 * rows_));
  matrix_.row(rows_).setZero();
  rhs_[rows_] = 0.0;
  provenance_.push_back(std::move(tag));
  return rows_++;
}

void DenseSystem::dump(std::ostream& os) const {
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (matrix_(r, c) != 0.0) os << r << ' ' << c << ' ' << matrix_(r, c) << '\n';
  for (int r = 0; r < rows_; ++r) os << r << ' ' << cols_ << ' ' << rhs_[r] << '\n';
}

namespace {

double default_rank_tol(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

}  // namespace

Eigen::MatrixXd least_squares_columns(Eigen::MatrixXd a, const Eigen::MatrixXd& b,
                                      int* rank, double rank_tol) {
  if (a.rows() != b.rows()) fail(ErrorCode::Config, "matrix and rhs row counts differ");
  if (a.rows() < 1 || a.cols() < 1)
    fail(ErrorCode::Config, "least-squares system must be non-empty");

  // Column-pivoted Householder QR extended to a complete orthogonal
  // factorization. The numerical rank counts pivoted diagonals above
  // rank_tol times the largest one; the returned minimizer is the
  // minimum-norm solution of the rank-truncated factorization, which stays
  // bounded on the near-rank-deficient feature matrices where a basic
  // (zero-padded) solution does not.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a.rows(), a.cols());
  cod.setThreshold(rank_tol > 0 ? rank_tol : default_rank_tol(a.rows(), a.cols()));
  cod.compute(std::move(a));
  if (rank) *rank = static_cast<int>(cod.rank());
  return cod.solve(b);
}

LeastSquaresSolution solve_least_squares(const DenseSystem& system, double rank_tol) {
  if (system.rows() < 1 || system.cols() < 1)
    fail(ErrorCode::Config, "least-squares system must be non-empty");

  const auto a = system.matrix().topRows(system.rows());
  const auto b = system.rhs_vector().head(system.rows());
  if (!a.allFinite() || !b.allFinite())
    fail(ErrorCode::NumericInput, "system contains non-finite entries");

  LeastSquaresSolution out;
  out.x = least_squares_columns(a, b, &out.numerical_rank, rank_tol);
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

std::map<std::string, double> residual_by_provenance(const DenseSystem& system,
                                                     const Eigen::VectorXd& x) {
  if (x.size() != system.cols())
    fail(ErrorCode::Config, "coefficient vector length does not match layout");
  std::map<std::string, double> sq;
  for (int r = 0; r < system.rows(); ++r) {
    const double res = system.matrix().row(r).head(system.cols()).dot(x) -
                       system.rhs_vector()[r];
    sq[system.provenance()[r].equation] += res * res;
  }
  std::map<std::string, double> out;
  for (const auto& [tag, s] : sq) out[tag] = std::sqrt(s);
  return out;
}

}  // namespace rfhdg
