#include "betaframe/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

namespace betaframe {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajorMatrix>;
using MutableMap = Eigen::Map<RowMajorMatrix>;

ConstMap map_of(const DenseMatrix& a) {
  return ConstMap(a.data(), static_cast<Eigen::Index>(a.rows()),
                  static_cast<Eigen::Index>(a.cols()));
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<Index>(m.rows()), static_cast<Index>(m.cols()));
  MutableMap(out.data(), m.rows(), m.cols()) = m;
  return out;
}

Eigen::VectorXd singular_values(const DenseMatrix& a) {
  // BDCSVD wants a tall operand; singular values are transpose-invariant.
  Eigen::MatrixXd m = map_of(a);
  if (m.rows() < m.cols()) m = m.transpose().eval();
  return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
}

void check_shape(Index rows, Index cols) {
  if (rows < 1 || cols < 1)
    throw BadShapeError("DenseMatrix requires rows >= 1 and cols >= 1, got " +
                        std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  check_shape(rows, cols);
}

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_shape(rows, cols);
  if (entries_.size() != rows_ * cols_)
    throw BadShapeError("entry count " + std::to_string(entries_.size()) +
                        " does not match " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
  for (double v : entries_)
    if (!std::isfinite(v)) throw BadArgumentError("non-finite matrix entry");
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix out(n, n);
  for (Index i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::top_rows(Index n) const {
  if (n < 1 || n > rows_)
    throw BadShapeError("top_rows: n out of range");
  DenseMatrix out(n, cols_);
  std::copy_n(entries_.begin(), n * cols_, out.entries_.begin());
  return out;
}

DenseMatrix DenseMatrix::pad_columns(Index new_cols) const {
  if (new_cols < cols_) throw BadShapeError("pad_columns: shrinking");
  DenseMatrix out(rows_, new_cols);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  return out;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimMismatchError("matrix product: " + std::to_string(a.cols()) +
                           " inner vs " + std::to_string(b.rows()));
  return from_eigen(map_of(a) * map_of(b));
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size())
    throw DimMismatchError("matrix-vector product: " + std::to_string(a.cols()) +
                           " cols vs " + std::to_string(x.size()));
  Eigen::Map<const Eigen::VectorXd> xv(x.data(),
                                       static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd y = map_of(a) * xv;
  return std::vector<double>(y.data(), y.data() + y.size());
}

DenseMatrix operator*(double c, const DenseMatrix& a) {
  return from_eigen(c * map_of(a));
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimMismatchError("matrix difference: shape mismatch");
  return from_eigen(map_of(a) - map_of(b));
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimMismatchError("max_abs_diff: shape mismatch");
  return (map_of(a) - map_of(b)).cwiseAbs().maxCoeff();
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

DenseMatrix least_squares_apply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() < a.cols())
    throw BadShapeError("least_squares_apply: A must be tall (p >= k)");
  if (b.rows() != a.rows())
    throw DimMismatchError("least_squares_apply: B row count");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(map_of(a),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > kRankTol * smax))
    throw RankDeficientError(
        "least_squares_apply: numerical rank below column count (sigma_min=" +
        std::to_string(smin) + ", sigma_max=" + std::to_string(smax) + ")");
  return from_eigen(svd.solve(map_of(b)));
}

double sigma_min(const DenseMatrix& a) {
  const Eigen::VectorXd sv = singular_values(a);
  return sv(sv.size() - 1);
}

double sigma_max(const DenseMatrix& a) {
  return singular_values(a)(0);
}

double norm_inf_inf(const DenseMatrix& a) {
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double norm_2_inf(const DenseMatrix& a) {
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i) best = std::max(best, norm_2(a.row(i)));
  return best;
}

InfToTwoNorm norm_inf_2_exact(const DenseMatrix& a) {
  const Index k = a.rows();
  const Index m = a.cols();
  if (m > 24)
    throw TooLargeError("norm_inf_2_exact: " + std::to_string(m) +
                        " columns exceeds the 24-column enumeration guard");

  // Walk {-1,1}^m in Gray-code order so each step flips a single sign and
  // costs O(k). Sign symmetry s <-> -s halves the space: the last
  // coordinate stays fixed at +1.
  std::vector<double> w(k, 0.0);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < m; ++j) w[i] += a(i, j);

  std::vector<int> sign(m, 1);
  auto sq_norm = [&] {
    double s = 0.0;
    for (double x : w) s += x * x;
    return s;
  };

  double best = sq_norm();
  const std::uint64_t steps = (m >= 2) ? (std::uint64_t{1} << (m - 1)) : 1;
  for (std::uint64_t t = 1; t < steps; ++t) {
    const int b = std::countr_zero(t);  // bit flipped at Gray step t
    const double scale = -2.0 * sign[b];
    sign[b] = -sign[b];
    for (Index i = 0; i < k; ++i) w[i] += scale * a(i, static_cast<Index>(b));
    best = std::max(best, sq_norm());
  }

  return {std::sqrt(best), std::sqrt(static_cast<double>(k)) * norm_inf_inf(a)};
}

}  // namespace betaframe
