#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "betaframe/errors.hpp"

namespace betaframe {

using Index = std::size_t;

// Relative sigma_min threshold below which a matrix is treated as rank
// deficient by the least-squares and dual-construction paths.
inline constexpr double kRankTol = 1e-10;

/// Dense real matrix with row-major storage. Small and value-semantic; this
/// is the substrate for analysis frames E, duals F, condensation maps V and
/// realized noise transfer matrices H.
class DenseMatrix {
 public:
  DenseMatrix(Index rows, Index cols);  // zero-filled
  DenseMatrix(Index rows, Index cols, std::vector<double> entries);

  static DenseMatrix identity(Index n);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  double operator()(Index i, Index j) const { return entries_[i * cols_ + j]; }
  double& operator()(Index i, Index j) { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(Index i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  double* data() noexcept { return entries_.data(); }
  const double* data() const noexcept { return entries_.data(); }

  DenseMatrix transpose() const;
  DenseMatrix top_rows(Index n) const;
  /// Appends zero columns on the right (truncate-mode dual padding F = [F~ 0]).
  DenseMatrix pad_columns(Index new_cols) const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  Index rows_;
  Index cols_;
  std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);
DenseMatrix operator*(double c, const DenseMatrix& a);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

double norm_inf(std::span<const double> v);
double norm_2(std::span<const double> v);

/// X = A†B for a full-column-rank A (p x k, p >= k), computed through an
/// orthogonal factorization so conditioning stays at kappa(A). Column j of X
/// minimizes ||A x - B_j||_2.
/// Throws RankDeficientError when sigma_min(A) <= kRankTol * sigma_max(A).
DenseMatrix least_squares_apply(const DenseMatrix& a, const DenseMatrix& b);

double sigma_min(const DenseMatrix& a);
double sigma_max(const DenseMatrix& a);

/// Maximum absolute row sum: ||A||_{inf->inf}.
double norm_inf_inf(const DenseMatrix& a);

/// Maximum row 2-norm: ||A||_{2->inf}.
double norm_2_inf(const DenseMatrix& a);

struct InfToTwoNorm {
  double exact;         // max over s in {-1,1}^m of ||As||_2
  double rowsum_bound;  // sqrt(rows) * ||A||_{inf->inf}, always >= exact
};

/// Exact ||A||_{inf->2} by sign-pattern enumeration (Gray-code walk over
/// {-1,1}^cols, halved by sign symmetry). Guarded: throws TooLargeError for
/// more than 24 columns.
InfToTwoNorm norm_inf_2_exact(const DenseMatrix& a);

}  // namespace betaframe
