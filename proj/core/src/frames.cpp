#include "betaframe/frames.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "betaframe/rng.hpp"

namespace betaframe {

Frame make_frame(DenseMatrix matrix, std::string label,
                 std::optional<std::uint64_t> seed, std::string generator) {
  if (matrix.rows() < matrix.cols())
    throw BadShapeError("frame requires m >= k, got " +
                        std::to_string(matrix.rows()) + "x" +
                        std::to_string(matrix.cols()));
  if (!(sigma_min(matrix) > kRankTol * sigma_max(matrix)))
    throw RankDeficientError("frame rows do not span R^k: \"" + label + "\"");
  return Frame{std::move(matrix), std::move(label), seed, std::move(generator)};
}

Frame gaussian_frame(Index m, Index k, std::uint64_t seed) {
  if (k < 1 || m < k)
    throw BadShapeError("gaussian_frame requires m >= k >= 1, got " +
                        std::to_string(m) + "x" + std::to_string(k));
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix e(m, k);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < k; ++j) e(i, j) = normal(engine);
  // Full rank fails only on a null set; still verified by make_frame.
  return make_frame(std::move(e),
                    "gaussian(" + std::to_string(m) + "x" + std::to_string(k) +
                        ",seed=" + std::to_string(seed) + ")",
                    seed, kGeneratorName);
}

Frame hsc_frame(Index m) {
  if (m < 2) throw BadShapeError("hsc_frame requires m >= 2");
  if (m % 2 != 0)
    throw OddSizeError("hsc_frame requires even m, got " + std::to_string(m));
  DenseMatrix e(m, 2);
  for (Index i = 1; i <= m; ++i) {
    const double angle = std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(m);
    e(i - 1, 0) = std::cos(angle);
    e(i - 1, 1) = std::sin(angle);
  }
  return make_frame(std::move(e), "hsc(" + std::to_string(m) + ")",
                    std::nullopt, "hsc");
}

std::vector<double> measure(const Frame& e, std::span<const double> x) {
  if (x.size() != e.dimension())
    throw DimMismatchError("measure: x has dimension " +
                           std::to_string(x.size()) + ", frame expects " +
                           std::to_string(e.dimension()));
  return e.matrix * x;
}

DualFrame canonical_dual(const Frame& e) {
  DenseMatrix f = least_squares_apply(e.matrix, DenseMatrix::identity(e.size()));
  if (max_abs_diff(f * e.matrix, DenseMatrix::identity(e.dimension())) >
      kDualityTol)
    throw RankDeficientError("canonical_dual: duality check failed for \"" +
                             e.label + "\"");
  return DualFrame{std::move(f), e.label};
}

bool is_dual(const DenseMatrix& f, const Frame& e, double tol) {
  if (f.cols() != e.size() || f.rows() != e.dimension())
    throw DimMismatchError("is_dual: F must be k x m for an m x k frame");
  return max_abs_diff(f * e.matrix, DenseMatrix::identity(e.dimension())) <= tol;
}

}  // namespace betaframe
