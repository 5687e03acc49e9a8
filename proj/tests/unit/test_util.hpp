#pragma once

#include <random>
#include <vector>

#include "betaframe/matrix.hpp"
#include "betaframe/rng.hpp"

namespace testutil {

inline betaframe::DenseMatrix random_matrix(std::mt19937_64& engine,
                                            betaframe::Index rows,
                                            betaframe::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  betaframe::DenseMatrix a(rows, cols);
  for (betaframe::Index i = 0; i < rows; ++i)
    for (betaframe::Index j = 0; j < cols; ++j) a(i, j) = normal(engine);
  return a;
}

// Singular values by cyclic Jacobi iteration on the Gram matrix of the
// smaller side. Independent of the library's SVD path; intended for
// matrices up to 5x5.
inline std::vector<double> singular_values_jacobi(const betaframe::DenseMatrix& a) {
  using betaframe::Index;
  const bool wide = a.cols() > a.rows();
  const Index n = wide ? a.rows() : a.cols();
  const Index other = wide ? a.cols() : a.rows();

  // S = A A^T (wide) or A^T A (tall), n x n symmetric PSD.
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index t = 0; t < other; ++t)
        s[i][j] += (wide ? a(i, t) * a(j, t) : a(t, i) * a(t, j));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += s[p][q] * s[p][q];
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (s[p][q] == 0.0) continue;
        const double tau = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (Index i = 0; i < n; ++i) {
          const double sip = s[i][p];
          const double siq = s[i][q];
          s[i][p] = c * sip - sn * siq;
          s[i][q] = sn * sip + c * siq;
        }
        for (Index i = 0; i < n; ++i) {
          const double spi = s[p][i];
          const double sqi = s[q][i];
          s[p][i] = c * spi - sn * sqi;
          s[q][i] = sn * spi + c * sqi;
        }
      }
    }
  }

  std::vector<double> sigma(n);
  for (Index i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(0.0, s[i][i]));
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

}  // namespace testutil
