#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betaframe/matrix.hpp"

namespace betaframe {

// Tolerance for the duality identity F E = I.
inline constexpr double kDualityTol = 1e-9;

/// Analysis frame: an m x k matrix of full column rank whose rows are the
/// frame vectors, so measurements are y = E x.
struct Frame {
  DenseMatrix matrix;
  std::string label;
  std::optional<std::uint64_t> seed;  // set for randomly generated frames
  std::string generator;              // how the entries were produced

  Index size() const { return matrix.rows(); }       // m
  Index dimension() const { return matrix.cols(); }  // k
};

/// Validates shape (m >= k), finiteness and the spanning condition
/// (numerical rank k). Row order is preserved as given; downstream
/// quantization is order-dependent.
Frame make_frame(DenseMatrix matrix, std::string label,
                 std::optional<std::uint64_t> seed = std::nullopt,
                 std::string generator = "user");

/// k x m left inverse of a frame: matrix * E = I within kDualityTol.
struct DualFrame {
  DenseMatrix matrix;
  std::string of_frame;  // label of the frame this is dual to
};

/// i.i.d. standard normal entries from a seeded generator; identical
/// (seed, m, k) reproduce the identical frame within one build.
Frame gaussian_frame(Index m, Index k, std::uint64_t seed);

/// Harmonic semicircle frame: m x 2 with row i = (cos i*pi/m, sin i*pi/m),
/// i = 1..m. Requires m even (throws OddSizeError otherwise); the second
/// half of the rows is the 90-degree rotation of the first half.
Frame hsc_frame(Index m);

std::vector<double> measure(const Frame& e, std::span<const double> x);

/// Canonical dual E† (the V-dual with V = I).
DualFrame canonical_dual(const Frame& e);

bool is_dual(const DenseMatrix& f, const Frame& e, double tol = kDualityTol);

}  // namespace betaframe
