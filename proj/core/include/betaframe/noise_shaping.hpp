#pragma once

#include <span>
#include <vector>

#include "betaframe/matrix.hpp"

namespace betaframe {

// Relative slack accepted on the stability preconditions, so parameter
// points sitting exactly on the boundary beta + mu/delta = L are not
// rejected by floating-point rounding.
inline constexpr double kAdmissibilitySlack = 1e-12;

/// Quantization alphabet A_{L,delta}: the symmetric arithmetic progression
/// {-(L-1)d, -(L-3)d, ..., (L-1)d} with L levels and spacing 2*delta.
struct Alphabet {
  int levels;
  double delta;
};

Alphabet make_alphabet(int levels, double delta);

std::vector<double> alphabet_values(const Alphabet& a);

/// Nearest alphabet value; exact midpoints round toward the smaller (more
/// negative) value, and inputs beyond the endpoints saturate. For
/// |w| <= L*delta the result deviates from w by at most delta.
double round_to(const Alphabet& a, double w);

/// Noise transfer operator H: lower triangular with unit diagonal, stored
/// structurally. Three kinds:
///   toeplitz(h)  - convolution by a tap sequence h with h[0] = 1
///   beta(b)      - bidiagonal, 1 on the diagonal and -b on the subdiagonal
///   block_diagonal - direct sum of smaller operators
class TransferOperator {
 public:
  enum class Kind { Toeplitz, Beta, BlockDiagonal };

  static TransferOperator toeplitz(std::vector<double> taps, Index size);
  static TransferOperator beta(double beta, Index size);
  static TransferOperator block_diagonal(std::vector<TransferOperator> blocks);

  Kind kind() const noexcept { return kind_; }
  Index size() const noexcept { return size_; }

  double beta_value() const;                          // Kind::Beta
  const std::vector<double>& taps() const;            // Kind::Toeplitz
  const std::vector<TransferOperator>& blocks() const;  // Kind::BlockDiagonal

  DenseMatrix realize() const;

  /// ||I - H||_{inf->inf}, computed structurally: toeplitz -> ||h||_1 - 1,
  /// beta -> beta, block -> max over blocks.
  double tilde_norm() const;

  /// Offsets and leaf operators of the flattened block structure, in order.
  std::vector<std::pair<Index, const TransferOperator*>> leaves() const;

 private:
  TransferOperator() = default;

  Kind kind_ = Kind::Beta;
  Index size_ = 0;
  double beta_ = 0.0;
  std::vector<double> taps_;
  std::vector<TransferOperator> blocks_;
};

inline double tilde_norm(const TransferOperator& h) { return h.tilde_norm(); }

/// Membership in the stability region S_{mu,L}:
/// beta > 1, delta > 0 and beta + mu/delta <= L.
bool admissible(double beta, double delta, double mu, int levels);

/// Witness of the noise-shaping identity y - q = H u.
struct QuantizationRecord {
  std::vector<double> y;
  std::vector<double> q;
  std::vector<double> u;
  Alphabet alphabet;
  TransferOperator transfer;
};

/// Greedy noise-shaping quantizer. Requires ||y||_inf <= mu and the
/// stability condition ||I - H||_{inf->inf} + mu/delta <= L (checked with
/// kAdmissibilitySlack); the returned record then satisfies y - q = H u and
/// ||u||_inf <= delta. Blocks of a block-diagonal operator are quantized
/// independently, each starting from fresh state.
QuantizationRecord greedy_quantize(const TransferOperator& h, const Alphabet& a,
                                   std::span<const double> y, double mu);

/// H u computed structurally (no realization).
std::vector<double> apply_transfer(const TransferOperator& h,
                                   std::span<const double> u);

/// ||y - q - H u||_inf of a record.
double residual_inf(const QuantizationRecord& record);

}  // namespace betaframe
