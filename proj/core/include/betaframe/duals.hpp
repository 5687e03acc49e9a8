#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "betaframe/frames.hpp"
#include "betaframe/noise_shaping.hpp"

namespace betaframe {

enum class PartitionMode {
  Balanced,  // all m rows used, block sizes differ by at most one
  Truncate,  // l equal blocks of floor(m/l); trailing rows are dropped
};

enum class MuPolicy {
  ExactRowNorm,      // mu = ||E||_{2->inf}, valid for any deterministic frame
  GaussianFourSqrtM,  // mu = 4*sqrt(m), the standard high-probability bound
  Override,
};

struct BlockPartition {
  std::size_t l = 0;
  std::vector<Index> sizes;
  PartitionMode mode = PartitionMode::Balanced;

  Index total() const;     // sum of sizes (m, or m~ in truncate mode)
  Index min_size() const;  // m_*
};

/// Balanced: sizes differ by at most one, the first (m mod l) blocks take the
/// extra row. Truncate: l equal blocks of floor(m/l); the caller drops the
/// last m - floor(m/l)*l rows of the frame.
BlockPartition make_partition(Index m, std::size_t l, PartitionMode mode);

/// Block-diagonal map V whose block-i row is the geometric sequence
/// [b_i^-1, b_i^-2, ..., b_i^-m_i].
struct CondensationMap {
  BlockPartition partition;
  std::vector<double> betas;  // one per block, all > 1
  DenseMatrix realized;       // l x partition.total()

  double min_beta() const;  // beta_*
};

CondensationMap beta_condensation(const BlockPartition& partition, double beta);
CondensationMap beta_condensation(const BlockPartition& partition,
                                  std::vector<double> betas);

/// F_V = (VE)† V, a dual of E whenever the condensation VE has rank k.
/// Throws RankDeficientError when it does not (or when the duality identity
/// fails numerically at kDualityTol).
///
/// Different V can induce the same dual: any V admits an equivalent k x m
/// replacement through a whitening of VE, so p never needs to exceed k in
/// principle. That reduction buys nothing computationally and is not
/// implemented.
DualFrame v_dual(const Frame& e, const DenseMatrix& v);

struct OptimalParams {
  double beta;
  double delta;
  double bound_value;  // delta * beta^-alpha at the minimizer
};

/// Analytic minimizer of delta * beta^-alpha over S_{mu,L}:
/// beta = L*alpha/(1+alpha), delta = mu*(1+alpha)/L, with minimum value
/// mu*alpha*((1+alpha)/(alpha*L))^(1+alpha). The point always lies on the
/// boundary beta + mu/delta = L. Requires alpha > 1/(L-1) so that beta > 1.
OptimalParams optimal_params(double alpha, double mu, int levels);

struct SchemeOptions {
  PartitionMode mode = PartitionMode::Balanced;
  MuPolicy mu_policy = MuPolicy::ExactRowNorm;
  double eta = 0.0;
  std::optional<double> mu_override;
  // Explicit (beta, delta) instead of the alpha-rule via optimal_params.
  std::optional<std::pair<double, double>> beta_delta;
};

/// A full distributed noise-shaping quantization scheme: frame, block
/// partition, beta condensation, alphabet, block-diagonal transfer operator
/// and the V-dual used for reconstruction. Immutable after construction.
struct BetaDualScheme {
  Frame frame;                  // full analysis frame, m x k
  DenseMatrix measurement;      // rows actually quantized (m~ x k in truncate mode)
  BlockPartition partition;
  CondensationMap condensation;
  Alphabet alphabet;
  TransferOperator transfer;
  DualFrame dual;               // k x m; trailing columns zero in truncate mode
  double mu = 0.0;
  double eta = 0.0;
  MuPolicy mu_policy = MuPolicy::ExactRowNorm;
  double sigma_min_condensed = 0.0;  // sigma_min(V E~), cached at build
  bool stable = false;  // (beta,delta) in S_{mu,L} and mu >= ||E~||_{2->inf}

  Index measurement_count() const { return partition.total(); }
  double beta() const { return condensation.min_beta(); }
  double delta() const { return alphabet.delta; }
  int levels() const { return alphabet.levels; }
};

/// Builds the scheme for a frame: resolves mu per policy, picks
/// (beta, delta) via optimal_params with alpha = (1 - eta) * floor(m/l)
/// unless overridden, assembles partition/condensation/transfer/dual and
/// verifies stability and duality. Requires k <= l <= m.
BetaDualScheme build_scheme(const Frame& e, std::size_t l, int levels,
                            const SchemeOptions& options = {});

/// Greedy-quantizes y = E x blockwise. Requires ||x||_2 <= 1 and
/// ||E x||_inf <= mu (InputOutOfRangeError otherwise).
QuantizationRecord encode(const BetaDualScheme& s, std::span<const double> x);

/// x_hat = F q. Accepts q of length m or of the truncated length m~.
std::vector<double> decode(const BetaDualScheme& s, std::span<const double> q);

/// A-priori reconstruction error bound of the scheme:
/// delta * sqrt(l) * beta_*^{-m_*} / sigma_min(V E~).
double error_bound(const BetaDualScheme& s);

/// Generic distributed bound for an arbitrary block-diagonal V:
/// sqrt(p) * u_inf * ||V H||_{inf->inf} / sigma_min(V E).
double distributed_error_bound(const DenseMatrix& v, const TransferOperator& h,
                               const DenseMatrix& e, double u_inf);

/// Closed form for the harmonic semicircle condensation norm
/// C_{beta,m} = sqrt(1 + beta^-m) / |beta - e^{i pi/m}|, which equals
/// sigma_min of the realized 2 x 2 condensed matrix of hsc_frame(m).
/// C_{beta,m} >= 1/beta, with equality exactly at m = 2.
double hsc_condensation_norm(double beta, Index m);

struct BetaSweepResult {
  double beta;
  double delta;
  double bound;
};

/// 1-D sweep over beta with delta pinned to the boundary mu/(L - beta),
/// minimizing the true bound including the beta-dependence of
/// sigma_min(V E~). Quantifies the gap left by the alpha-rule choice.
BetaSweepResult refine_beta(const Frame& e, std::size_t l, int levels,
                            const SchemeOptions& options, std::size_t grid_points);

}  // namespace betaframe
