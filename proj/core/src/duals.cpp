#include "betaframe/duals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace betaframe {

Index BlockPartition::total() const {
  Index t = 0;
  for (Index s : sizes) t += s;
  return t;
}

Index BlockPartition::min_size() const {
  Index m = sizes.empty() ? 0 : sizes[0];
  for (Index s : sizes) m = std::min(m, s);
  return m;
}

BlockPartition make_partition(Index m, std::size_t l, PartitionMode mode) {
  if (l < 1 || l > m)
    throw BadShapeError("make_partition requires 1 <= l <= m, got l=" +
                        std::to_string(l) + ", m=" + std::to_string(m));
  const Index base = m / l;
  BlockPartition p{l, std::vector<Index>(l, base), mode};
  if (mode == PartitionMode::Balanced) {
    const Index extra = m % l;
    for (Index i = 0; i < extra; ++i) p.sizes[i] += 1;
  }
  return p;
}

double CondensationMap::min_beta() const {
  double b = betas.empty() ? 0.0 : betas[0];
  for (double v : betas) b = std::min(b, v);
  return b;
}

CondensationMap beta_condensation(const BlockPartition& partition, double beta) {
  return beta_condensation(partition,
                           std::vector<double>(partition.l, beta));
}

CondensationMap beta_condensation(const BlockPartition& partition,
                                  std::vector<double> betas) {
  if (betas.size() != partition.l)
    throw BadShapeError("beta_condensation: need one beta per block");
  for (double b : betas)
    if (!(b > 1.0) || !std::isfinite(b))
      throw BadBetaError("beta_condensation requires beta > 1, got " +
                         std::to_string(b));
  DenseMatrix v(partition.l, partition.total());
  Index offset = 0;
  for (std::size_t i = 0; i < partition.l; ++i) {
    double power = 1.0;
    for (Index j = 0; j < partition.sizes[i]; ++j) {
      power /= betas[i];
      v(i, offset + j) = power;  // beta^-(j+1)
    }
    offset += partition.sizes[i];
  }
  return CondensationMap{partition, std::move(betas), std::move(v)};
}

DualFrame v_dual(const Frame& e, const DenseMatrix& v) {
  if (v.cols() != e.size())
    throw DimMismatchError("v_dual: V must have m columns");
  const DenseMatrix condensed = v * e.matrix;  // p x k
  DenseMatrix f = least_squares_apply(condensed, v);
  if (max_abs_diff(f * e.matrix, DenseMatrix::identity(e.dimension())) >
      kDualityTol)
    throw RankDeficientError("v_dual: duality check failed for \"" + e.label +
                             "\"");
  return DualFrame{std::move(f), e.label};
}

OptimalParams optimal_params(double alpha, double mu, int levels) {
  if (levels < 2) throw BadArgumentError("optimal_params requires L >= 2");
  if (!(mu > 0.0)) throw BadArgumentError("optimal_params requires mu > 0");
  const double levels_d = static_cast<double>(levels);
  if (!(alpha > 1.0 / (levels_d - 1.0)))
    throw AlphaTooSmallError("optimal_params requires alpha > 1/(L-1) = " +
                             std::to_string(1.0 / (levels_d - 1.0)) +
                             ", got " + std::to_string(alpha));
  const double beta = levels_d * alpha / (1.0 + alpha);
  const double delta = mu * (1.0 + alpha) / levels_d;
  return OptimalParams{beta, delta, delta * std::pow(beta, -alpha)};
}

namespace {

double resolve_mu(const DenseMatrix& measurement, Index full_m,
                  const SchemeOptions& options) {
  switch (options.mu_policy) {
    case MuPolicy::ExactRowNorm:
      return norm_2_inf(measurement);
    case MuPolicy::GaussianFourSqrtM:
      return 4.0 * std::sqrt(static_cast<double>(full_m));
    case MuPolicy::Override:
      if (!options.mu_override)
        throw BadArgumentError("mu policy Override requires mu_override");
      if (!(*options.mu_override > 0.0))
        throw BadArgumentError("mu_override must be > 0");
      return *options.mu_override;
  }
  throw BadArgumentError("unknown mu policy");
}

}  // namespace

BetaDualScheme build_scheme(const Frame& e, std::size_t l, int levels,
                            const SchemeOptions& options) {
  const Index m = e.size();
  const Index k = e.dimension();
  if (l < k || l > m)
    throw BadShapeError("build_scheme requires k <= l <= m, got l=" +
                        std::to_string(l) + " for " + std::to_string(m) + "x" +
                        std::to_string(k));
  if (levels < 2) throw BadArgumentError("build_scheme requires L >= 2");
  if (!(options.eta >= 0.0 && options.eta < 1.0))
    throw BadArgumentError("build_scheme requires 0 <= eta < 1");

  BlockPartition partition = make_partition(m, l, options.mode);
  DenseMatrix measurement = options.mode == PartitionMode::Truncate
                                ? e.matrix.top_rows(partition.total())
                                : e.matrix;
  const double mu = resolve_mu(measurement, m, options);

  double beta = 0.0;
  double delta = 0.0;
  if (options.beta_delta) {
    std::tie(beta, delta) = *options.beta_delta;
    if (!(beta > 1.0)) throw BadBetaError("explicit beta must exceed 1");
    if (!(delta > 0.0)) throw BadArgumentError("explicit delta must be > 0");
  } else {
    const double alpha =
        (1.0 - options.eta) * static_cast<double>(m / l);  // floor(m/l)
    const OptimalParams opt = optimal_params(alpha, mu, levels);
    beta = opt.beta;
    delta = opt.delta;
  }

  const double levels_d = static_cast<double>(levels);
  if (!(beta + mu / delta <= levels_d * (1.0 + kAdmissibilitySlack)))
    throw NotAdmissibleError(
        "build_scheme: (beta, delta) outside the stability region S_{mu,L}: "
        "beta + mu/delta = " +
        std::to_string(beta + mu / delta) + " > L = " + std::to_string(levels));

  CondensationMap condensation = beta_condensation(partition, beta);
  std::vector<TransferOperator> blocks;
  blocks.reserve(partition.l);
  for (Index size : partition.sizes)
    blocks.push_back(TransferOperator::beta(beta, size));
  TransferOperator transfer = TransferOperator::block_diagonal(std::move(blocks));

  const DenseMatrix condensed = condensation.realized * measurement;  // l x k
  const double smax = sigma_max(condensed);
  const double smin = sigma_min(condensed);
  if (!(smin > kRankTol * smax))
    throw RankDeficientError("build_scheme: condensation V E is rank deficient");

  DenseMatrix f = least_squares_apply(condensed, condensation.realized);
  if (options.mode == PartitionMode::Truncate && partition.total() < m)
    f = f.pad_columns(m);
  if (max_abs_diff(f * e.matrix, DenseMatrix::identity(k)) > kDualityTol)
    throw RankDeficientError("build_scheme: duality check failed");

  const bool stable = mu >= norm_2_inf(measurement) &&
                      beta + mu / delta <= levels_d * (1.0 + kAdmissibilitySlack);

  return BetaDualScheme{e,
                        std::move(measurement),
                        std::move(partition),
                        std::move(condensation),
                        make_alphabet(levels, delta),
                        std::move(transfer),
                        DualFrame{std::move(f), e.label},
                        mu,
                        options.eta,
                        options.mu_policy,
                        smin,
                        stable};
}

QuantizationRecord encode(const BetaDualScheme& s, std::span<const double> x) {
  if (x.size() != s.frame.dimension())
    throw DimMismatchError("encode: x has dimension " +
                           std::to_string(x.size()) + ", scheme expects " +
                           std::to_string(s.frame.dimension()));
  if (norm_2(x) > 1.0 + kAdmissibilitySlack)
    throw InputOutOfRangeError("encode: ||x||_2 = " +
                               std::to_string(norm_2(x)) +
                               " outside the unit ball");
  const std::vector<double> y = s.measurement * x;
  if (norm_inf(y) > s.mu * (1.0 + kAdmissibilitySlack))
    throw InputOutOfRangeError("encode: ||Ex||_inf = " +
                               std::to_string(norm_inf(y)) + " exceeds mu = " +
                               std::to_string(s.mu));
  return greedy_quantize(s.transfer, s.alphabet, y, s.mu);
}

std::vector<double> decode(const BetaDualScheme& s, std::span<const double> q) {
  const Index m = s.frame.size();
  const Index m_used = s.measurement_count();
  if (q.size() == m) return s.dual.matrix * q;
  if (q.size() == m_used) {
    // Trailing dual columns are zero in truncate mode; use the head block.
    std::vector<double> padded(q.begin(), q.end());
    padded.resize(m, 0.0);
    return s.dual.matrix * std::span<const double>(padded);
  }
  throw DimMismatchError("decode: q has length " + std::to_string(q.size()) +
                         ", expected " + std::to_string(m) + " or " +
                         std::to_string(m_used));
}

double error_bound(const BetaDualScheme& s) {
  if (!(s.sigma_min_condensed > 0.0))
    throw RankDeficientError("error_bound: sigma_min(VE) = 0");
  const double beta_star = s.condensation.min_beta();
  const double m_star = static_cast<double>(s.partition.min_size());
  return s.alphabet.delta * std::sqrt(static_cast<double>(s.partition.l)) *
         std::pow(beta_star, -m_star) / s.sigma_min_condensed;
}

double distributed_error_bound(const DenseMatrix& v, const TransferOperator& h,
                               const DenseMatrix& e, double u_inf) {
  if (v.cols() != h.size() || v.cols() != e.rows())
    throw DimMismatchError("distributed_error_bound: V, H, E sizes must agree");
  const DenseMatrix condensed = v * e;
  const double smin = sigma_min(condensed);
  if (!(smin > 0.0))
    throw RankDeficientError("distributed_error_bound: sigma_min(VE) = 0");
  const double vh_norm = norm_inf_inf(v * h.realize());
  return std::sqrt(static_cast<double>(v.rows())) * u_inf * vh_norm / smin;
}

double hsc_condensation_norm(double beta, Index m) {
  if (m < 2 || m % 2 != 0)
    throw OddSizeError("hsc_condensation_norm requires even m >= 2");
  if (!(beta > 1.0)) throw BadBetaError("hsc_condensation_norm requires beta > 1");
  const double angle = std::numbers::pi / static_cast<double>(m);
  // |beta - e^{i pi/m}|^2 = beta^2 - 2 beta cos(pi/m) + 1
  const double denom_sq = beta * beta - 2.0 * beta * std::cos(angle) + 1.0;
  const double numer = 1.0 + std::pow(beta, -static_cast<double>(m));
  return std::sqrt(numer / denom_sq);
}

BetaSweepResult refine_beta(const Frame& e, std::size_t l, int levels,
                            const SchemeOptions& options,
                            std::size_t grid_points) {
  if (grid_points < 2) throw BadArgumentError("refine_beta: need >= 2 points");
  const Index m = e.size();
  const Index k = e.dimension();
  if (l < k || l > m) throw BadShapeError("refine_beta requires k <= l <= m");

  BlockPartition partition = make_partition(m, l, options.mode);
  const DenseMatrix measurement = options.mode == PartitionMode::Truncate
                                      ? e.matrix.top_rows(partition.total())
                                      : e.matrix;
  const double mu = resolve_mu(measurement, m, options);
  const double levels_d = static_cast<double>(levels);
  const double m_star = static_cast<double>(partition.min_size());

  // The bound is increasing in delta, so delta sits on the boundary
  // mu/(L - beta); sweep beta over (1, L).
  BetaSweepResult best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double beta = 1.0 + (levels_d - 1.0) * static_cast<double>(i) /
                                  static_cast<double>(grid_points + 1);
    const double delta = mu / (levels_d - beta);
    const CondensationMap v = beta_condensation(partition, beta);
    const double smin = sigma_min(v.realized * measurement);
    if (!(smin > 0.0)) continue;
    const double bound = delta * std::sqrt(static_cast<double>(l)) *
                         std::pow(beta, -m_star) / smin;
    if (bound < best.bound) best = {beta, delta, bound};
  }
  if (!(best.bound < std::numeric_limits<double>::infinity()))
    throw RankDeficientError("refine_beta: no admissible beta found");
  return best;
}

}  // namespace betaframe
