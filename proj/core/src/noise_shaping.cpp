#include "betaframe/noise_shaping.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace betaframe {

Alphabet make_alphabet(int levels, double delta) {
  if (levels < 2)
    throw BadArgumentError("alphabet requires L >= 2, got " +
                           std::to_string(levels));
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw BadArgumentError("alphabet requires delta > 0");
  return Alphabet{levels, delta};
}

std::vector<double> alphabet_values(const Alphabet& a) {
  std::vector<double> values(static_cast<std::size_t>(a.levels));
  for (int j = 0; j < a.levels; ++j)
    values[static_cast<std::size_t>(j)] =
        static_cast<double>(2 * j - (a.levels - 1)) * a.delta;
  return values;
}

double round_to(const Alphabet& a, double w) {
  // Index of the nearest value a_j = (2j - (L-1)) * delta; midpoints go to
  // the smaller j via ceil(x - 1/2).
  const double j_real = (w / a.delta + static_cast<double>(a.levels - 1)) / 2.0;
  const double j = std::ceil(j_real - 0.5);
  int idx = 0;
  if (j >= static_cast<double>(a.levels - 1))
    idx = a.levels - 1;
  else if (j > 0.0)
    idx = static_cast<int>(j);
  return static_cast<double>(2 * idx - (a.levels - 1)) * a.delta;
}

TransferOperator TransferOperator::toeplitz(std::vector<double> taps,
                                            Index size) {
  if (taps.empty() || taps[0] != 1.0)
    throw BadArgumentError("toeplitz transfer requires h[0] = 1");
  if (size < 1) throw BadShapeError("toeplitz transfer requires size >= 1");
  for (double t : taps)
    if (!std::isfinite(t)) throw BadArgumentError("non-finite transfer tap");
  TransferOperator op;
  op.kind_ = Kind::Toeplitz;
  op.size_ = size;
  op.taps_ = std::move(taps);
  return op;
}

TransferOperator TransferOperator::beta(double beta, Index size) {
  if (!(beta > 1.0) || !std::isfinite(beta))
    throw BadBetaError("beta transfer requires beta > 1, got " +
                       std::to_string(beta));
  if (size < 1) throw BadShapeError("beta transfer requires size >= 1");
  TransferOperator op;
  op.kind_ = Kind::Beta;
  op.size_ = size;
  op.beta_ = beta;
  return op;
}

TransferOperator TransferOperator::block_diagonal(
    std::vector<TransferOperator> blocks) {
  if (blocks.empty())
    throw BadShapeError("block-diagonal transfer requires at least one block");
  TransferOperator op;
  op.kind_ = Kind::BlockDiagonal;
  op.size_ = 0;
  for (const auto& b : blocks) op.size_ += b.size();
  op.blocks_ = std::move(blocks);
  return op;
}

double TransferOperator::beta_value() const {
  if (kind_ != Kind::Beta) throw BadArgumentError("not a beta operator");
  return beta_;
}

const std::vector<double>& TransferOperator::taps() const {
  if (kind_ != Kind::Toeplitz) throw BadArgumentError("not a toeplitz operator");
  return taps_;
}

const std::vector<TransferOperator>& TransferOperator::blocks() const {
  if (kind_ != Kind::BlockDiagonal)
    throw BadArgumentError("not a block-diagonal operator");
  return blocks_;
}

DenseMatrix TransferOperator::realize() const {
  DenseMatrix h(size_, size_);
  switch (kind_) {
    case Kind::Beta:
      for (Index i = 0; i < size_; ++i) {
        h(i, i) = 1.0;
        if (i > 0) h(i, i - 1) = -beta_;
      }
      break;
    case Kind::Toeplitz:
      for (Index i = 0; i < size_; ++i)
        for (Index j = 0; j < taps_.size() && j <= i; ++j)
          h(i, i - j) = taps_[j];
      break;
    case Kind::BlockDiagonal: {
      Index offset = 0;
      for (const auto& block : blocks_) {
        const DenseMatrix sub = block.realize();
        for (Index i = 0; i < sub.rows(); ++i)
          for (Index j = 0; j < sub.cols(); ++j)
            h(offset + i, offset + j) = sub(i, j);
        offset += sub.rows();
      }
      break;
    }
  }
  return h;
}

double TransferOperator::tilde_norm() const {
  switch (kind_) {
    case Kind::Beta:
      return beta_;
    case Kind::Toeplitz: {
      double s = 0.0;
      for (double t : taps_) s += std::abs(t);
      return s - 1.0;
    }
    case Kind::BlockDiagonal: {
      double best = 0.0;
      for (const auto& b : blocks_) best = std::max(best, b.tilde_norm());
      return best;
    }
  }
  return 0.0;
}

std::vector<std::pair<Index, const TransferOperator*>>
TransferOperator::leaves() const {
  std::vector<std::pair<Index, const TransferOperator*>> out;
  if (kind_ != Kind::BlockDiagonal) {
    out.emplace_back(0, this);
    return out;
  }
  Index offset = 0;
  for (const auto& block : blocks_) {
    for (auto [sub_offset, leaf] : block.leaves())
      out.emplace_back(offset + sub_offset, leaf);
    offset += block.size();
  }
  return out;
}

bool admissible(double beta, double delta, double mu, int levels) {
  return beta > 1.0 && delta > 0.0 && mu >= 0.0 &&
         beta + mu / delta <= static_cast<double>(levels);
}

namespace {

// One block of the greedy recursion:
//   q_n = round_A(y_n + sum_j Htilde_{n,n-j} u_{n-j}),  u_n = argument - q_n,
// with Htilde = I - H, i.e. Htilde_{n,n-j} = -h_j for j >= 1.
void greedy_block(const TransferOperator& leaf, const Alphabet& a,
                  std::span<const double> y, std::span<double> q,
                  std::span<double> u) {
  const Index n = leaf.size();
  if (leaf.kind() == TransferOperator::Kind::Beta) {
    const double beta = leaf.beta_value();
    for (Index i = 0; i < n; ++i) {
      const double w = y[i] + (i > 0 ? beta * u[i - 1] : 0.0);
      q[i] = round_to(a, w);
      u[i] = w - q[i];
    }
    return;
  }
  const auto& taps = leaf.taps();
  for (Index i = 0; i < n; ++i) {
    double w = y[i];
    for (Index j = 1; j < taps.size() && j <= i; ++j) w -= taps[j] * u[i - j];
    q[i] = round_to(a, w);
    u[i] = w - q[i];
  }
}

}  // namespace

QuantizationRecord greedy_quantize(const TransferOperator& h, const Alphabet& a,
                                   std::span<const double> y, double mu) {
  if (y.size() != h.size())
    throw DimMismatchError("greedy_quantize: y has length " +
                           std::to_string(y.size()) + ", operator expects " +
                           std::to_string(h.size()));
  if (!(mu >= 0.0)) throw BadArgumentError("greedy_quantize: mu must be >= 0");
  const double levels = static_cast<double>(a.levels);
  const double condition = h.tilde_norm() + mu / a.delta;
  if (!(condition <= levels * (1.0 + kAdmissibilitySlack)))
    throw NotAdmissibleError(
        "greedy quantizer unstable: ||I-H||_{inf->inf} + mu/delta = " +
        std::to_string(condition) + " > L = " + std::to_string(a.levels) +
        "; (beta, delta) must lie in the stability region S_{mu,L}");
  if (norm_inf(y) > mu * (1.0 + kAdmissibilitySlack))
    throw InputOutOfRangeError("greedy_quantize: ||y||_inf = " +
                               std::to_string(norm_inf(y)) + " exceeds mu = " +
                               std::to_string(mu));

  QuantizationRecord record{std::vector<double>(y.begin(), y.end()),
                            std::vector<double>(y.size()),
                            std::vector<double>(y.size()), a, h};
  for (auto [offset, leaf] : h.leaves()) {
    const Index n = leaf->size();
    greedy_block(*leaf, a, std::span(record.y).subspan(offset, n),
                 std::span(record.q).subspan(offset, n),
                 std::span(record.u).subspan(offset, n));
  }
  return record;
}

std::vector<double> apply_transfer(const TransferOperator& h,
                                   std::span<const double> u) {
  if (u.size() != h.size())
    throw DimMismatchError("apply_transfer: length mismatch");
  std::vector<double> out(u.size(), 0.0);
  for (auto [offset, leaf] : h.leaves()) {
    const Index n = leaf->size();
    if (leaf->kind() == TransferOperator::Kind::Beta) {
      const double beta = leaf->beta_value();
      for (Index i = 0; i < n; ++i)
        out[offset + i] =
            u[offset + i] - (i > 0 ? beta * u[offset + i - 1] : 0.0);
    } else {
      const auto& taps = leaf->taps();
      for (Index i = 0; i < n; ++i) {
        double s = 0.0;
        for (Index j = 0; j < taps.size() && j <= i; ++j)
          s += taps[j] * u[offset + i - j];
        out[offset + i] = s;
      }
    }
  }
  return out;
}

double residual_inf(const QuantizationRecord& record) {
  const std::vector<double> hu = apply_transfer(record.transfer, record.u);
  double worst = 0.0;
  for (std::size_t i = 0; i < record.y.size(); ++i)
    worst = std::max(worst,
                     std::abs(record.y[i] - record.q[i] - hu[i]));
  return worst;
}

}  // namespace betaframe
