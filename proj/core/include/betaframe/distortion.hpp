#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betaframe/duals.hpp"

namespace betaframe {

enum class SampleMode { Sphere, Ball, Mixed };

/// Test points in the unit ball of R^k. Sphere: uniform on the unit sphere
/// (normalized Gaussians). Ball: uniform in the ball (radius U^{1/k}).
/// Mixed: the origin first, then alternating sphere/ball points.
std::vector<std::vector<double>> sample_ball(Index k, std::size_t n,
                                             std::uint64_t seed, SampleMode mode);

/// Monte Carlo surrogate for the worst-case reconstruction error over the
/// unit ball. Sampling only lowers the estimate, so comparisons against
/// upper bounds stay sound.
struct DistortionEstimate {
  double sup_error = 0.0;
  double mean_error = 0.0;
  std::size_t n_samples = 0;  // samples actually evaluated
  std::size_t n_skipped = 0;  // rejected because ||Ex||_inf exceeded mu
  std::string sampler;
  std::uint64_t seed = 0;
};

struct McOptions {
  SampleMode mode = SampleMode::Mixed;
  unsigned threads = 0;
  // Decode the real measurements y instead of q; isolates the FE = I path.
  bool unquantized = false;
};

DistortionEstimate mc_distortion(const BetaDualScheme& s, std::size_t n,
                                 std::uint64_t seed, const McOptions& options = {});

/// Exhaustive synthesis distortion over a finite point set:
/// max over points of min over q in A^m of ||x - F q||_2.
/// Guarded: throws TooLargeError when L^m exceeds 2e6 codewords.
double synthesis_distortion_brute(const DenseMatrix& f, const Alphabet& a,
                                  const std::vector<std::vector<double>>& points);

/// Volumetric floor L^{-m/k} on any L-level quantized reconstruction of the
/// unit ball from m measurements.
double volumetric_bound(int levels, Index m, Index k);

struct TailBound {
  double value;  // (10 + 8*sqrt(log 1/eps))^k * e^{l/2} * eps^{l-k}, raw
  bool viable;   // value < 1
};

/// Closed-form tail bound on P(sigma_min of an l x k standard Gaussian
/// matrix <= eps*sqrt(l)/2), for l > k and 0 < eps < 1. The raw value may
/// exceed 1; the viability flag reports whether it is informative.
TailBound tail_bound_A1(std::size_t l, std::size_t k, double eps);

struct TailReport {
  std::size_t l = 0;
  std::size_t k = 0;
  double eps = 0.0;
  std::size_t trials = 0;
  double empirical_prob = 0.0;
  double bound_a1 = 0.0;               // closed form; informative only for l > k
  std::optional<double> bound_p43;     // = eps, present when l == k
  double threshold = 0.0;              // sigma_min cutoff actually tested
};

/// Draws standard Gaussian l x k matrices and counts small-sigma_min events:
/// {sigma_min <= eps*sqrt(l)/2} for l > k, {sigma_min <= eps/sqrt(k)} for
/// l == k. Deterministic for fixed seed regardless of thread count.
TailReport svtail_experiment(std::size_t l, std::size_t k, double eps,
                             std::size_t trials, std::uint64_t seed,
                             unsigned threads = 0);

/// Empirical probability of {||E||_{2->2} > 4*sqrt(m)} for m x k standard
/// Gaussian frames; theory keeps it under e^{-2m}.
double gauss_norm_event(Index m, Index k, std::size_t trials,
                        std::uint64_t seed, unsigned threads = 0);

enum class LPolicy { EqualK, KPlusCeilEtaK };

struct DecayConfig {
  Index k = 2;
  int levels = 2;
  std::vector<Index> m_list;
  LPolicy l_policy = LPolicy::EqualK;
  double eta = 0.0;
  std::size_t frames_per_m = 100;
  std::size_t x_per_frame = 500;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct DecayRow {
  Index m = 0;
  std::size_t l = 0;
  double median_sup_error = 0.0;
  double max_sup_error = 0.0;
  double median_bound = 0.0;   // median of error_bound over frames
  double theory_bound = 0.0;   // 8e m^{3/2} L^{-(1-eta) floor(m/l)} (l = k)
                               // or 16e m^{3/2} l^{-1} L^{-(1-eta) floor(m/l)}
  std::size_t violations = 0;  // frames with measured sup > error_bound
};

struct DecayResult {
  std::vector<DecayRow> rows;
  double fitted_rate = 0.0;  // r^ with median error ~ C * L^{-r^ m}
  double target_rate = 0.0;  // (1 - eta) / l
};

/// Decay-rate study for Gaussian frames: per m, builds frames and schemes
/// (truncate mode, mu = 4*sqrt(m)), measures median-over-frames of
/// sup-over-x reconstruction error, and fits the exponential rate of
/// log_L(error) against m by least squares.
DecayResult gaussian_decay_experiment(const DecayConfig& config);

struct HscRow {
  Index m = 0;
  int levels = 0;
  double beta = 0.0;
  double delta = 0.0;
  double sup_error = 0.0;
  double mean_error = 0.0;
  double bound = 0.0;  // sqrt(2e) * m * L^{-m/2}
  std::size_t n_samples = 0;
  bool ok = false;  // sup_error <= bound
};

/// Harmonic semicircle study: for each (m, L) builds the l = 2 scheme with
/// beta = mL/(1+m), delta = (1+m)/L, mu = 1 and checks the measured sup
/// error against the closed-form bound sqrt(2e) * m * L^{-m/2}.
std::vector<HscRow> hsc_experiment(const std::vector<Index>& m_list,
                                   const std::vector<int>& levels_list,
                                   std::size_t n, std::uint64_t seed,
                                   unsigned threads = 0);

}  // namespace betaframe
