#include "betaframe/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "betaframe/parallel.hpp"
#include "betaframe/rng.hpp"

namespace betaframe {

namespace {

constexpr std::uint64_t kTagSample = 0x53414d50;   // "SAMP"
constexpr std::uint64_t kTagTail = 0x5441494c;     // "TAIL"
constexpr std::uint64_t kTagNorm = 0x4e4f524d;     // "NORM"
constexpr std::uint64_t kTagFrame = 0x4652414d;    // "FRAM"
constexpr std::uint64_t kTagPoints = 0x504f494e;   // "POIN"

std::vector<double> unit_direction(std::mt19937_64& engine, Index k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(k);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (Index i = 0; i < k; ++i) {
      x[i] = normal(engine);
      norm_sq += x[i] * x[i];
    }
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : x) v *= inv;
  return x;
}

std::string mode_name(SampleMode mode) {
  switch (mode) {
    case SampleMode::Sphere: return "sphere";
    case SampleMode::Ball: return "ball";
    case SampleMode::Mixed: return "mixed";
  }
  return "?";
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<std::vector<double>> sample_ball(Index k, std::size_t n,
                                             std::uint64_t seed,
                                             SampleMode mode) {
  if (k < 1) throw BadShapeError("sample_ball requires k >= 1");
  std::vector<std::vector<double>> points;
  points.reserve(n);
  auto engine = make_engine(derive_seed(seed, kTagSample));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (mode == SampleMode::Mixed && i == 0) {
      points.emplace_back(k, 0.0);  // the origin
      continue;
    }
    const bool sphere =
        mode == SampleMode::Sphere || (mode == SampleMode::Mixed && i % 2 == 1);
    std::vector<double> x = unit_direction(engine, k);
    if (!sphere) {
      const double radius =
          std::pow(uniform(engine), 1.0 / static_cast<double>(k));
      for (double& v : x) v *= radius;
    }
    points.push_back(std::move(x));
  }
  return points;
}

DistortionEstimate mc_distortion(const BetaDualScheme& s, std::size_t n,
                                 std::uint64_t seed, const McOptions& options) {
  if (!s.stable)
    throw NotAdmissibleError("mc_distortion: scheme is not marked stable");
  const auto points = sample_ball(s.frame.dimension(), n, seed, options.mode);

  std::vector<double> errors(points.size(),
                             -std::numeric_limits<double>::infinity());
  std::vector<char> skipped(points.size(), 0);
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    const auto& x = points[i];
    const std::vector<double> y = s.measurement * std::span<const double>(x);
    if (norm_inf(y) > s.mu * (1.0 + kAdmissibilitySlack)) {
      skipped[i] = 1;
      return;
    }
    std::vector<double> x_hat;
    if (options.unquantized) {
      x_hat = decode(s, y);
    } else {
      const QuantizationRecord record =
          greedy_quantize(s.transfer, s.alphabet, y, s.mu);
      x_hat = decode(s, record.q);
    }
    double err_sq = 0.0;
    for (Index j = 0; j < x.size(); ++j) {
      const double d = x[j] - x_hat[j];
      err_sq += d * d;
    }
    errors[i] = std::sqrt(err_sq);
  });

  DistortionEstimate est;
  est.sampler = mode_name(options.mode);
  est.seed = seed;
  double sup = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (skipped[i]) {
      ++est.n_skipped;
      continue;
    }
    sup = std::max(sup, errors[i]);
    sum += errors[i];
    ++est.n_samples;
  }
  est.sup_error = sup;
  est.mean_error = est.n_samples > 0 ? sum / static_cast<double>(est.n_samples)
                                     : 0.0;
  return est;
}

double synthesis_distortion_brute(const DenseMatrix& f, const Alphabet& a,
                                  const std::vector<std::vector<double>>& points) {
  const Index k = f.rows();
  const Index m = f.cols();
  double codewords_d = 1.0;
  for (Index i = 0; i < m; ++i) codewords_d *= static_cast<double>(a.levels);
  if (codewords_d > 2e6)
    throw TooLargeError("synthesis_distortion_brute: L^m = " +
                        std::to_string(codewords_d) +
                        " exceeds the 2e6 enumeration guard");
  const std::size_t codeword_count = static_cast<std::size_t>(codewords_d);
  const std::vector<double> values = alphabet_values(a);

  // Enumerate all F q by a mixed-radix odometer; each digit change updates
  // the synthesis image in O(k).
  std::vector<double> images(codeword_count * k);
  std::vector<int> digits(m, 0);
  std::vector<double> current(k, 0.0);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < m; ++j) current[i] += values[0] * f(i, j);
  for (std::size_t c = 0;; ++c) {
    std::copy(current.begin(), current.end(), images.begin() + c * k);
    if (c + 1 == codeword_count) break;
    Index pos = 0;
    while (digits[pos] + 1 == a.levels) {
      const double delta_v = values[0] - values[static_cast<std::size_t>(digits[pos])];
      digits[pos] = 0;
      for (Index i = 0; i < k; ++i) current[i] += delta_v * f(i, pos);
      ++pos;
    }
    const double delta_v = values[static_cast<std::size_t>(digits[pos] + 1)] -
                           values[static_cast<std::size_t>(digits[pos])];
    digits[pos] += 1;
    for (Index i = 0; i < k; ++i) current[i] += delta_v * f(i, pos);
  }

  double worst = 0.0;
  for (const auto& x : points) {
    if (x.size() != k)
      throw DimMismatchError("synthesis_distortion_brute: point dimension");
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < codeword_count; ++c) {
      double d_sq = 0.0;
      const double* img = images.data() + c * k;
      for (Index i = 0; i < k; ++i) {
        const double d = x[i] - img[i];
        d_sq += d * d;
      }
      best_sq = std::min(best_sq, d_sq);
    }
    worst = std::max(worst, std::sqrt(best_sq));
  }
  return worst;
}

double volumetric_bound(int levels, Index m, Index k) {
  if (levels < 2) throw BadArgumentError("volumetric_bound requires L >= 2");
  if (k < 1) throw BadShapeError("volumetric_bound requires k >= 1");
  return std::pow(static_cast<double>(levels),
                  -static_cast<double>(m) / static_cast<double>(k));
}

TailBound tail_bound_A1(std::size_t l, std::size_t k, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw BadEpsError("tail_bound_A1 requires 0 < eps < 1");
  if (l <= k) throw BadShapeError("tail_bound_A1 requires l > k");
  const double value =
      std::pow(10.0 + 8.0 * std::sqrt(std::log(1.0 / eps)),
               static_cast<double>(k)) *
      std::exp(static_cast<double>(l) / 2.0) *
      std::pow(eps, static_cast<double>(l - k));
  return TailBound{value, value < 1.0};
}

TailReport svtail_experiment(std::size_t l, std::size_t k, double eps,
                             std::size_t trials, std::uint64_t seed,
                             unsigned threads) {
  if (k < 1 || l < k)
    throw BadShapeError("svtail_experiment requires l >= k >= 1");
  if (trials == 0) throw BadArgumentError("svtail_experiment requires trials >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw BadEpsError("svtail_experiment requires 0 < eps < 1");

  TailReport report;
  report.l = l;
  report.k = k;
  report.eps = eps;
  report.trials = trials;
  report.threshold = l == k
                         ? eps / std::sqrt(static_cast<double>(k))
                         : eps * std::sqrt(static_cast<double>(l)) / 2.0;
  if (l == k) {
    report.bound_p43 = eps;
    report.bound_a1 = std::numeric_limits<double>::quiet_NaN();
  } else {
    report.bound_a1 = tail_bound_A1(l, k, eps).value;
  }

  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto engine = make_engine(derive_seed(seed, kTagTail, t));
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix omega(l, k);
    for (Index i = 0; i < l; ++i)
      for (Index j = 0; j < k; ++j) omega(i, j) = normal(engine);
    hit[t] = sigma_min(omega) <= report.threshold ? 1 : 0;
  });
  std::size_t count = 0;
  for (char h : hit) count += static_cast<std::size_t>(h);
  report.empirical_prob =
      static_cast<double>(count) / static_cast<double>(trials);
  return report;
}

double gauss_norm_event(Index m, Index k, std::size_t trials,
                        std::uint64_t seed, unsigned threads) {
  if (k < 1 || m < k) throw BadShapeError("gauss_norm_event requires m >= k >= 1");
  if (trials == 0) throw BadArgumentError("gauss_norm_event requires trials >= 1");
  const double cutoff = 4.0 * std::sqrt(static_cast<double>(m));
  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto engine = make_engine(derive_seed(seed, kTagNorm, t));
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix e(m, k);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < k; ++j) e(i, j) = normal(engine);
    hit[t] = sigma_max(e) > cutoff ? 1 : 0;
  });
  std::size_t count = 0;
  for (char h : hit) count += static_cast<std::size_t>(h);
  return static_cast<double>(count) / static_cast<double>(trials);
}

DecayResult gaussian_decay_experiment(const DecayConfig& config) {
  if (config.m_list.empty())
    throw BadArgumentError("gaussian_decay_experiment: empty m list");
  if (config.frames_per_m == 0 || config.x_per_frame == 0)
    throw BadArgumentError("gaussian_decay_experiment: need frames and samples");
  const std::size_t l =
      config.l_policy == LPolicy::EqualK
          ? config.k
          : config.k + static_cast<std::size_t>(std::ceil(
                           config.eta * static_cast<double>(config.k)));

  DecayResult result;
  result.target_rate = (1.0 - config.eta) / static_cast<double>(l);

  for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
    const Index m = config.m_list[mi];
    if (m < l)
      throw BadShapeError("gaussian_decay_experiment: m < l at m = " +
                          std::to_string(m));
    std::vector<double> sup_errors(config.frames_per_m, 0.0);
    std::vector<double> bounds(config.frames_per_m, 0.0);
    std::vector<char> violated(config.frames_per_m, 0);

    parallel_for(config.frames_per_m, config.threads, [&](std::size_t fi) {
      const Frame frame = gaussian_frame(
          m, config.k, derive_seed(config.seed, kTagFrame, mi * 100000 + fi));
      SchemeOptions options;
      options.mode = PartitionMode::Truncate;
      options.mu_policy = MuPolicy::GaussianFourSqrtM;
      options.eta = config.eta;
      const BetaDualScheme scheme = build_scheme(frame, l, config.levels, options);
      McOptions mc;
      mc.mode = SampleMode::Mixed;
      mc.threads = 1;  // parallelism lives at the frame level
      const DistortionEstimate est = mc_distortion(
          scheme, config.x_per_frame,
          derive_seed(config.seed, kTagPoints, mi * 100000 + fi), mc);
      sup_errors[fi] = est.sup_error;
      bounds[fi] = error_bound(scheme);
      violated[fi] = est.sup_error > bounds[fi] * (1.0 + 1e-9) ? 1 : 0;
    });

    DecayRow row;
    row.m = m;
    row.l = l;
    row.median_sup_error = median_of(sup_errors);
    row.max_sup_error = *std::max_element(sup_errors.begin(), sup_errors.end());
    row.median_bound = median_of(bounds);
    const double rate_exp =
        (1.0 - config.eta) * static_cast<double>(m / l);
    const double prefactor =
        l == config.k
            ? 8.0 * std::numbers::e * std::pow(static_cast<double>(m), 1.5)
            : 16.0 * std::numbers::e * std::pow(static_cast<double>(m), 1.5) /
                  static_cast<double>(l);
    row.theory_bound =
        prefactor * std::pow(static_cast<double>(config.levels), -rate_exp);
    for (char v : violated) row.violations += static_cast<std::size_t>(v);
    result.rows.push_back(row);
  }

  // Least-squares slope of log_L(median error) against m; the fitted decay
  // rate is its negation.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double log_l = std::log(static_cast<double>(config.levels));
  std::size_t n_fit = 0;
  for (const DecayRow& row : result.rows) {
    if (!(row.median_sup_error > 0.0)) continue;
    const double x = static_cast<double>(row.m);
    const double y = std::log(row.median_sup_error) / log_l;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n_fit;
  }
  if (n_fit >= 2) {
    const double n = static_cast<double>(n_fit);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    result.fitted_rate = -slope;
  }
  return result;
}

std::vector<HscRow> hsc_experiment(const std::vector<Index>& m_list,
                                   const std::vector<int>& levels_list,
                                   std::size_t n, std::uint64_t seed,
                                   unsigned threads) {
  if (m_list.empty() || levels_list.empty())
    throw BadArgumentError("hsc_experiment: empty parameter list");
  std::vector<HscRow> rows;
  for (Index m : m_list) {
    const Frame frame = hsc_frame(m);  // throws OddSizeError for odd m
    for (int levels : levels_list) {
      const double m_d = static_cast<double>(m);
      const double levels_d = static_cast<double>(levels);
      SchemeOptions options;
      options.mode = PartitionMode::Balanced;
      options.mu_policy = MuPolicy::ExactRowNorm;  // = 1 for unit-norm rows
      options.beta_delta = {{m_d * levels_d / (1.0 + m_d), (1.0 + m_d) / levels_d}};
      const BetaDualScheme scheme = build_scheme(frame, 2, levels, options);

      McOptions mc;
      mc.mode = SampleMode::Mixed;
      mc.threads = threads;
      const DistortionEstimate est = mc_distortion(
          scheme, n, derive_seed(seed, kTagPoints, m * 1000 + static_cast<Index>(levels)),
          mc);

      HscRow row;
      row.m = m;
      row.levels = levels;
      row.beta = scheme.beta();
      row.delta = scheme.delta();
      row.sup_error = est.sup_error;
      row.mean_error = est.mean_error;
      row.bound = std::sqrt(2.0 * std::numbers::e) * m_d *
                  std::pow(levels_d, -m_d / 2.0);
      row.n_samples = est.n_samples;
      row.ok = row.sup_error <= row.bound;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace betaframe
