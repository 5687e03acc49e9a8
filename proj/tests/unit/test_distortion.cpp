#include <doctest.h>

#include <cmath>
#include <numbers>

#include "betaframe/distortion.hpp"
#include "betaframe/rng.hpp"

using namespace betaframe;

TEST_CASE("sample_ball stays in the unit ball and reproduces") {
  for (SampleMode mode : {SampleMode::Sphere, SampleMode::Ball, SampleMode::Mixed}) {
    const auto points = sample_ball(3, 200, 5, mode);
    CHECK(points.size() == 200);
    for (const auto& x : points)
      CHECK(norm_2(x) <= 1.0 + 1e-12);
  }

  for (const auto& x : sample_ball(4, 100, 6, SampleMode::Sphere))
    CHECK(norm_2(x) == doctest::Approx(1.0).epsilon(1e-12));

  const auto a = sample_ball(2, 50, 7, SampleMode::Mixed);
  const auto b = sample_ball(2, 50, 7, SampleMode::Mixed);
  CHECK(a == b);
  CHECK(norm_2(a[0]) == 0.0);  // mixed mode includes the origin
}

TEST_CASE("mc_distortion on the harmonic semicircle scheme") {
  const Frame e = hsc_frame(12);
  SchemeOptions options;
  options.beta_delta = {{12.0 * 4.0 / 13.0, 13.0 / 4.0}};
  const BetaDualScheme s = build_scheme(e, 2, 4, options);

  const DistortionEstimate est = mc_distortion(s, 2000, 21);
  CHECK(est.n_skipped == 0);
  CHECK(est.sup_error >= est.mean_error);
  const double bound = std::sqrt(2.0 * std::numbers::e) * 12.0 * std::pow(4.0, -6.0);
  CHECK(est.sup_error <= bound);
  CHECK(est.sup_error <= error_bound(s));

  // Unquantized hook isolates the F E = I path.
  McOptions unq;
  unq.unquantized = true;
  CHECK(mc_distortion(s, 500, 21, unq).sup_error <= 1e-9);
}

TEST_CASE("mc_distortion is deterministic regardless of thread count") {
  const Frame e = gaussian_frame(16, 2, 77);
  SchemeOptions options;
  options.mode = PartitionMode::Truncate;
  options.mu_policy = MuPolicy::GaussianFourSqrtM;
  const BetaDualScheme s = build_scheme(e, 2, 2, options);
  McOptions one;
  one.threads = 1;
  McOptions four;
  four.threads = 4;
  const DistortionEstimate a = mc_distortion(s, 400, 3, one);
  const DistortionEstimate b = mc_distortion(s, 400, 3, four);
  CHECK(a.sup_error == b.sup_error);
  CHECK(a.mean_error == b.mean_error);
  CHECK(a.n_samples == b.n_samples);
}

TEST_CASE("synthesis_distortion_brute") {
  // F = I2, A = {-1, 1}: the nearest codeword to (1,1)/sqrt(2) is (1,1).
  const Alphabet a = make_alphabet(2, 1.0);
  const std::vector<std::vector<double>> pts{
      {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}};
  const double d = synthesis_distortion_brute(DenseMatrix::identity(2), a, pts);
  CHECK(d == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

  // A point that is itself a codeword image has distance zero.
  const DenseMatrix f(2, 3, {0.3, -0.2, 0.5, 0.1, 0.4, -0.6});
  const std::vector<double> q0{1.0, -1.0, 1.0};
  const std::vector<double> img = f * q0;
  CHECK(synthesis_distortion_brute(f, a, {img}) <= 1e-12);

  // Enumeration guard.
  const DenseMatrix wide(1, 24);
  CHECK_THROWS_AS(synthesis_distortion_brute(wide, make_alphabet(4, 1.0), pts),
                  TooLargeError);
}

TEST_CASE("greedy pipeline error dominates the exhaustive synthesis oracle") {
  auto engine = make_engine(31);
  const auto points = sample_ball(2, 40, 13, SampleMode::Mixed);
  for (int trial = 0; trial < 6; ++trial) {
    const Frame e = gaussian_frame(4 + (trial % 3), 2, engine());
    SchemeOptions options;
    options.beta_delta = {{1.5, 2.0 * norm_2_inf(e.matrix)}};
    const BetaDualScheme s = build_scheme(e, 2, 2, options);

    double pipeline = 0.0;
    for (const auto& x : points) {
      const QuantizationRecord rec = encode(s, x);
      const std::vector<double> x_hat = decode(s, rec.q);
      double err_sq = 0.0;
      for (Index i = 0; i < 2; ++i)
        err_sq += (x[i] - x_hat[i]) * (x[i] - x_hat[i]);
      pipeline = std::max(pipeline, std::sqrt(err_sq));
    }
    const double oracle =
        synthesis_distortion_brute(s.dual.matrix, s.alphabet, points);
    CHECK(pipeline >= oracle - 1e-12);
  }
}

TEST_CASE("volumetric_bound") {
  CHECK(volumetric_bound(2, 4, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(volumetric_bound(2, 2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (Index m = 1; m <= 12; ++m) {
    const double b = volumetric_bound(2, m, 3);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("tail_bound_A1") {
  // Direct evaluation of the printed formula at (6, 2, 0.1).
  const double expected = std::pow(10.0 + 8.0 * std::sqrt(std::log(10.0)), 2) *
                          std::exp(3.0) * 1e-4;
  const TailBound b = tail_bound_A1(6, 2, 0.1);
  CHECK(b.value == doctest::Approx(expected).epsilon(1e-13));
  CHECK(b.viable == (b.value < 1.0));

  // Near eps = 1 the bound degenerates to >= 10^k e^{l/2} and is not viable.
  const TailBound near_one = tail_bound_A1(6, 2, 0.999999);
  CHECK(near_one.value > 1.0);
  CHECK_FALSE(near_one.viable);

  CHECK_THROWS_AS(tail_bound_A1(6, 2, 0.0), BadEpsError);
  CHECK_THROWS_AS(tail_bound_A1(6, 2, 1.0), BadEpsError);
  CHECK_THROWS_AS(tail_bound_A1(2, 2, 0.5), BadShapeError);

  // On the viable range the bound grows with eps (the eps^{l-k} factor
  // dominates the slowly shrinking log term).
  double prev = 0.0;
  for (double eps = 0.01; eps <= 0.10001; eps += 0.01) {
    const double v = tail_bound_A1(6, 2, eps).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("svtail_experiment") {
  const TailReport square = svtail_experiment(3, 3, 0.1, 20000, 100, 0);
  CHECK(square.bound_p43.has_value());
  CHECK(*square.bound_p43 == doctest::Approx(0.1));
  const double slack =
      4.0 * std::sqrt(0.1 * 0.9 / static_cast<double>(square.trials));
  CHECK(square.empirical_prob <= 0.1 + slack);

  const TailReport rect = svtail_experiment(6, 2, 0.1, 20000, 100, 0);
  CHECK_FALSE(rect.bound_p43.has_value());
  CHECK(rect.empirical_prob <= rect.bound_a1);

  CHECK_THROWS_AS(svtail_experiment(6, 2, 0.1, 0, 1, 0), BadArgumentError);
  CHECK_THROWS_AS(svtail_experiment(2, 3, 0.1, 10, 1, 0), BadShapeError);

  // Deterministic regardless of worker count.
  const TailReport t1 = svtail_experiment(4, 2, 0.2, 5000, 9, 1);
  const TailReport t4 = svtail_experiment(4, 2, 0.2, 5000, 9, 4);
  CHECK(t1.empirical_prob == t4.empirical_prob);
}

TEST_CASE("gauss_norm_event") {
  CHECK(gauss_norm_event(8, 2, 2000, 55, 0) == 0.0);
  const double f1 = gauss_norm_event(2, 1, 5000, 77, 1);
  const double f4 = gauss_norm_event(2, 1, 5000, 77, 4);
  CHECK(f1 == f4);
  CHECK(f1 <= std::exp(-4.0) + 4.0 * std::sqrt(std::exp(-4.0) / 5000.0));
}

TEST_CASE("hsc_experiment rows satisfy the closed-form bound") {
  const std::vector<HscRow> rows = hsc_experiment({4, 8}, {2, 4}, 1500, 42, 0);
  CHECK(rows.size() == 4);
  for (const HscRow& row : rows) {
    CHECK(row.ok);
    CHECK(row.sup_error <= row.bound);
    CHECK(row.n_samples == 1500);
  }
  CHECK_THROWS_AS(hsc_experiment({5}, {2}, 100, 1, 0), OddSizeError);

  // For L >= 3 the bound column decreases in m (L^{-m/2} dominates m).
  const std::vector<HscRow> l4 = hsc_experiment({4, 8, 12}, {4}, 50, 1, 0);
  CHECK(l4[0].bound > l4[1].bound);
  CHECK(l4[1].bound > l4[2].bound);
}

TEST_CASE("gaussian_decay_experiment fits a decaying rate at small scale") {
  DecayConfig config;
  config.k = 2;
  config.levels = 2;
  config.m_list = {8, 16, 24};
  config.frames_per_m = 25;
  config.x_per_frame = 150;
  config.seed = 2024;
  const DecayResult result = gaussian_decay_experiment(config);
  CHECK(result.rows.size() == 3);
  for (const DecayRow& row : result.rows) CHECK(row.violations == 0);
  CHECK(result.target_rate == doctest::Approx(0.5));
  CHECK(result.fitted_rate > 0.25);  // loose desk-scale sanity check
  CHECK(result.rows.front().median_sup_error > result.rows.back().median_sup_error);
}
