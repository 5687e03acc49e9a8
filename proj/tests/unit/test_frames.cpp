#include <doctest.h>

#include <cmath>

#include "betaframe/frames.hpp"
#include "betaframe/rng.hpp"

using namespace betaframe;

TEST_CASE("gaussian_frame is deterministic per (seed, m, k)") {
  const Frame a = gaussian_frame(4, 2, 7);
  const Frame b = gaussian_frame(4, 2, 7);
  CHECK(a.matrix == b.matrix);
  CHECK(a.seed == 7);

  const Frame c = gaussian_frame(4, 2, 8);
  CHECK(max_abs_diff(a.matrix, c.matrix) >  1e-6);
}

TEST_CASE("gaussian_frame entries look standard normal") {
  const Frame e = gaussian_frame(200, 2, 1);
  double mean = 0.0;
  for (double v : e.matrix.entries()) mean += v;
  mean /= 400.0;
  CHECK(mean > -0.25);  // 3.5 sigma / sqrt(400) band
  CHECK(mean < 0.25);
}

TEST_CASE("gaussian_frame rejects bad shapes") {
  CHECK_THROWS_AS(gaussian_frame(2, 3, 1), BadShapeError);
  CHECK_THROWS_AS(gaussian_frame(0, 0, 1), BadShapeError);
}

TEST_CASE("hsc_frame rows and shape") {
  const Frame two = hsc_frame(2);
  CHECK(std::abs(two.matrix(0, 0)) < 1e-15);
  CHECK(two.matrix(0, 1) == doctest::Approx(1.0));
  CHECK(two.matrix(1, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(two.matrix(1, 1)) < 1e-15);

  const Frame four = hsc_frame(4);
  CHECK(std::abs(four.matrix(1, 0)) < 1e-15);
  CHECK(four.matrix(1, 1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(hsc_frame(5), OddSizeError);
  CHECK_THROWS_AS(hsc_frame(0), BadShapeError);

  for (Index m = 2; m <= 40; m += 2)
    CHECK(norm_2_inf(hsc_frame(m).matrix) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hsc second half is the 90-degree rotation of the first half") {
  for (Index m = 2; m <= 40; m += 2) {
    const Frame e = hsc_frame(m);
    const Index half = m / 2;
    for (Index i = 0; i < half; ++i) {
      const double x = e.matrix(i, 0);
      const double y = e.matrix(i, 1);
      CHECK(std::abs(e.matrix(i + half, 0) - (-y)) < 1e-12);
      CHECK(std::abs(e.matrix(i + half, 1) - x) < 1e-12);
    }
  }
}

TEST_CASE("measure") {
  const Frame e = hsc_frame(2);
  const std::vector<double> x{1.0, 0.0};
  const std::vector<double> y = measure(e, x);
  CHECK(std::abs(y[0]) < 1e-15);
  CHECK(y[1] == doctest::Approx(-1.0));

  const std::vector<double> zero{0.0, 0.0};
  for (double v : measure(e, zero)) CHECK(v == 0.0);

  const Frame ones = make_frame(DenseMatrix(2, 1, {1.0, 1.0}), "ones");
  const std::vector<double> c{3.5};
  const std::vector<double> yc = measure(ones, c);
  CHECK(yc[0] == 3.5);
  CHECK(yc[1] == 3.5);

  CHECK_THROWS_AS(measure(e, c), DimMismatchError);
}

TEST_CASE("canonical_dual") {
  const Frame eye = make_frame(DenseMatrix::identity(3), "I3");
  CHECK(max_abs_diff(canonical_dual(eye).matrix, DenseMatrix::identity(3)) <
        1e-14);

  const Frame ones = make_frame(DenseMatrix(2, 1, {1.0, 1.0}), "ones");
  const DualFrame f = canonical_dual(ones);
  CHECK(f.matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(f.matrix(0, 1) == doctest::Approx(0.5).epsilon(1e-13));

  const Frame hsc = hsc_frame(4);
  CHECK(max_abs_diff(canonical_dual(hsc).matrix * hsc.matrix,
                     DenseMatrix::identity(2)) < 1e-12);
}

TEST_CASE("is_dual") {
  const Frame eye = make_frame(DenseMatrix::identity(2), "I2");
  CHECK(is_dual(DenseMatrix::identity(2), eye, 1e-12));
  CHECK_FALSE(is_dual(2.0 * DenseMatrix::identity(2), eye, 1e-9));
  CHECK_THROWS_AS(is_dual(DenseMatrix::identity(3), eye, 1e-9),
                  DimMismatchError);
}

TEST_CASE("canonical duality holds across random frames") {
  auto engine = make_engine(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = 1 + static_cast<Index>(engine() % 4);
    const Index m = k + static_cast<Index>(engine() % 12);
    const Frame e = gaussian_frame(m, k, engine());
    CHECK(is_dual(canonical_dual(e).matrix, e, 1e-9));
  }
}

TEST_CASE("sigma_max of gaussian frames stays below 4 sqrt(m)") {
  // Event M at (m,k) = (32,4): expect essentially no exceedances.
  const Index m = 32, k = 4;
  const double cutoff = 4.0 * std::sqrt(static_cast<double>(m));
  std::size_t ok = 0;
  const std::size_t draws = 10000;
  for (std::size_t t = 0; t < draws; ++t) {
    const Frame e = gaussian_frame(m, k, derive_seed(99, 0, t));
    if (sigma_max(e.matrix) <= cutoff) ++ok;
  }
  CHECK(ok >= draws * 99 / 100);
}

TEST_CASE("make_frame validates the spanning condition") {
  CHECK_THROWS_AS(make_frame(DenseMatrix(3, 2, {1, 0, 2, 0, 3, 0}), "flat"),
                  RankDeficientError);
  CHECK_THROWS_AS(make_frame(DenseMatrix(1, 2, {1, 0}), "wide"), BadShapeError);
}
