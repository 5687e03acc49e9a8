#include <doctest.h>

#include <cmath>
#include <random>

#include "betaframe/noise_shaping.hpp"
#include "betaframe/rng.hpp"

using namespace betaframe;

TEST_CASE("alphabet_values") {
  CHECK(alphabet_values(make_alphabet(2, 1.0)) == std::vector<double>{-1.0, 1.0});
  CHECK(alphabet_values(make_alphabet(3, 0.5)) ==
        std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(alphabet_values(make_alphabet(4, 0.25)) ==
        std::vector<double>{-0.75, -0.25, 0.25, 0.75});
  CHECK_THROWS_AS(make_alphabet(1, 1.0), BadArgumentError);
  CHECK_THROWS_AS(make_alphabet(2, 0.0), BadArgumentError);
}

TEST_CASE("round_to") {
  const Alphabet two = make_alphabet(2, 1.0);
  CHECK(round_to(two, 0.5) == 1.0);
  CHECK(round_to(two, -1.05) == -1.0);
  CHECK(round_to(two, 100.0) == 1.0);  // saturation

  // A(3, 0.5) = {-1, 0, 1}. w = 0.25 rounds to 0; the exact midpoints
  // +-0.5 break toward the smaller value.
  const Alphabet three = make_alphabet(3, 0.5);
  CHECK(round_to(three, 0.25) == 0.0);
  CHECK(std::abs(0.25 - round_to(three, 0.25)) <= three.delta);
  CHECK(round_to(three, 0.5) == 0.0);
  CHECK(round_to(three, -0.5) == -1.0);
  CHECK(round_to(make_alphabet(2, 1.0), 0.0) == -1.0);  // midpoint of {-1, 1}
}

TEST_CASE("round_to never deviates more than delta on [-L delta, L delta]") {
  auto engine = make_engine(42);
  for (int trial = 0; trial < 2000; ++trial) {
    const int levels = 2 + static_cast<int>(engine() % 7);
    std::uniform_real_distribution<double> delta_dist(0.05, 3.0);
    const double delta = delta_dist(engine);
    const Alphabet a = make_alphabet(levels, delta);
    std::uniform_real_distribution<double> w_dist(-levels * delta, levels * delta);
    const double w = w_dist(engine);
    CHECK(std::abs(w - round_to(a, w)) <= delta * (1.0 + 1e-12));
  }
}

TEST_CASE("realize") {
  const DenseMatrix h2 =
      TransferOperator::toeplitz({1.0, -1.0}, 2).realize();
  CHECK(h2 == DenseMatrix(2, 2, {1.0, 0.0, -1.0, 1.0}));

  const DenseMatrix b3 = TransferOperator::beta(2.0, 3).realize();
  CHECK(b3 == DenseMatrix(3, 3, {1, 0, 0, -2, 1, 0, 0, -2, 1}));

  std::vector<TransferOperator> blocks;
  blocks.push_back(TransferOperator::beta(2.0, 2));
  blocks.push_back(TransferOperator::beta(2.0, 2));
  const DenseMatrix blk =
      TransferOperator::block_diagonal(std::move(blocks)).realize();
  CHECK(blk == DenseMatrix(4, 4,
                           {1, 0, 0, 0,
                            -2, 1, 0, 0,
                            0, 0, 1, 0,
                            0, 0, -2, 1}));
}

TEST_CASE("transfer operator validation") {
  CHECK_THROWS_AS(TransferOperator::toeplitz({2.0}, 3), BadArgumentError);
  CHECK_THROWS_AS(TransferOperator::toeplitz({}, 3), BadArgumentError);
  CHECK_THROWS_AS(TransferOperator::beta(1.0, 2), BadBetaError);
  CHECK_THROWS_AS(TransferOperator::beta(2.0, 0), BadShapeError);
  CHECK_THROWS_AS(TransferOperator::block_diagonal({}), BadShapeError);
}

TEST_CASE("tilde_norm") {
  CHECK(TransferOperator::beta(1.7, 5).tilde_norm() == doctest::Approx(1.7));
  CHECK(TransferOperator::toeplitz({1.0, -1.0}, 4).tilde_norm() ==
        doctest::Approx(1.0));
  std::vector<TransferOperator> blocks;
  blocks.push_back(TransferOperator::beta(1.5, 3));
  blocks.push_back(TransferOperator::beta(2.0, 3));
  CHECK(TransferOperator::block_diagonal(std::move(blocks)).tilde_norm() ==
        doctest::Approx(2.0));
}

TEST_CASE("admissible") {
  CHECK(admissible(1.5, 1.0, 0.5, 2));
  CHECK(admissible(3.0, 0.7, 0.7, 4));   // boundary: 3 + 1 <= 4
  CHECK_FALSE(admissible(1.9, 1.0, 0.2, 2));
  CHECK_FALSE(admissible(1.0, 1.0, 0.5, 4));  // beta must exceed 1
}

TEST_CASE("greedy_quantize hand-executed recursion") {
  const TransferOperator h = TransferOperator::beta(1.5, 2);
  const Alphabet a = make_alphabet(2, 1.0);
  const std::vector<double> y{0.5, -0.3};
  const QuantizationRecord rec = greedy_quantize(h, a, y, 0.5);
  // Step 1: round(0.5) = 1, u = -0.5. Step 2: round(-0.3 + 1.5*(-0.5)) =
  // round(-1.05) = -1, u = -0.05.
  CHECK(rec.q == std::vector<double>{1.0, -1.0});
  CHECK(rec.u[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rec.u[1] == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(residual_inf(rec) < 1e-12);
}

TEST_CASE("greedy_quantize with H = I passes alphabet points through") {
  const TransferOperator h = TransferOperator::toeplitz({1.0}, 3);
  const Alphabet a = make_alphabet(4, 0.25);
  const std::vector<double> y{0.75, -0.25, 0.25};  // already alphabet values
  const QuantizationRecord rec = greedy_quantize(h, a, y, 1.0);
  CHECK(rec.q == y);
  for (double u : rec.u) CHECK(u == 0.0);
}

TEST_CASE("greedy_quantize rejects unstable and out-of-range input") {
  const Alphabet a = make_alphabet(2, 1.0);
  // beta + mu/delta = 1.9 + 0.5 > 2
  CHECK_THROWS_AS(greedy_quantize(TransferOperator::beta(1.9, 2), a,
                                  std::vector<double>{0.1, 0.1}, 0.5),
                  NotAdmissibleError);
  CHECK_THROWS_AS(greedy_quantize(TransferOperator::beta(1.4, 2), a,
                                  std::vector<double>{0.9, 0.1}, 0.5),
                  InputOutOfRangeError);
  CHECK_THROWS_AS(greedy_quantize(TransferOperator::beta(1.4, 3), a,
                                  std::vector<double>{0.1, 0.1}, 0.5),
                  DimMismatchError);
}

TEST_CASE("greedy_quantize accepts the degenerate mu = 0") {
  const QuantizationRecord rec =
      greedy_quantize(TransferOperator::beta(1.5, 3), make_alphabet(2, 1.0),
                      std::vector<double>{0.0, 0.0, 0.0}, 0.0);
  CHECK(residual_inf(rec) == 0.0);
  CHECK(norm_inf(rec.u) <= 1.0);
}

TEST_CASE("noise-shaping identity and state bound over random admissible configs") {
  auto engine = make_engine(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int levels = 2 + static_cast<int>(engine() % 5);
    const double beta = 1.0 + (levels - 1.0 - 0.05) * unit(engine) + 0.01;
    const double mu = 0.1 + 5.0 * unit(engine);
    // delta on or above the stability boundary mu/(L - beta); includes the
    // boundary itself at scale = 1.
    const double scale = trial % 10 == 0 ? 1.0 : 1.0 + 2.0 * unit(engine);
    const double delta = mu / (levels - beta) * scale;
    const Index m = 1 + static_cast<Index>(engine() % 24);

    TransferOperator h = TransferOperator::beta(beta, m);
    if (trial % 3 == 0 && m >= 2) {
      // split into two blocks to exercise the distributed path
      const Index m1 = 1 + static_cast<Index>(engine() % (m - 1));
      std::vector<TransferOperator> blocks;
      blocks.push_back(TransferOperator::beta(beta, m1));
      blocks.push_back(TransferOperator::beta(beta, m - m1));
      h = TransferOperator::block_diagonal(std::move(blocks));
    }

    std::vector<double> y(m);
    for (double& v : y) v = mu * (2.0 * unit(engine) - 1.0);

    const QuantizationRecord rec = greedy_quantize(h, make_alphabet(levels, delta), y, mu);
    CHECK(residual_inf(rec) <= 1e-12 * (1.0 + mu + levels * delta));
    CHECK(norm_inf(rec.u) <= delta + 1e-12 * (1.0 + delta));
  }
}

TEST_CASE("toeplitz greedy quantization stays stable too") {
  auto engine = make_engine(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> taps{1.0, -0.6, 0.3};  // ||h||_1 - 1 = 0.9
    const int levels = 2;
    const double mu = 1.0;
    const double delta = mu / (levels - 0.9) * (1.0 + unit(engine));
    const Index m = 2 + static_cast<Index>(engine() % 16);
    std::vector<double> y(m);
    for (double& v : y) v = mu * (2.0 * unit(engine) - 1.0);
    const QuantizationRecord rec =
        greedy_quantize(TransferOperator::toeplitz(taps, m),
                        make_alphabet(levels, delta), y, mu);
    CHECK(residual_inf(rec) < 1e-10);
    CHECK(norm_inf(rec.u) <= delta * (1.0 + 1e-12));
  }
}
