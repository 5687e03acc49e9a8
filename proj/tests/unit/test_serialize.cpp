#include <doctest.h>

#include <filesystem>

#include "betaframe/serialize.hpp"

using namespace betaframe;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "betaframe_ser_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.6789, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("frame CSV round-trip") {
  const Frame e = gaussian_frame(6, 2, 99);
  const auto path = temp_dir() / "frame.csv";
  write_frame_csv(e, path);
  const Frame back = read_frame_csv(path, "back");
  CHECK(back.matrix == e.matrix);
  CHECK(back.generator == "csv");

  const std::string header = frame_header_json(e);
  CHECK(header.find("\"m\": 6") != std::string::npos);
  CHECK(header.find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("CSV error paths") {
  const auto dir = temp_dir();
  CHECK_THROWS_AS(read_matrix_csv(dir / "missing.csv"), IoError);

  write_text_file(dir / "bad.csv", "1.0,oops\n");
  CHECK_THROWS_AS(read_matrix_csv(dir / "bad.csv"), IoError);

  write_text_file(dir / "ragged.csv", "1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(read_matrix_csv(dir / "ragged.csv"), IoError);
}

TEST_CASE("record JSON round-trip") {
  std::vector<TransferOperator> blocks;
  blocks.push_back(TransferOperator::beta(1.5, 2));
  blocks.push_back(TransferOperator::beta(1.5, 3));
  const TransferOperator h = TransferOperator::block_diagonal(std::move(blocks));
  const std::vector<double> y{0.1, -0.2, 0.3, 0.05, -0.4};
  const QuantizationRecord rec = greedy_quantize(h, make_alphabet(4, 0.5), y, 0.5);

  const QuantizationRecord back = record_from_json(record_to_json(rec));
  CHECK(back.y == rec.y);
  CHECK(back.q == rec.q);
  CHECK(back.u == rec.u);
  CHECK(back.alphabet.levels == rec.alphabet.levels);
  CHECK(back.alphabet.delta == rec.alphabet.delta);
  CHECK(residual_inf(back) < 1e-12);

  CHECK_THROWS_AS(record_from_json("{not json"), IoError);
  CHECK_THROWS_AS(record_from_json("{\"y\": [1]}"), IoError);
}

TEST_CASE("transfer descriptor round-trip") {
  const TransferOperator toep = TransferOperator::toeplitz({1.0, -0.5, 0.25}, 6);
  const TransferOperator back = transfer_from_json(transfer_to_json(toep));
  CHECK(back.kind() == TransferOperator::Kind::Toeplitz);
  CHECK(back.size() == 6);
  CHECK(back.taps() == toep.taps());
  CHECK(max_abs_diff(back.realize(), toep.realize()) == 0.0);
}

TEST_CASE("scheme spec JSON round-trip rebuilds the identical scheme") {
  const Frame e = gaussian_frame(12, 2, 5);
  SchemeOptions options;
  options.mode = PartitionMode::Truncate;
  options.mu_policy = MuPolicy::GaussianFourSqrtM;
  const BetaDualScheme s = build_scheme(e, 2, 4, options);

  FrameRef ref;
  ref.kind = FrameRef::Kind::Gaussian;
  ref.m = 12;
  ref.k = 2;
  ref.seed = 5;
  const SchemeSpec spec = spec_of(s, ref, "gaussian");
  const SchemeSpec parsed = scheme_spec_from_json(scheme_spec_to_json(spec));
  const BetaDualScheme rebuilt = scheme_from_spec(parsed);

  CHECK(rebuilt.frame.matrix == s.frame.matrix);
  CHECK(rebuilt.beta() == s.beta());
  CHECK(rebuilt.delta() == s.delta());
  CHECK(rebuilt.mu == s.mu);
  CHECK(max_abs_diff(rebuilt.dual.matrix, s.dual.matrix) == 0.0);
}

TEST_CASE("resolve_frame") {
  FrameRef hsc;
  hsc.kind = FrameRef::Kind::Hsc;
  hsc.m = 8;
  CHECK(resolve_frame(hsc).size() == 8);

  FrameRef csv;
  csv.kind = FrameRef::Kind::Csv;
  csv.path = (temp_dir() / "resolve.csv").string();
  write_frame_csv(gaussian_frame(5, 2, 3), csv.path);
  CHECK(resolve_frame(csv).size() == 5);
}
