#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "betaframe/duals.hpp"

namespace betaframe {

/// 17 significant digits; round-trips doubles exactly through text.
std::string format_double(double v);

std::string csv_join(const std::vector<std::string>& cells);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// ---- frames: CSV matrix (one row per frame vector) + JSON header ----

void write_frame_csv(const Frame& frame, const std::filesystem::path& path);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);
Frame read_frame_csv(const std::filesystem::path& path, std::string label = "");
std::vector<double> read_vector_csv(const std::filesystem::path& path);
std::string frame_header_json(const Frame& frame);

// ---- quantization records ----

std::string record_to_json(const QuantizationRecord& record);
QuantizationRecord record_from_json(const std::string& text);

std::string transfer_to_json(const TransferOperator& h);
TransferOperator transfer_from_json(const std::string& text);

// ---- schemes ----

/// Reference to a frame that can be re-materialized: a generator recipe
/// (hsc / gaussian) or a CSV file path.
struct FrameRef {
  enum class Kind { Hsc, Gaussian, Csv };
  Kind kind = Kind::Hsc;
  Index m = 0;
  Index k = 0;
  std::uint64_t seed = 0;  // gaussian
  std::string path;        // csv
  std::string label;
};

Frame resolve_frame(const FrameRef& ref);

/// Everything needed to rebuild a scheme deterministically: the frame
/// reference plus the resolved numeric parameters.
struct SchemeSpec {
  FrameRef frame;
  std::size_t l = 0;
  PartitionMode mode = PartitionMode::Balanced;
  int levels = 0;
  double mu = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  std::string mu_policy;  // informational: exact | gaussian | override
};

SchemeSpec spec_of(const BetaDualScheme& scheme, FrameRef ref,
                   std::string mu_policy_name);
BetaDualScheme scheme_from_spec(const SchemeSpec& spec);

std::string scheme_spec_to_json(const SchemeSpec& spec);
SchemeSpec scheme_spec_from_json(const std::string& text);

std::string partition_mode_name(PartitionMode mode);
PartitionMode partition_mode_from_name(const std::string& name);

}  // namespace betaframe
