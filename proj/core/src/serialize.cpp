#include "betaframe/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace betaframe {

using nlohmann::json;

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path.string());
  stream << content;
  if (!stream) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_frame_csv(const Frame& frame, const std::filesystem::path& path) {
  std::string out;
  for (Index i = 0; i < frame.size(); ++i) {
    std::vector<std::string> cells;
    cells.reserve(frame.dimension());
    for (double v : frame.matrix.row(i)) cells.push_back(format_double(v));
    out += csv_join(cells);
  }
  write_text_file(path, out);
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<double> entries;
  Index rows = 0;
  Index cols = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream cells(line);
    std::string cell;
    Index row_cols = 0;
    while (std::getline(cells, cell, ',')) {
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &consumed);
      } catch (const std::exception&) {
        throw IoError("malformed CSV cell \"" + cell + "\" in " + path.string());
      }
      while (consumed < cell.size() &&
             (cell[consumed] == ' ' || cell[consumed] == '\r' ||
              cell[consumed] == '\t'))
        ++consumed;
      if (consumed != cell.size())
        throw IoError("malformed CSV cell \"" + cell + "\" in " + path.string());
      entries.push_back(value);
      ++row_cols;
    }
    if (rows == 0)
      cols = row_cols;
    else if (row_cols != cols)
      throw IoError("ragged CSV row in " + path.string());
    ++rows;
  }
  if (rows == 0) throw IoError("empty CSV: " + path.string());
  return DenseMatrix(rows, cols, std::move(entries));
}

Frame read_frame_csv(const std::filesystem::path& path, std::string label) {
  if (label.empty()) label = path.filename().string();
  return make_frame(read_matrix_csv(path), std::move(label), std::nullopt, "csv");
}

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
  const DenseMatrix m = read_matrix_csv(path);
  if (m.rows() != 1 && m.cols() != 1)
    throw IoError("vector CSV must be a single row or column: " + path.string());
  return std::vector<double>(m.entries().begin(), m.entries().end());
}

std::string frame_header_json(const Frame& frame) {
  json j;
  j["m"] = frame.size();
  j["k"] = frame.dimension();
  j["label"] = frame.label;
  if (frame.seed)
    j["seed"] = *frame.seed;
  else
    j["seed"] = nullptr;
  j["generator"] = frame.generator;
  return j.dump(2) + "\n";
}

namespace {

json transfer_json(const TransferOperator& h) {
  json j;
  switch (h.kind()) {
    case TransferOperator::Kind::Beta:
      j["kind"] = "beta";
      j["beta"] = h.beta_value();
      j["size"] = h.size();
      break;
    case TransferOperator::Kind::Toeplitz:
      j["kind"] = "toeplitz";
      j["h"] = h.taps();
      j["size"] = h.size();
      break;
    case TransferOperator::Kind::BlockDiagonal: {
      j["kind"] = "block";
      json blocks = json::array();
      for (const auto& b : h.blocks()) blocks.push_back(transfer_json(b));
      j["blocks"] = std::move(blocks);
      break;
    }
  }
  return j;
}

TransferOperator transfer_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "beta")
    return TransferOperator::beta(j.at("beta").get<double>(),
                                  j.at("size").get<Index>());
  if (kind == "toeplitz")
    return TransferOperator::toeplitz(j.at("h").get<std::vector<double>>(),
                                      j.at("size").get<Index>());
  if (kind == "block") {
    std::vector<TransferOperator> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back(transfer_from(b));
    return TransferOperator::block_diagonal(std::move(blocks));
  }
  throw IoError("unknown transfer kind: " + kind);
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError(std::string("malformed JSON ") + what);
  return j;
}

}  // namespace

std::string transfer_to_json(const TransferOperator& h) {
  return transfer_json(h).dump();
}

TransferOperator transfer_from_json(const std::string& text) {
  return transfer_from(parse(text, "transfer descriptor"));
}

std::string record_to_json(const QuantizationRecord& record) {
  json j;
  j["y"] = record.y;
  j["q"] = record.q;
  j["u"] = record.u;
  j["L"] = record.alphabet.levels;
  j["delta"] = record.alphabet.delta;
  j["transfer"] = transfer_json(record.transfer);
  return j.dump(2) + "\n";
}

QuantizationRecord record_from_json(const std::string& text) {
  const json j = parse(text, "quantization record");
  try {
    QuantizationRecord record{
        j.at("y").get<std::vector<double>>(),
        j.at("q").get<std::vector<double>>(),
        j.at("u").get<std::vector<double>>(),
        make_alphabet(j.at("L").get<int>(), j.at("delta").get<double>()),
        transfer_from(j.at("transfer"))};
    if (record.q.size() != record.y.size() ||
        record.u.size() != record.y.size() ||
        record.y.size() != record.transfer.size())
      throw IoError("quantization record: inconsistent lengths");
    return record;
  } catch (const json::exception& e) {
    throw IoError(std::string("quantization record: ") + e.what());
  }
}

Frame resolve_frame(const FrameRef& ref) {
  switch (ref.kind) {
    case FrameRef::Kind::Hsc:
      return hsc_frame(ref.m);
    case FrameRef::Kind::Gaussian:
      return gaussian_frame(ref.m, ref.k, ref.seed);
    case FrameRef::Kind::Csv:
      return read_frame_csv(ref.path, ref.label);
  }
  throw BadArgumentError("unknown frame reference kind");
}

namespace {

std::string frame_ref_kind_name(FrameRef::Kind kind) {
  switch (kind) {
    case FrameRef::Kind::Hsc: return "hsc";
    case FrameRef::Kind::Gaussian: return "gaussian";
    case FrameRef::Kind::Csv: return "csv";
  }
  return "?";
}

FrameRef::Kind frame_ref_kind(const std::string& name) {
  if (name == "hsc") return FrameRef::Kind::Hsc;
  if (name == "gaussian") return FrameRef::Kind::Gaussian;
  if (name == "csv") return FrameRef::Kind::Csv;
  throw IoError("unknown frame kind: " + name);
}

json frame_ref_json(const FrameRef& ref) {
  json j;
  j["kind"] = frame_ref_kind_name(ref.kind);
  j["m"] = ref.m;
  j["k"] = ref.k;
  if (ref.kind == FrameRef::Kind::Gaussian) j["seed"] = ref.seed;
  if (ref.kind == FrameRef::Kind::Csv) j["path"] = ref.path;
  if (!ref.label.empty()) j["label"] = ref.label;
  return j;
}

FrameRef frame_ref_from(const json& j) {
  FrameRef ref;
  ref.kind = frame_ref_kind(j.at("kind").get<std::string>());
  ref.m = j.at("m").get<Index>();
  ref.k = j.value("k", Index{0});
  ref.seed = j.value("seed", std::uint64_t{0});
  ref.path = j.value("path", std::string{});
  ref.label = j.value("label", std::string{});
  return ref;
}

}  // namespace

std::string partition_mode_name(PartitionMode mode) {
  return mode == PartitionMode::Truncate ? "truncate" : "balanced";
}

PartitionMode partition_mode_from_name(const std::string& name) {
  if (name == "truncate") return PartitionMode::Truncate;
  if (name == "balanced") return PartitionMode::Balanced;
  throw IoError("unknown partition mode: " + name);
}

SchemeSpec spec_of(const BetaDualScheme& scheme, FrameRef ref,
                   std::string mu_policy_name) {
  SchemeSpec spec;
  spec.frame = std::move(ref);
  spec.l = scheme.partition.l;
  spec.mode = scheme.partition.mode;
  spec.levels = scheme.levels();
  spec.mu = scheme.mu;
  spec.beta = scheme.beta();
  spec.delta = scheme.delta();
  spec.eta = scheme.eta;
  spec.mu_policy = std::move(mu_policy_name);
  return spec;
}

BetaDualScheme scheme_from_spec(const SchemeSpec& spec) {
  const Frame frame = resolve_frame(spec.frame);
  SchemeOptions options;
  options.mode = spec.mode;
  options.mu_policy = MuPolicy::Override;
  options.mu_override = spec.mu;
  options.eta = spec.eta;
  options.beta_delta = {{spec.beta, spec.delta}};
  return build_scheme(frame, spec.l, spec.levels, options);
}

std::string scheme_spec_to_json(const SchemeSpec& spec) {
  json j;
  j["frame"] = frame_ref_json(spec.frame);
  j["l"] = spec.l;
  j["mode"] = partition_mode_name(spec.mode);
  j["L"] = spec.levels;
  j["mu"] = spec.mu;
  j["beta"] = spec.beta;
  j["delta"] = spec.delta;
  j["eta"] = spec.eta;
  j["mu_policy"] = spec.mu_policy;
  return j.dump();
}

SchemeSpec scheme_spec_from_json(const std::string& text) {
  const json j = parse(text, "scheme spec");
  try {
    SchemeSpec spec;
    spec.frame = frame_ref_from(j.at("frame"));
    spec.l = j.at("l").get<std::size_t>();
    spec.mode = partition_mode_from_name(j.at("mode").get<std::string>());
    spec.levels = j.at("L").get<int>();
    spec.mu = j.at("mu").get<double>();
    spec.beta = j.at("beta").get<double>();
    spec.delta = j.at("delta").get<double>();
    spec.eta = j.value("eta", 0.0);
    spec.mu_policy = j.value("mu_policy", std::string{"override"});
    return spec;
  } catch (const json::exception& e) {
    throw IoError(std::string("scheme spec: ") + e.what());
  }
}

}  // namespace betaframe
