#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace betaframe::cli {

struct CommonArgs {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string manifest;  // empty -> "<out>.manifest.json"
  std::string format = "csv";
  std::string config;    // consumed before parsing; kept for the manifest
};

struct FrameArgs {
  std::uint64_t hsc_m = 0;        // --hsc M
  std::string gaussian_spec;      // --gaussian "M,K"
  std::string frame_csv;          // --frame-csv PATH
  std::uint64_t frame_seed = 0;   // gaussian only
  bool frame_seed_given = false;
};

struct QuantizeArgs {
  CommonArgs common;
  FrameArgs frame;
  std::string x_inline;  // "c1,c2,..."
  std::string x_csv;
  int levels = 0;
  std::uint64_t l = 0;  // 0 -> k
  std::string mode = "auto";
  std::string mu_policy = "auto";
  double mu_override = 0.0;
  bool mu_given = false;
  double beta = 0.0;
  double delta = 0.0;
  bool beta_given = false;
  bool delta_given = false;
  double eta = 0.0;
};

struct ReconstructArgs {
  CommonArgs common;
  std::string record_path;
  bool use_y = false;
};

struct HscArgs {
  CommonArgs common;
  std::string m_spec;       // "4,8,12"
  std::string levels_spec;  // "2,4"
  std::uint64_t n = 10000;
};

struct DecayArgs {
  CommonArgs common;
  std::uint64_t k = 2;
  int levels = 2;
  std::string m_spec;
  std::string l_policy = "k";  // "k" or "k+etak"
  double eta = 0.0;
  std::uint64_t frames = 100;
  std::uint64_t x_per_frame = 500;
};

struct SvTailArgs {
  CommonArgs common;
  std::uint64_t l = 0;
  std::uint64_t k = 0;
  double eps = 0.1;
  std::uint64_t trials = 100000;
};

struct NormEventArgs {
  CommonArgs common;
  std::uint64_t m = 8;
  std::uint64_t k = 2;
  std::uint64_t trials = 10000;
};

struct OptimalParamsArgs {
  CommonArgs common;
  std::uint64_t cases = 20;
  std::uint64_t grid = 200;
};

int run_quantize(const QuantizeArgs& args);
int run_reconstruct(const ReconstructArgs& args);
int run_hsc(const HscArgs& args);
int run_decay(const DecayArgs& args);
int run_svtail(const SvTailArgs& args);
int run_norm_event(const NormEventArgs& args);
int run_optimal_params(const OptimalParamsArgs& args);

}  // namespace betaframe::cli
