#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "betaframe/errors.hpp"
#include "betaframe/serialize.hpp"
#include "betaframe/version.hpp"
#include "runners.hpp"

namespace {

using betaframe::cli::CommonArgs;

// Expands "--config file.json" into plain flag tokens inserted right after
// the subcommand prefix. Later (explicit) flags win because every option is
// registered with a take-last policy.
std::vector<std::string> inject_config(std::vector<std::string> tokens) {
  std::string config_path;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size()) {
      config_path = tokens[i + 1];
      break;
    }
    if (tokens[i].rfind("--config=", 0) == 0) {
      config_path = tokens[i].substr(9);
      break;
    }
  }
  if (config_path.empty()) return tokens;

  nlohmann::json config =
      nlohmann::json::parse(betaframe::read_text_file(config_path), nullptr, false);
  if (config.is_discarded() || !config.is_object())
    throw betaframe::IoError("config file is not a JSON object: " + config_path);
  // A manifest written by a previous run is itself a valid config: its
  // "parameters" object is keyed by flag names.
  if (config.contains("tool") && config.contains("parameters") &&
      config["parameters"].is_object())
    config = config["parameters"];

  std::vector<std::string> injected;
  for (const auto& [key, value] : config.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) text += ',';
        text += value[i].is_string() ? value[i].get<std::string>()
                                     : value[i].dump();
      }
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else {
      text = value.dump();
    }
    injected.push_back("--" + key);
    injected.push_back(text);
  }

  // Subcommand prefix: "quantize" / "reconstruct" / "experiment <name>".
  std::size_t prefix = 0;
  if (!tokens.empty() && tokens[0].rfind("-", 0) != 0) {
    prefix = 1;
    if (tokens[0] == "experiment" && tokens.size() > 1 &&
        tokens[1].rfind("-", 0) != 0)
      prefix = 2;
  }
  tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(prefix),
                injected.begin(), injected.end());
  return tokens;
}

void add_common(CLI::App* cmd, CommonArgs& common, std::string default_out) {
  common.out = std::move(default_out);
  auto take_last = [](CLI::Option* opt) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };
  take_last(cmd->add_option("--seed", common.seed,
                            "Master seed (BETAFRAME_SEED as fallback)")
                ->envname("BETAFRAME_SEED"));
  take_last(cmd->add_option("--threads", common.threads,
                            "Worker cap; 0 = all cores. Results do not depend "
                            "on the thread count"));
  take_last(cmd->add_option("--out", common.out, "Output file"));
  take_last(cmd->add_option("--manifest", common.manifest,
                            "Manifest path (default <out>.manifest.json)"));
  take_last(cmd->add_option("--format", common.format,
                            "Table output format (csv or json)")
                ->check(CLI::IsMember({"csv", "json"})));
  take_last(cmd->add_option("--config", common.config,
                            "JSON file with default flag values"));
}

void add_frame_options(CLI::App* cmd, betaframe::cli::FrameArgs& frame) {
  auto take_last = [](CLI::Option* opt) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };
  take_last(cmd->add_option("--hsc", frame.hsc_m,
                            "Harmonic semicircle frame of even size m"));
  take_last(cmd->add_option("--gaussian", frame.gaussian_spec,
                            "Gaussian frame \"M,K\""));
  take_last(cmd->add_option("--frame-csv", frame.frame_csv,
                            "Frame from CSV (one row per frame vector)"));
  take_last(cmd->add_option("--frame-seed", frame.frame_seed,
                            "Seed for --gaussian (default: --seed)"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed noise-shaping quantization of finite frames"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(BETAFRAME_VERSION) + " (" +
                           BETAFRAME_GIT_REVISION + ")");

  using namespace betaframe::cli;
  auto take_last = [](CLI::Option* opt) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };

  // ---- quantize ----
  QuantizeArgs quantize;
  CLI::App* q = app.add_subcommand("quantize",
                                   "Quantize a measurement vector y = Ex");
  add_common(q, quantize.common, "record.json");
  add_frame_options(q, quantize.frame);
  take_last(q->add_option("--x", quantize.x_inline, "Input vector \"c1,c2,...\""));
  take_last(q->add_option("--x-csv", quantize.x_csv, "Input vector from CSV"));
  take_last(q->add_option("--L", quantize.levels, "Alphabet size L >= 2")
                ->required());
  take_last(q->add_option("--l", quantize.l, "Number of blocks (default k)"));
  take_last(q->add_option("--mode", quantize.mode,
                          "Partition mode: auto, balanced or truncate")
                ->check(CLI::IsMember({"auto", "balanced", "truncate"})));
  take_last(q->add_option("--mu-policy", quantize.mu_policy,
                          "auto, exact, gaussian or override")
                ->check(CLI::IsMember({"auto", "exact", "gaussian", "override"})));
  CLI::Option* mu_opt =
      q->add_option("--mu", quantize.mu_override, "Explicit input bound mu");
  take_last(mu_opt);
  CLI::Option* beta_opt = q->add_option("--beta", quantize.beta, "Explicit beta");
  CLI::Option* delta_opt =
      q->add_option("--delta", quantize.delta, "Explicit delta");
  take_last(beta_opt);
  take_last(delta_opt);
  take_last(q->add_option("--eta", quantize.eta, "Rate margin eta in [0, 1)"));

  // ---- reconstruct ----
  ReconstructArgs reconstruct;
  CLI::App* r = app.add_subcommand("reconstruct",
                                   "Decode a quantization record to x_hat");
  add_common(r, reconstruct.common, "xhat.json");
  take_last(r->add_option("--record", reconstruct.record_path,
                          "Record JSON written by quantize")
                ->required());
  r->add_flag("--use-y", reconstruct.use_y,
              "Decode the real measurements instead of q (duality check)");

  // ---- experiment ----
  CLI::App* e = app.add_subcommand("experiment", "Monte Carlo experiments");
  e->require_subcommand(1);

  HscArgs hsc;
  CLI::App* e_hsc =
      e->add_subcommand("hsc", "Harmonic semicircle distortion vs bound");
  add_common(e_hsc, hsc.common, "hsc.csv");
  take_last(e_hsc->add_option("--m", hsc.m_spec, "Even frame sizes \"4,8,12\"")
                ->required());
  take_last(e_hsc->add_option("--L", hsc.levels_spec, "Alphabet sizes \"2,4\"")
                ->required());
  take_last(e_hsc->add_option("--n", hsc.n, "Samples per (m, L) cell"));

  DecayArgs decay;
  CLI::App* e_decay = e->add_subcommand(
      "gaussian-decay", "Exponential error decay for Gaussian frames");
  add_common(e_decay, decay.common, "decay.csv");
  take_last(e_decay->add_option("--k", decay.k, "Signal dimension"));
  take_last(e_decay->add_option("--L", decay.levels, "Alphabet size"));
  take_last(e_decay->add_option("--m", decay.m_spec, "Frame sizes \"8,16,24\"")
                ->required());
  take_last(e_decay->add_option("--l-policy", decay.l_policy,
                                "Block count rule: k or k+etak")
                ->check(CLI::IsMember({"k", "k+etak"})));
  take_last(e_decay->add_option("--eta", decay.eta, "Rate margin eta"));
  take_last(e_decay->add_option("--frames", decay.frames, "Frames per m"));
  take_last(e_decay->add_option("--x-per-frame", decay.x_per_frame,
                                "Samples per frame"));

  SvTailArgs svtail;
  CLI::App* e_svtail = e->add_subcommand(
      "svtail", "Smallest-singular-value tail frequencies vs bounds");
  add_common(e_svtail, svtail.common, "svtail.csv");
  take_last(e_svtail->add_option("--l", svtail.l, "Rows")->required());
  take_last(e_svtail->add_option("--k", svtail.k, "Columns")->required());
  take_last(e_svtail->add_option("--eps", svtail.eps, "Tail parameter"));
  take_last(e_svtail->add_option("--trials", svtail.trials, "Trials"));

  NormEventArgs norm_event;
  CLI::App* e_norm = e->add_subcommand(
      "norm-event", "Frequency of ||E||_{2->2} exceeding 4 sqrt(m)");
  add_common(e_norm, norm_event.common, "norm_event.csv");
  take_last(e_norm->add_option("--m", norm_event.m, "Rows"));
  take_last(e_norm->add_option("--k", norm_event.k, "Columns"));
  take_last(e_norm->add_option("--trials", norm_event.trials, "Trials"));

  OptimalParamsArgs optimal;
  CLI::App* e_opt = e->add_subcommand(
      "optimal-params", "Analytic (beta, delta) minimizer vs grid search");
  add_common(e_opt, optimal.common, "optimal_params.csv");
  take_last(e_opt->add_option("--cases", optimal.cases, "Random cases"));
  take_last(e_opt->add_option("--grid", optimal.grid, "Grid points per axis"));

  std::vector<std::string> tokens(argv + 1, argv + argc);
  try {
    tokens = inject_config(std::move(tokens));
    // CLI11 parses {begin, end} reversed.
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForVersion& version) {
    return app.exit(version);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  } catch (const betaframe::IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const betaframe::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  try {
    quantize.beta_given = beta_opt->count() > 0;
    quantize.delta_given = delta_opt->count() > 0;
    quantize.mu_given = mu_opt->count() > 0;
    quantize.frame.frame_seed_given = q->count("--frame-seed") > 0;
    if (q->parsed()) return run_quantize(quantize);
    if (r->parsed()) return run_reconstruct(reconstruct);
    if (e->parsed()) {
      if (e_hsc->parsed()) return run_hsc(hsc);
      if (e_decay->parsed()) return run_decay(decay);
      if (e_svtail->parsed()) return run_svtail(svtail);
      if (e_norm->parsed()) return run_norm_event(norm_event);
      if (e_opt->parsed()) return run_optimal_params(optimal);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const betaframe::IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const betaframe::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
