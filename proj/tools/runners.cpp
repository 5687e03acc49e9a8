#include "runners.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "betaframe/distortion.hpp"
#include "betaframe/rng.hpp"
#include "betaframe/serialize.hpp"
#include "manifest.hpp"
#include "table.hpp"

namespace betaframe::cli {

namespace {

using nlohmann::json;

std::string manifest_path(const CommonArgs& common) {
  return common.manifest.empty() ? common.out + ".manifest.json"
                                 : common.manifest;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::istringstream stream(text);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw BadArgumentError("cannot parse number \"" + cell + "\"");
    }
  }
  if (values.empty()) throw BadArgumentError("empty numeric list");
  return values;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> values;
  for (double v : parse_double_list(text)) {
    if (v < 0 || v != std::floor(v))
      throw BadArgumentError("expected a nonnegative integer list");
    values.push_back(static_cast<Index>(v));
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (Index v : parse_index_list(text)) values.push_back(static_cast<int>(v));
  return values;
}

FrameRef resolve_frame_ref(const FrameArgs& args, std::uint64_t default_seed) {
  const int sources = (args.hsc_m > 0 ? 1 : 0) +
                      (!args.gaussian_spec.empty() ? 1 : 0) +
                      (!args.frame_csv.empty() ? 1 : 0);
  if (sources != 1)
    throw BadArgumentError(
        "exactly one frame source required: --hsc, --gaussian or --frame-csv");
  FrameRef ref;
  if (args.hsc_m > 0) {
    ref.kind = FrameRef::Kind::Hsc;
    ref.m = args.hsc_m;
    ref.k = 2;
  } else if (!args.gaussian_spec.empty()) {
    const std::vector<double> mk = parse_double_list(args.gaussian_spec);
    if (mk.size() != 2)
      throw BadArgumentError("--gaussian expects \"M,K\"");
    ref.kind = FrameRef::Kind::Gaussian;
    ref.m = static_cast<Index>(mk[0]);
    ref.k = static_cast<Index>(mk[1]);
    ref.seed = args.frame_seed_given ? args.frame_seed : default_seed;
  } else {
    ref.kind = FrameRef::Kind::Csv;
    ref.path = args.frame_csv;
  }
  return ref;
}

// Parameters are keyed by flag names so the manifest doubles as --config.
OrderedJson common_params(const CommonArgs& common) {
  OrderedJson j;
  j["seed"] = common.seed;
  j["threads"] = common.threads;
  j["out"] = common.out;
  j["format"] = common.format;
  if (!common.manifest.empty()) j["manifest"] = common.manifest;
  return j;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

template <typename T>
std::string join_integers(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

int run_quantize(const QuantizeArgs& args) {
  Stopwatch watch;
  FrameRef ref = resolve_frame_ref(args.frame, args.common.seed);
  const Frame frame = resolve_frame(ref);
  ref.m = frame.size();
  ref.k = frame.dimension();
  const Index k = frame.dimension();

  std::vector<double> x;
  if (!args.x_inline.empty() && !args.x_csv.empty())
    throw BadArgumentError("give --x or --x-csv, not both");
  if (!args.x_inline.empty())
    x = parse_double_list(args.x_inline);
  else if (!args.x_csv.empty())
    x = read_vector_csv(args.x_csv);
  else
    throw BadArgumentError("an input vector is required (--x or --x-csv)");
  if (x.size() != k)
    throw DimMismatchError("input vector has dimension " +
                           std::to_string(x.size()) + ", frame expects " +
                           std::to_string(k));

  SchemeOptions options;
  const bool is_gaussian = ref.kind == FrameRef::Kind::Gaussian;
  std::string mode = args.mode;
  if (mode == "auto") mode = is_gaussian ? "truncate" : "balanced";
  options.mode = partition_mode_from_name(mode);

  std::string mu_policy = args.mu_policy;
  if (args.mu_given) mu_policy = "override";
  if (mu_policy == "auto") mu_policy = is_gaussian ? "gaussian" : "exact";
  if (mu_policy == "exact")
    options.mu_policy = MuPolicy::ExactRowNorm;
  else if (mu_policy == "gaussian")
    options.mu_policy = MuPolicy::GaussianFourSqrtM;
  else if (mu_policy == "override") {
    options.mu_policy = MuPolicy::Override;
    if (!args.mu_given) throw BadArgumentError("mu policy override needs --mu");
    options.mu_override = args.mu_override;
  } else {
    throw BadArgumentError("unknown mu policy: " + mu_policy);
  }
  options.eta = args.eta;
  if (args.beta_given != args.delta_given)
    throw BadArgumentError("--beta and --delta must be given together");
  if (args.beta_given) options.beta_delta = {{args.beta, args.delta}};

  const std::size_t l = args.l > 0 ? args.l : k;
  const BetaDualScheme scheme = build_scheme(frame, l, args.levels, options);
  const QuantizationRecord record = encode(scheme, x);

  json record_json = json::parse(record_to_json(record));
  record_json["scheme"] =
      json::parse(scheme_spec_to_json(spec_of(scheme, ref, mu_policy)));
  record_json["x"] = x;
  write_text_file(args.common.out, record_json.dump(2) + "\n");

  OrderedJson params = common_params(args.common);
  switch (ref.kind) {
    case FrameRef::Kind::Hsc:
      params["hsc"] = ref.m;
      break;
    case FrameRef::Kind::Gaussian:
      params["gaussian"] = args.frame.gaussian_spec;
      params["frame-seed"] = ref.seed;
      break;
    case FrameRef::Kind::Csv:
      params["frame-csv"] = ref.path;
      break;
  }
  if (!args.x_csv.empty())
    params["x-csv"] = args.x_csv;
  else
    params["x"] = join_doubles(x);
  params["L"] = args.levels;
  params["l"] = l;
  params["mode"] = mode;
  params["mu-policy"] = mu_policy;
  if (mu_policy == "override") params["mu"] = scheme.mu;
  if (args.beta_given) {
    params["beta"] = args.beta;
    params["delta"] = args.delta;
  }
  params["eta"] = args.eta;

  OrderedJson results;
  results["m"] = frame.size();
  results["k"] = frame.dimension();
  results["mu"] = scheme.mu;
  results["beta"] = scheme.beta();
  results["delta"] = scheme.delta();
  results["residual"] = residual_inf(record);
  results["u_inf"] = norm_inf(record.u);
  write_manifest(manifest_path(args.common), "quantize", params, results,
                 args.common.seed, {args.common.out}, watch.seconds());

  std::cout << "wrote " << args.common.out << " (residual "
            << format_double(residual_inf(record)) << ", ||u||_inf "
            << format_double(norm_inf(record.u)) << ")\n";
  return 0;
}

int run_reconstruct(const ReconstructArgs& args) {
  Stopwatch watch;
  const std::string text = read_text_file(args.record_path);
  const QuantizationRecord record = record_from_json(text);

  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("scheme"))
    throw IoError("record file lacks an embedded scheme: " + args.record_path);
  const SchemeSpec spec = scheme_spec_from_json(j["scheme"].dump());
  const BetaDualScheme scheme = scheme_from_spec(spec);

  const std::vector<double>& code = args.use_y ? record.y : record.q;
  const std::vector<double> x_hat = decode(scheme, code);
  const double bound = error_bound(scheme);

  OrderedJson out;
  out["x_hat"] = x_hat;
  out["error_bound"] = bound;
  out["used"] = args.use_y ? "y" : "q";
  if (j.contains("x")) {
    const std::vector<double> x = j["x"].get<std::vector<double>>();
    if (x.size() == x_hat.size()) {
      double err_sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        err_sq += (x[i] - x_hat[i]) * (x[i] - x_hat[i]);
      out["measured_error"] = std::sqrt(err_sq);
    }
  }
  write_text_file(args.common.out, out.dump(2) + "\n");

  OrderedJson params = common_params(args.common);
  params["record"] = args.record_path;
  if (args.use_y) params["use-y"] = true;

  OrderedJson results;
  results["error_bound"] = bound;
  results["used"] = args.use_y ? "y" : "q";
  if (out.contains("measured_error"))
    results["measured_error"] = out["measured_error"];
  write_manifest(manifest_path(args.common), "reconstruct", params, results,
                 args.common.seed, {args.common.out}, watch.seconds());

  std::cout << "wrote " << args.common.out << " (error bound "
            << format_double(bound) << ")\n";
  return 0;
}

int run_hsc(const HscArgs& args) {
  Stopwatch watch;
  const std::vector<Index> m_list = parse_index_list(args.m_spec);
  const std::vector<int> levels_list = parse_int_list(args.levels_spec);
  const std::vector<HscRow> result = hsc_experiment(
      m_list, levels_list, args.n, args.common.seed, args.common.threads);

  std::vector<OrderedJson> rows;
  std::size_t violations = 0;
  for (const HscRow& r : result) {
    OrderedJson row;
    row["m"] = r.m;
    row["L"] = r.levels;
    row["beta"] = r.beta;
    row["delta"] = r.delta;
    row["n_samples"] = r.n_samples;
    row["sup_error"] = r.sup_error;
    row["mean_error"] = r.mean_error;
    row["bound"] = r.bound;
    row["ok"] = static_cast<int>(r.ok);
    rows.push_back(row);
    if (!r.ok) ++violations;
  }
  write_table(args.common.format, args.common.out,
              {"m", "L", "beta", "delta", "n_samples", "sup_error",
               "mean_error", "bound", "ok"},
              rows);

  OrderedJson params = common_params(args.common);
  params["m"] = join_integers(m_list);
  params["L"] = join_integers(levels_list);
  params["n"] = args.n;

  OrderedJson results;
  results["violations"] = violations;
  write_manifest(manifest_path(args.common), "experiment hsc", params, results,
                 args.common.seed, {args.common.out}, watch.seconds());

  if (violations > 0) {
    std::cerr << violations << " (m, L) cells exceeded the closed-form bound\n";
    return 2;
  }
  std::cout << "hsc experiment: " << rows.size() << " cells, all within bound\n";
  return 0;
}

int run_decay(const DecayArgs& args) {
  Stopwatch watch;
  DecayConfig config;
  config.k = args.k;
  config.levels = args.levels;
  config.m_list = parse_index_list(args.m_spec);
  if (args.l_policy == "k")
    config.l_policy = LPolicy::EqualK;
  else if (args.l_policy == "k+etak")
    config.l_policy = LPolicy::KPlusCeilEtaK;
  else
    throw BadArgumentError("--l-policy must be \"k\" or \"k+etak\"");
  config.eta = args.eta;
  config.frames_per_m = args.frames;
  config.x_per_frame = args.x_per_frame;
  config.seed = args.common.seed;
  config.threads = args.common.threads;

  const DecayResult result = gaussian_decay_experiment(config);

  std::vector<OrderedJson> rows;
  std::size_t violations = 0;
  for (const DecayRow& r : result.rows) {
    OrderedJson row;
    row["m"] = r.m;
    row["l"] = r.l;
    row["L"] = args.levels;
    row["eta"] = args.eta;
    row["frames"] = args.frames;
    row["x_per_frame"] = args.x_per_frame;
    row["median_sup_error"] = r.median_sup_error;
    row["max_sup_error"] = r.max_sup_error;
    row["median_bound"] = r.median_bound;
    row["theory_bound"] = r.theory_bound;
    row["violations"] = r.violations;
    rows.push_back(row);
    violations += r.violations;
  }
  write_table(args.common.format, args.common.out,
              {"m", "l", "L", "eta", "frames", "x_per_frame",
               "median_sup_error", "max_sup_error", "median_bound",
               "theory_bound", "violations"},
              rows);

  OrderedJson params = common_params(args.common);
  params["k"] = args.k;
  params["L"] = args.levels;
  params["m"] = join_integers(config.m_list);
  params["l-policy"] = args.l_policy;
  params["eta"] = args.eta;
  params["frames"] = args.frames;
  params["x-per-frame"] = args.x_per_frame;

  OrderedJson results;
  results["fitted_rate"] = result.fitted_rate;
  results["target_rate"] = result.target_rate;
  results["violations"] = violations;
  write_manifest(manifest_path(args.common), "experiment gaussian-decay",
                 params, results, args.common.seed, {args.common.out},
                 watch.seconds());

  std::cout << "fitted rate " << format_double(result.fitted_rate)
            << " per unit m (target " << format_double(result.target_rate)
            << ")\n";
  if (violations > 0) {
    std::cerr << violations << " frames exceeded their error bound\n";
    return 2;
  }
  return 0;
}

int run_svtail(const SvTailArgs& args) {
  Stopwatch watch;
  const TailReport report =
      svtail_experiment(args.l, args.k, args.eps, args.trials,
                        args.common.seed, args.common.threads);

  // Assert against the theoretical bound plus four binomial standard
  // deviations of sampling slack.
  const double bound = report.bound_p43 ? *report.bound_p43 : report.bound_a1;
  const double p_slack = std::min(1.0, std::max(report.empirical_prob, bound));
  const double slack =
      4.0 * std::sqrt(std::max(p_slack * (1.0 - p_slack), 1e-12) /
                      static_cast<double>(report.trials));
  const bool ok = report.empirical_prob <= bound + slack;

  OrderedJson row;
  row["l"] = report.l;
  row["k"] = report.k;
  row["eps"] = report.eps;
  row["trials"] = report.trials;
  row["threshold"] = report.threshold;
  row["empirical_prob"] = report.empirical_prob;
  row["bound_A1"] = report.bound_a1;
  row["bound_P43"] = report.bound_p43 ? OrderedJson(*report.bound_p43)
                                      : OrderedJson(nullptr);
  row["viable"] = static_cast<int>(report.bound_a1 < 1.0);
  row["ok"] = static_cast<int>(ok);
  write_table(args.common.format, args.common.out,
              {"l", "k", "eps", "trials", "threshold", "empirical_prob",
               "bound_A1", "bound_P43", "viable", "ok"},
              {row});

  OrderedJson params = common_params(args.common);
  params["l"] = args.l;
  params["k"] = args.k;
  params["eps"] = args.eps;
  params["trials"] = args.trials;

  OrderedJson results;
  results["empirical_prob"] = report.empirical_prob;
  results["threshold"] = report.threshold;
  results["bound"] = bound;
  results["ok"] = ok;
  write_manifest(manifest_path(args.common), "experiment svtail", params,
                 results, args.common.seed, {args.common.out}, watch.seconds());

  std::cout << "empirical " << format_double(report.empirical_prob)
            << " vs bound " << format_double(bound) << "\n";
  return ok ? 0 : 2;
}

int run_norm_event(const NormEventArgs& args) {
  Stopwatch watch;
  const double freq = gauss_norm_event(args.m, args.k, args.trials,
                                       args.common.seed, args.common.threads);
  const double bound = std::exp(-2.0 * static_cast<double>(args.m));
  const double slack =
      4.0 * std::sqrt(std::max(bound, 1e-12) / static_cast<double>(args.trials));
  const bool ok = freq <= bound + slack;

  OrderedJson row;
  row["m"] = args.m;
  row["k"] = args.k;
  row["trials"] = args.trials;
  row["frequency"] = freq;
  row["bound"] = bound;
  row["ok"] = static_cast<int>(ok);
  write_table(args.common.format, args.common.out,
              {"m", "k", "trials", "frequency", "bound", "ok"}, {row});

  OrderedJson params = common_params(args.common);
  params["m"] = args.m;
  params["k"] = args.k;
  params["trials"] = args.trials;

  OrderedJson results;
  results["frequency"] = freq;
  results["bound"] = bound;
  results["ok"] = ok;
  write_manifest(manifest_path(args.common), "experiment norm-event", params,
                 results, args.common.seed, {args.common.out}, watch.seconds());

  std::cout << "norm-event frequency " << format_double(freq) << " (bound "
            << format_double(bound) << ")\n";
  return ok ? 0 : 2;
}

int run_optimal_params(const OptimalParamsArgs& args) {
  Stopwatch watch;
  auto engine = make_engine(args.common.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<OrderedJson> rows;
  std::size_t violations = 0;
  for (std::uint64_t c = 0; c < args.cases; ++c) {
    const int levels = 2 + static_cast<int>(engine() % 7);
    const double mu = 0.2 + 9.0 * unit(engine);
    const double alpha = 1.0 / (levels - 1.0) + 0.05 + 11.0 * unit(engine);
    const OptimalParams p = optimal_params(alpha, mu, levels);

    const double closed_form =
        mu * alpha * std::pow((1.0 + alpha) / (alpha * levels), 1.0 + alpha);
    const double boundary = std::abs(p.beta + mu / p.delta - levels);

    // Grid over S_{mu,L}: beta strictly inside (1, L), delta from the
    // stability boundary upward (the objective grows with delta).
    double grid_min = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 1; i <= args.grid; ++i) {
      const double beta = 1.0 + (levels - 1.0) * static_cast<double>(i) /
                                    static_cast<double>(args.grid + 1);
      const double delta_floor = mu / (levels - beta);
      for (std::uint64_t j = 0; j < args.grid; ++j) {
        const double delta =
            delta_floor * (1.0 + 3.0 * static_cast<double>(j) /
                                     static_cast<double>(args.grid));
        grid_min = std::min(grid_min, delta * std::pow(beta, -alpha));
      }
    }

    const bool beats_grid = p.bound_value <= grid_min * (1.0 + 1e-12);
    const bool matches_form =
        std::abs(p.bound_value - closed_form) <= 1e-12 * closed_form;
    const bool on_boundary = boundary <= 1e-12 * levels;
    if (!(beats_grid && matches_form && on_boundary)) ++violations;

    OrderedJson row;
    row["case"] = c;
    row["alpha"] = alpha;
    row["mu"] = mu;
    row["L"] = levels;
    row["beta"] = p.beta;
    row["delta"] = p.delta;
    row["value"] = p.bound_value;
    row["closed_form"] = closed_form;
    row["grid_min"] = grid_min;
    row["boundary_residual"] = boundary;
    row["ok"] = static_cast<int>(beats_grid && matches_form && on_boundary);
    rows.push_back(row);
  }
  write_table(args.common.format, args.common.out,
              {"case", "alpha", "mu", "L", "beta", "delta", "value",
               "closed_form", "grid_min", "boundary_residual", "ok"},
              rows);

  OrderedJson params = common_params(args.common);
  params["cases"] = args.cases;
  params["grid"] = args.grid;

  OrderedJson results;
  results["violations"] = violations;
  write_manifest(manifest_path(args.common), "experiment optimal-params",
                 params, results, args.common.seed, {args.common.out},
                 watch.seconds());

  if (violations > 0) {
    std::cerr << violations << " cases failed the analytic-vs-grid check\n";
    return 2;
  }
  std::cout << "optimal-params: " << rows.size() << " cases verified\n";
  return 0;
}

}  // namespace betaframe::cli
