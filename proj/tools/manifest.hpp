#pragma once

#include <json.hpp>

#include <chrono>
#include <string>
#include <vector>

#include "betaframe/rng.hpp"
#include "betaframe/serialize.hpp"
#include "betaframe/version.hpp"

namespace betaframe::cli {

// Every run writes a manifest with the fully resolved configuration.
// "parameters" is keyed by flag names, so a manifest doubles as a --config
// file: rerunning the same subcommand with it reproduces the outputs
// byte-identically. Outputs themselves carry no timestamps; wall time and
// the timestamp live only here, alongside derived results.
inline void write_manifest(const std::string& path, const std::string& subcommand,
                           const nlohmann::ordered_json& parameters,
                           const nlohmann::ordered_json& results,
                           std::uint64_t seed,
                           const std::vector<std::string>& outputs,
                           double wall_time_s) {
  nlohmann::ordered_json m;
  m["tool"] = "betaframe";
  m["version"] = BETAFRAME_VERSION;
  m["build"] = BETAFRAME_GIT_REVISION;
  m["subcommand"] = subcommand;
  m["parameters"] = parameters;
  if (!results.empty()) m["results"] = results;
  m["seed"] = seed;
  m["rng"] = kGeneratorName;
  m["outputs"] = outputs;
  m["wall_time_s"] = wall_time_s;
  const auto now = std::chrono::system_clock::now();
  m["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  write_text_file(path, m.dump(2) + "\n");
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace betaframe::cli
