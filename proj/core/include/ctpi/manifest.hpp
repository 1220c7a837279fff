// manifest.hpp -- versioned run manifests and CSV output.
//
// Every command writes its tables as CSV plus a manifest.json recording the
// resolved parameters, versions, thread count, seed, per-stage wall times
// and any warnings.  Files are written atomically (temp file + rename).
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ctpi::cli {

struct RunManifest {
  std::string command;
  std::string tool_version;
  int schema_version = 1;
  int threads = 0;
  std::uint64_t seed = 0;
  std::string config_path;
  std::map<std::string, double> wall_times_s;
  std::map<std::string, double> scalars;  // named results (rates, purity, ...)
  std::vector<int> beta_bar;              // per time point
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;       // files written by the run
};

void write_manifest(const std::string& path, const RunManifest& manifest);

// Rows of printf("%.17g") numbers under a header line; NaN allowed.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace ctpi::cli
