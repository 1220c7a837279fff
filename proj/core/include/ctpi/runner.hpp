// runner.hpp -- command dispatch shared by the CLI binary and the tests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctpi/config.hpp"

namespace ctpi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCapacity = 4;

struct RunOptions {
  std::string config_path;
  std::string output_dir;  // overrides the config's output.directory
  int threads = 0;         // 0 = hardware concurrency
  std::uint64_t seed = 1;
  std::string sweep_axis;
  std::vector<double> sweep_values;
};

// Commands: correlate, rate, sscf, chi, equilibrium, oracle-check,
// bench-bonddim, sweep.  Returns one of the kExit* codes and reports
// failures on stderr.
int run_command(const std::string& command, const RunOptions& opts);

struct SweepRow {
  double value = 0;
  double max_delta = 0;  // max_t |G - G_previous|, NaN for the first row
};

// Reruns the configured correlation series along one refinement axis
// (n_steps, cutoff or max_bond) and tabulates successive differences.
std::vector<SweepRow> convergence_sweep(const RunConfig& cfg,
                                        const std::string& axis,
                                        const std::vector<double>& values);

}  // namespace ctpi::cli
