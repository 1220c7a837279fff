#include "ctpi/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <stdexcept>

#include "ctpi/engine.hpp"
#include "ctpi/manifest.hpp"
#include "ctpi/observables.hpp"
#include "ctpi/oracles.hpp"
#include "ctpi/parallel.hpp"
#include "ctpi/version.hpp"

namespace ctpi::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CommandContext {
  RunConfig cfg;
  fs::path outdir;
  RunManifest manifest;
  Clock::time_point start;
};

CommandContext make_context(const std::string& command, const RunOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("no config file given");
  CommandContext ctx;
  ctx.cfg = parse_config(opts.config_path);
  if (!opts.output_dir.empty()) ctx.cfg.output.directory = opts.output_dir;
  ctx.outdir = ctx.cfg.output.directory;
  set_max_threads(opts.threads);
  ctx.manifest.command = command;
  ctx.manifest.tool_version = kVersion;
  ctx.manifest.threads = max_threads();
  ctx.manifest.seed = opts.seed;
  ctx.manifest.config_path = opts.config_path;
  ctx.start = Clock::now();
  return ctx;
}

void finish(CommandContext& ctx) {
  ctx.manifest.wall_times_s["total"] = seconds_since(ctx.start);
  const fs::path path = ctx.outdir / "manifest.json";
  write_manifest(path.string(), ctx.manifest);
  std::printf("wrote %s\n", path.string().c_str());
  for (const auto& w : ctx.manifest.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

void emit_csv(CommandContext& ctx, const std::string& name,
              const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  const fs::path path = ctx.outdir / name;
  write_csv(path.string(), header, rows);
  ctx.manifest.outputs.push_back(name);
  std::printf("wrote %s\n", path.string().c_str());
}

void append_warnings(CommandContext& ctx, const std::vector<std::string>& ws) {
  ctx.manifest.warnings.insert(ctx.manifest.warnings.end(), ws.begin(), ws.end());
}

CorrelationRequest request_with_times(const RunConfig& cfg) {
  if (cfg.n_times < 1)
    throw ConfigError("contour.n_times must be at least 1 for this command");
  return cfg.to_request();
}

int cmd_correlate(const RunOptions& opts) {
  CommandContext ctx = make_context("correlate", opts);
  CorrelationRequest req = request_with_times(ctx.cfg);
  CorrelationSeries series = correlation_series(req);
  std::vector<std::vector<double>> rows;
  rows.reserve(series.times.size());
  for (std::size_t i = 0; i < series.times.size(); ++i)
    rows.push_back({series.times[i], series.values[i].real(),
                    series.values[i].imag(), series.z_values[i].real(),
                    series.z_values[i].imag(),
                    static_cast<double>(series.max_bond[i])});
  emit_csv(ctx, "correlate.csv", {"t", "re_g", "im_g", "re_z", "im_z", "max_bond"},
           rows);
  ctx.manifest.beta_bar = series.max_bond;
  append_warnings(ctx, series.warnings);
  finish(ctx);
  return kExitOk;
}

int cmd_rate(const RunOptions& opts) {
  CommandContext ctx = make_context("rate", opts);
  CorrelationRequest req = request_with_times(ctx.cfg);
  Matrix proj = ctx.cfg.named_operator(ctx.cfg.observable.projector);
  obs::RateSettings settings;
  settings.plateau_override = ctx.cfg.observable.plateau_time;
  obs::RateResult res = obs::compute_rate(req, proj, settings);
  std::vector<std::vector<double>> rows;
  rows.reserve(res.times.size());
  for (std::size_t i = 0; i < res.times.size(); ++i)
    rows.push_back({res.times[i], res.c_fs[i], res.c_ff[i],
                    static_cast<double>(res.max_bond[i])});
  emit_csv(ctx, "rate.csv", {"t", "c_fs", "c_ff", "max_bond"}, rows);
  ctx.manifest.beta_bar = res.max_bond;
  ctx.manifest.scalars["plateau_time"] =
      res.plateau_time.value_or(std::numeric_limits<double>::quiet_NaN());
  ctx.manifest.scalars["rate_from_plateau"] = res.rate_from_plateau;
  ctx.manifest.scalars["rate_from_integral"] = res.rate_from_integral;
  ctx.manifest.scalars["reactant_partition"] = res.reactant_partition;
  append_warnings(ctx, res.warnings);
  finish(ctx);
  return kExitOk;
}

// Builds the symmetric-time series feeding the spectral commands.  The
// mirror fast path computes t >= 0 only and reflects by G(-t) = conj G(t);
// one negative-time point is recomputed directly as a spot check, falling
// back to the full direct grid if it disagrees.
CorrelationSeries symmetric_series(CommandContext& ctx) {
  CorrelationRequest req = request_with_times(ctx.cfg);
  const std::size_t n = req.times.size();
  if (n < 2) throw ConfigError("spectral commands need contour.n_times >= 2");
  if (ctx.cfg.observable.negative_times == "mirror") {
    CorrelationSeries half = correlation_series(req);
    CorrelationRequest probe = req;
    probe.times = {-req.times[1]};
    CorrelationSeries check = correlation_series(probe);
    const Complex expected = std::conj(half.values[1]);
    const double scale = std::max(std::abs(expected), 1e-300);
    const double err = std::abs(check.values[0] - expected) / scale;
    if (err < 1e-6) {
      CorrelationSeries sym = obs::symmetrize_by_conjugation(half);
      sym.warnings = half.warnings;
      return sym;
    }
    ctx.manifest.warnings.push_back(
        "mirror check failed (relative error " + std::to_string(err) +
        "), recomputing negative times directly");
  }
  CorrelationRequest full = req;
  full.times.clear();
  for (std::size_t i = n; i-- > 1;) full.times.push_back(-req.times[i]);
  for (std::size_t i = 0; i < n; ++i) full.times.push_back(req.times[i]);
  return correlation_series(full);
}

obs::Window parse_window(const RunConfig& cfg) {
  return cfg.observable.window == "rect" ? obs::Window::Rect : obs::Window::Hann;
}

void emit_series(CommandContext& ctx, const CorrelationSeries& series) {
  std::vector<std::vector<double>> rows;
  rows.reserve(series.times.size());
  for (std::size_t i = 0; i < series.times.size(); ++i)
    rows.push_back({series.times[i], series.values[i].real(),
                    series.values[i].imag(),
                    static_cast<double>(series.max_bond[i])});
  emit_csv(ctx, "series.csv", {"t", "re_g", "im_g", "max_bond"}, rows);
}

int cmd_sscf(const RunOptions& opts) {
  CommandContext ctx = make_context("sscf", opts);
  CorrelationSeries series = symmetric_series(ctx);
  obs::SpectrumResult spec = obs::sscf_spectrum(
      series, ctx.cfg.beta, parse_window(ctx.cfg), ctx.cfg.observable.zero_pad);
  emit_series(ctx, series);
  std::vector<std::vector<double>> rows;
  rows.reserve(spec.omega.size());
  for (std::size_t i = 0; i < spec.omega.size(); ++i)
    rows.push_back({spec.omega[i], spec.g_omega[i].real(),
                    spec.g_omega[i].imag(), spec.s_omega[i]});
  emit_csv(ctx, "spectrum.csv", {"omega", "re_g_w", "im_g_w", "s_w"}, rows);
  ctx.manifest.beta_bar = series.max_bond;
  append_warnings(ctx, series.warnings);
  append_warnings(ctx, spec.warnings);
  finish(ctx);
  return kExitOk;
}

int cmd_chi(const RunOptions& opts) {
  CommandContext ctx = make_context("chi", opts);
  CorrelationSeries series = symmetric_series(ctx);
  obs::SpectrumResult spec = obs::sscf_spectrum(
      series, ctx.cfg.beta, parse_window(ctx.cfg), ctx.cfg.observable.zero_pad);
  obs::susceptibility(spec, ctx.cfg.beta);
  emit_series(ctx, series);
  std::vector<std::vector<double>> rows;
  rows.reserve(spec.omega.size());
  for (std::size_t i = 0; i < spec.omega.size(); ++i)
    rows.push_back({spec.omega[i], spec.s_omega[i], spec.chi_prime[i],
                    spec.chi_double_prime[i]});
  emit_csv(ctx, "chi.csv", {"omega", "s_w", "chi_prime", "chi_double_prime"},
           rows);
  ctx.manifest.beta_bar = series.max_bond;
  append_warnings(ctx, series.warnings);
  append_warnings(ctx, spec.warnings);
  finish(ctx);
  return kExitOk;
}

int cmd_equilibrium(const RunOptions& opts) {
  CommandContext ctx = make_context("equilibrium", opts);
  obs::EquilibriumResult res = obs::equilibrium_density_matrix(ctx.cfg.to_request());
  const int d = static_cast<int>(res.rho.rows());
  std::vector<std::vector<double>> rows;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      rows.push_back({static_cast<double>(r), static_cast<double>(c),
                      res.rho(r, c).real(), res.rho(r, c).imag()});
  emit_csv(ctx, "rho.csv", {"row", "col", "re", "im"}, rows);
  ctx.manifest.beta_bar = {res.max_bond};
  ctx.manifest.scalars["purity"] = res.purity;
  ctx.manifest.scalars["entropy"] = res.entropy;
  for (int i = 0; i < res.eigenvalues.size(); ++i)
    ctx.manifest.scalars["eigenvalue_" + std::to_string(i)] = res.eigenvalues[i];
  append_warnings(ctx, res.warnings);
  finish(ctx);
  return kExitOk;
}

struct OracleCheck {
  std::string name;
  double error = 0;
  double tolerance = 0;
  bool pass = false;
};

Matrix random_hermitian(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(u(rng), u(rng));
  return 0.5 * (m + m.adjoint()).eval();
}

// Independent cross checks of the tensor-network contraction: exhaustive
// path summation, the isolated-system closed form, and an explicit
// system+mode diagonalization.
int cmd_oracle_check(const RunOptions& opts) {
  CommandContext ctx = make_context("oracle-check", opts);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<OracleCheck> checks;

  for (int trial = 0; trial < 5; ++trial) {
    CorrelationRequest req;
    req.system.h0 = random_hermitian(rng, 2);
    req.a_op = random_hermitian(rng, 2);
    req.b_op = random_hermitian(rng, 2);
    bath::BathSpec spec;
    spec.density = bath::OhmicFamily{1.0, 0.1 + 0.4 * u01(rng),
                                     0.5 + 1.5 * u01(rng)};
    spec.coupling = {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0};
    req.baths = {spec};
    req.beta = 0.5 + 1.5 * u01(rng);
    req.n_steps = 2 + trial % 2;
    req.truncation.cutoff = 0;
    req.truncation.mode = tn::TruncationPolicy::Mode::Absolute;
    const double t = 2.0 * u01(rng);
    TimepointWorkspace ws = prepare_timepoint(req, t);
    Matrix net = run_pipeline(req, ws, req.b_op).o;
    Matrix ref = brute_force_path_sum(req, t);
    OracleCheck c;
    c.name = "path_sum_trial_" + std::to_string(trial);
    c.tolerance = 1e-8;
    c.error = (net - ref).norm() / std::max(ref.norm(), 1e-300);
    c.pass = c.error <= c.tolerance;
    checks.push_back(c);
  }

  {
    CorrelationRequest req;
    req.system.h0 = -ops::sigma_x();
    req.a_op = ops::sigma_z();
    req.b_op = ops::sigma_z();
    req.beta = 1.3;
    req.n_steps = 6;
    req.times = {0.0, 0.4, 0.9, 1.7};
    CorrelationSeries series = correlation_series(req);
    OracleCheck c;
    c.name = "isolated_system";
    c.tolerance = 1e-9;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      Complex ref = oracle::bare_correlation(req.system.h0, req.a_op, req.b_op,
                                             req.beta, series.times[i]);
      c.error = std::max(c.error, std::abs(series.values[i] - ref) /
                                      std::max(std::abs(ref), 1e-300));
    }
    c.pass = c.error <= c.tolerance;
    checks.push_back(c);
  }

  {
    CorrelationRequest req;
    req.system.h0 = -0.8 * ops::sigma_x();
    req.a_op = ops::sigma_z();
    req.b_op = ops::sigma_z();
    bath::BathSpec spec;
    spec.density = bath::DiscreteModes{{{1.1, 0.25, 1.0}}};
    spec.coupling = {1.0, -1.0};
    req.baths = {spec};
    req.beta = 1.0;
    req.n_steps = 24;
    req.truncation.cutoff = 1e-12;
    req.times = {0.5, 1.0};
    CorrelationSeries series = correlation_series(req);
    oracle::ExplicitBathOracle dense(req.system.h0, spec.coupling,
                                     {{1.1, 0.25, 1.0, 12}}, req.beta);
    OracleCheck c;
    c.name = "discrete_mode";
    c.tolerance = 2e-2;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      Complex ref = dense.correlate(req.a_op, req.b_op, series.times[i]);
      c.error = std::max(c.error, std::abs(series.values[i] - ref) /
                                      std::max(std::abs(ref), 1e-300));
    }
    c.pass = c.error <= c.tolerance;
    checks.push_back(c);
  }

  std::vector<std::vector<double>> rows;
  bool all_pass = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const OracleCheck& c = checks[i];
    std::printf("[%s] %s: error %.3e (tolerance %.1e)\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.error, c.tolerance);
    rows.push_back({static_cast<double>(i), c.error, c.tolerance,
                    c.pass ? 1.0 : 0.0});
    all_pass = all_pass && c.pass;
  }
  emit_csv(ctx, "oracle.csv", {"check", "error", "tolerance", "pass"}, rows);
  ctx.manifest.scalars["checks_passed"] = static_cast<double>(
      std::count_if(checks.begin(), checks.end(),
                    [](const OracleCheck& c) { return c.pass; }));
  finish(ctx);
  return all_pass ? kExitOk : kExitNumeric;
}

int cmd_bench_bonddim(const RunOptions& opts) {
  CommandContext ctx = make_context("bench-bonddim", opts);
  CorrelationRequest base = request_with_times(ctx.cfg);
  std::vector<double> cutoffs = {base.truncation.cutoff,
                                 base.truncation.cutoff * 1e2,
                                 base.truncation.cutoff * 1e-2};
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  std::vector<std::vector<double>> rows;
  for (int ordering = 0; ordering < 2; ++ordering) {
    for (double cutoff : cutoffs) {
      CorrelationRequest req = base;
      req.schedule = ordering == 0 ? tn::ScheduleOrder::MiddleOut
                                   : tn::ScheduleOrder::LeftToRight;
      req.truncation.cutoff = cutoff;
      CorrelationSeries series = correlation_series(req);
      for (std::size_t i = 0; i < series.times.size(); ++i)
        rows.push_back({static_cast<double>(ordering), cutoff, series.times[i],
                        static_cast<double>(series.max_bond[i]),
                        series.values[i].real(), series.values[i].imag()});
      ctx.manifest.beta_bar.insert(ctx.manifest.beta_bar.end(),
                                   series.max_bond.begin(),
                                   series.max_bond.end());
    }
  }
  emit_csv(ctx, "bonddim.csv",
           {"ordering", "cutoff", "t", "max_bond", "re_g", "im_g"}, rows);
  finish(ctx);
  return kExitOk;
}

int cmd_sweep(const RunOptions& opts) {
  CommandContext ctx = make_context("sweep", opts);
  std::vector<SweepRow> table =
      convergence_sweep(ctx.cfg, opts.sweep_axis, opts.sweep_values);
  std::vector<std::vector<double>> rows;
  rows.reserve(table.size());
  for (const SweepRow& row : table) rows.push_back({row.value, row.max_delta});
  emit_csv(ctx, "sweep.csv", {"value", "max_delta"}, rows);
  for (std::size_t i = 2; i < table.size(); ++i)
    if (table[i].max_delta > table[i - 1].max_delta) {
      ctx.manifest.warnings.push_back(
          "sweep differences are not monotone at value " +
          std::to_string(table[i].value));
      break;
    }
  finish(ctx);
  return kExitOk;
}

}  // namespace

std::vector<SweepRow> convergence_sweep(const RunConfig& cfg,
                                        const std::string& axis,
                                        const std::vector<double>& values) {
  if (values.size() < 2)
    throw ConfigError("sweep needs at least two values along the axis");
  std::vector<SweepRow> table;
  std::vector<Complex> previous;
  for (double value : values) {
    RunConfig local = cfg;
    if (axis == "n_steps") {
      local.n_steps = static_cast<int>(std::lround(value));
      if (local.n_steps < 1) throw ConfigError("sweep n_steps must be positive");
    } else if (axis == "cutoff") {
      local.truncation.cutoff = value;
    } else if (axis == "max_bond") {
      local.truncation.max_bond = static_cast<int>(std::lround(value));
    } else {
      throw ConfigError("unknown sweep axis '" + axis +
                        "' (expected n_steps, cutoff or max_bond)");
    }
    CorrelationSeries series = correlation_series(local.to_request());
    SweepRow row;
    row.value = value;
    row.max_delta = std::numeric_limits<double>::quiet_NaN();
    if (!previous.empty()) {
      row.max_delta = 0;
      for (std::size_t i = 0; i < series.values.size(); ++i)
        row.max_delta = std::max(row.max_delta,
                                 std::abs(series.values[i] - previous[i]));
    }
    table.push_back(row);
    previous = series.values;
  }
  return table;
}

int run_command(const std::string& command, const RunOptions& opts) {
  try {
    if (command == "correlate") return cmd_correlate(opts);
    if (command == "rate") return cmd_rate(opts);
    if (command == "sscf") return cmd_sscf(opts);
    if (command == "chi") return cmd_chi(opts);
    if (command == "equilibrium") return cmd_equilibrium(opts);
    if (command == "oracle-check") return cmd_oracle_check(opts);
    if (command == "bench-bonddim") return cmd_bench_bonddim(opts);
    if (command == "sweep") return cmd_sweep(opts);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return kExitCapacity;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}

}  // namespace ctpi::cli
