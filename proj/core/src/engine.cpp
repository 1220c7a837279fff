#include "ctpi/engine.hpp"

#include <cmath>
#include <sstream>

#include "ctpi/parallel.hpp"

namespace ctpi {

namespace {

bool is_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

void validate_request(const CorrelationRequest& req) {
  validate_system(req.system);
  const int d = req.system.dim();
  if (req.a_op.rows() != d || req.a_op.cols() != d ||
      req.b_op.rows() != d || req.b_op.cols() != d) {
    throw std::invalid_argument("request: operator dimensions must match system");
  }
  if (!(req.beta > 0)) throw std::invalid_argument("request: beta must be > 0");
  if (req.n_steps < 1) throw std::invalid_argument("request: n_steps must be >= 1");
  for (const auto& b : req.baths) {
    bath::validate_density(b.density);
    if (static_cast<int>(b.coupling.size()) != d) {
      throw std::invalid_argument("request: bath coupling eigenvalues must match dimension");
    }
  }
}

TimepointWorkspace prepare_timepoint(const CorrelationRequest& req, double t) {
  validate_request(req);
  TimepointWorkspace ws;
  ws.grid = build_contour(req.n_steps, t, req.beta);
  ws.propagators = build_propagators(req.system, ws.grid);
  if (req.baths.empty()) {
    // Decoupled run: a single zero-strength bath keeps the trace-out
    // pipeline uniform at negligible cost.
    bath::SpectralDensity zero = bath::OhmicFamily{1.0, 0.0, 1.0};
    ws.imatrices.push_back(bath::build_imatrix(zero, ws.grid, req.quadrature));
    ws.couplings.emplace_back(static_cast<std::size_t>(req.system.dim()), 0.0);
    return ws;
  }
  ws.imatrices.reserve(req.baths.size());
  ws.couplings.reserve(req.baths.size());
  for (const auto& b : req.baths) {
    ws.imatrices.push_back(bath::build_imatrix(b.density, ws.grid, req.quadrature));
    ws.couplings.push_back(b.coupling);
  }
  return ws;
}

ObtResult run_pipeline(const CorrelationRequest& req,
                       const TimepointWorkspace& ws, const Matrix& b_op) {
  tn::PathMps mps = tn::build_bare_pa_mps(ws.propagators, b_op, req.n_steps);
  const std::vector<int> sched =
      tn::application_schedule(req.n_steps, req.schedule);
  for (int target : sched) {
    tn::InfluenceOperator op = tn::build_influence_operator(
        target, mps.labels, ws.imatrices, ws.couplings);
    mps = tn::apply_influence_and_trace(mps, op, req.truncation, req.absorb);
  }
  ObtResult result;
  result.o = tn::finalize_two_site(mps, ws.imatrices, ws.couplings);
  result.max_bond = mps.max_bond_seen;
  if (!result.o.allFinite()) {
    std::ostringstream msg;
    msg << "pipeline produced non-finite amplitudes at t = " << ws.grid.t;
    throw NumericError(msg.str());
  }
  return result;
}

ObtResult compute_obt(const CorrelationRequest& req, double t) {
  const TimepointWorkspace ws = prepare_timepoint(req, t);
  return run_pipeline(req, ws, req.b_op);
}

Complex partition_function(const CorrelationRequest& req, double t) {
  const TimepointWorkspace ws = prepare_timepoint(req, t);
  const ObtResult z = run_pipeline(req, ws, ops::identity(req.system.dim()));
  return z.o.trace();
}

CorrelationSeries correlation_series(const CorrelationRequest& req) {
  validate_request(req);
  if (req.times.empty()) {
    throw std::invalid_argument("correlation_series: no time points requested");
  }
  const std::size_t npts = req.times.size();
  const int d = req.system.dim();
  const bool b_is_identity = is_identity(req.b_op);

  // Phase 1: influence coefficients, parallel across entries inside each
  // build.  Phase 2: trace-out pipelines, parallel across (point, insert).
  std::vector<TimepointWorkspace> workspaces;
  workspaces.reserve(npts);
  for (double t : req.times) workspaces.push_back(prepare_timepoint(req, t));

  const int pipes = b_is_identity ? 1 : 2;
  std::vector<ObtResult> results(npts * static_cast<std::size_t>(pipes));
  const Matrix ident = ops::identity(d);
  parallel_for(npts * static_cast<std::size_t>(pipes), [&](std::size_t task) {
    const std::size_t pt = task / static_cast<std::size_t>(pipes);
    const bool identity_run = (task % static_cast<std::size_t>(pipes)) == 1 ||
                              (b_is_identity);
    results[task] = run_pipeline(req, workspaces[pt],
                                 identity_run ? ident : req.b_op);
  });

  CorrelationSeries series;
  series.times = req.times;
  series.values.resize(npts);
  series.z_values.resize(npts);
  series.max_bond.resize(npts);
  for (std::size_t pt = 0; pt < npts; ++pt) {
    const ObtResult& ob = results[pt * static_cast<std::size_t>(pipes)];
    const ObtResult& oi =
        results[pt * static_cast<std::size_t>(pipes) + (pipes - 1)];
    const Complex z = oi.o.trace();
    if (z == Complex{0, 0}) {
      std::ostringstream msg;
      msg << "vanishing normalization at t = " << req.times[pt];
      throw NumericError(msg.str());
    }
    if (std::abs(z.imag()) > 1e-6 * std::abs(z) || z.real() <= 0) {
      std::ostringstream msg;
      msg << "normalization at t = " << req.times[pt]
          << " deviates from real positive: " << z.real() << " + "
          << z.imag() << "i";
      series.warnings.push_back(msg.str());
    }
    series.values[pt] = (req.a_op * ob.o).trace() / z;
    series.z_values[pt] = z;
    series.max_bond[pt] = std::max(ob.max_bond, oi.max_bond);
  }
  return series;
}

Matrix brute_force_path_sum(const CorrelationRequest& req, double t) {
  validate_request(req);
  return brute_force_path_sum(req, prepare_timepoint(req, t), req.b_op);
}

Matrix brute_force_path_sum(const CorrelationRequest& req,
                            const TimepointWorkspace& ws, const Matrix& b_op) {
  const int d = req.system.dim();
  const int len = 2 * req.n_steps + 2;
  const double total = std::pow(static_cast<double>(d), len);
  if (total > 1e7) {
    throw CapacityError("brute_force_path_sum: more than 1e7 paths");
  }

  const Matrix& u = ws.propagators.u;
  const Matrix& u_dag = ws.propagators.u_dag;
  const int n = req.n_steps;

  Matrix o = Matrix::Zero(d, d);
  std::vector<int> path(static_cast<std::size_t>(len), 0);
  const auto npaths = static_cast<std::size_t>(total);
  for (std::size_t idx = 0; idx < npaths; ++idx) {
    std::size_t rem = idx;
    for (int j = len - 1; j >= 0; --j) {
      path[static_cast<std::size_t>(j)] = static_cast<int>(rem % d);
      rem /= d;
    }
    Complex amp{1, 0};
    for (int j = 0; j < n; ++j) {
      amp *= u_dag(path[static_cast<std::size_t>(j)],
                   path[static_cast<std::size_t>(j + 1)]);
    }
    amp *= b_op(path[static_cast<std::size_t>(n)],
                path[static_cast<std::size_t>(n + 1)]);
    for (int j = n + 1; j < len - 1; ++j) {
      amp *= u(path[static_cast<std::size_t>(j)],
               path[static_cast<std::size_t>(j + 1)]);
    }
    if (amp == Complex{0, 0}) continue;
    Complex infl{0, 0};
    for (std::size_t b = 0; b < ws.imatrices.size(); ++b) {
      const auto& entries = ws.imatrices[b].entries;
      const auto& c = ws.couplings[b];
      for (int k = 0; k < len; ++k) {
        const double ck = c[static_cast<std::size_t>(path[static_cast<std::size_t>(k)])];
        for (int kp = 0; kp <= k; ++kp) {
          const double ckp =
              c[static_cast<std::size_t>(path[static_cast<std::size_t>(kp)])];
          infl += entries(k, kp) * (ck * ckp);
        }
      }
    }
    o(path.front(), path.back()) += amp * std::exp(-infl);
  }
  return o;
}

}  // namespace ctpi
