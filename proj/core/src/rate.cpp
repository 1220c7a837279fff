#include <cmath>
#include <limits>
#include <sstream>

#include "ctpi/observables.hpp"
#include "ctpi/parallel.hpp"

namespace ctpi::obs {

Matrix flux_operator(const Matrix& h0, const Matrix& projector) {
  if (projector.rows() != h0.rows() || projector.cols() != h0.cols()) {
    throw std::invalid_argument("flux_operator: dimension mismatch");
  }
  const double scale = std::max(1.0, projector.cwiseAbs().maxCoeff());
  const double idem = (projector * projector - projector).cwiseAbs().maxCoeff();
  if (idem > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "flux_operator: projector not idempotent, |P^2 - P| = " << idem;
    throw std::invalid_argument(msg.str());
  }
  return kImag * (h0 * projector - projector * h0);
}

namespace {

std::vector<double> central_derivative(const std::vector<double>& t,
                                       const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> dy(n, 0.0);
  if (n < 2) return dy;
  dy[0] = (y[1] - y[0]) / (t[1] - t[0]);
  dy[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    dy[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  return dy;
}

double cumulative_trapezoid_at(const std::vector<double>& t,
                               const std::vector<double>& y, std::size_t stop) {
  double acc = 0;
  for (std::size_t i = 1; i <= stop && i < t.size(); ++i) {
    acc += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  }
  return acc;
}

}  // namespace

RateResult compute_rate(const CorrelationRequest& base, const Matrix& projector,
                        const RateSettings& settings) {
  validate_request(base);
  if (base.times.size() < 5) {
    throw std::invalid_argument("compute_rate: need at least 5 time points");
  }
  const int d = base.system.dim();
  const Matrix flux = flux_operator(base.system.h0, projector);
  const Matrix ident = ops::identity(d);

  const std::size_t npts = base.times.size();
  std::vector<TimepointWorkspace> workspaces;
  workspaces.reserve(npts);
  for (double t : base.times) workspaces.push_back(prepare_timepoint(base, t));

  // Three insertions per point: the projector (flux-side), the flux
  // operator (flux-flux) and the identity (normalization).
  std::vector<ObtResult> results(npts * 3);
  parallel_for(npts * 3, [&](std::size_t task) {
    const std::size_t pt = task / 3;
    const Matrix& ins = (task % 3 == 0) ? projector : (task % 3 == 1) ? flux : ident;
    results[task] = run_pipeline(base, workspaces[pt], ins);
  });

  RateResult out;
  out.times = base.times;
  out.c_fs.resize(npts);
  out.c_ff.resize(npts);
  out.max_bond.resize(npts);
  double max_imag = 0, max_abs = 0;
  for (std::size_t pt = 0; pt < npts; ++pt) {
    const Matrix& o_p = results[pt * 3].o;
    const Matrix& o_f = results[pt * 3 + 1].o;
    const Matrix& o_i = results[pt * 3 + 2].o;
    const Complex q = (projector * o_i).trace();
    if (pt == 0) out.reactant_partition = q.real();
    if (!(q.real() > 0) || std::abs(q.imag()) > 1e-6 * std::abs(q)) {
      std::ostringstream msg;
      msg << "reactant partition function not real positive at t = "
          << base.times[pt] << ": " << q.real() << " + " << q.imag() << "i";
      out.warnings.push_back(msg.str());
    }
    const Complex cfs = (flux * o_p).trace() / q;
    const Complex cff = (flux * o_f).trace() / q;
    out.c_fs[pt] = cfs.real();
    out.c_ff[pt] = cff.real();
    max_imag = std::max({max_imag, std::abs(cfs.imag()), std::abs(cff.imag())});
    max_abs = std::max({max_abs, std::abs(cfs), std::abs(cff)});
    out.max_bond[pt] = std::max({results[pt * 3].max_bond,
                                 results[pt * 3 + 1].max_bond,
                                 results[pt * 3 + 2].max_bond});
  }
  if (max_abs > 0 && max_imag > 1e-8 * max_abs) {
    std::ostringstream msg;
    msg << "flux correlations have imaginary residue " << max_imag
        << " (scale " << max_abs << "); expected real for Hermitian operators";
    out.warnings.push_back(msg.str());
  }

  // Plateau: the relative slope of C_fs must stay below tolerance across
  // the trailing window.
  const double t_max = out.times.back();
  const double window = settings.plateau_fraction * (t_max - out.times.front());
  std::size_t plateau_idx = npts;  // index whose time is reported as plateau
  if (settings.plateau_override) {
    const double target = *settings.plateau_override;
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < npts; ++i) {
      const double dist = std::abs(out.times[i] - target);
      if (dist < best) {
        best = dist;
        plateau_idx = i;
      }
    }
    out.plateau_time = out.times[plateau_idx];
  } else {
    const std::vector<double> slope = central_derivative(out.times, out.c_fs);
    const double start = t_max - window;
    bool ok = true;
    double denom_floor = 0;
    for (std::size_t i = 0; i < npts; ++i) {
      denom_floor = std::max(denom_floor, std::abs(out.c_fs[i]));
    }
    denom_floor *= 1e-12;
    for (std::size_t i = 0; i < npts; ++i) {
      if (out.times[i] < start) continue;
      const double denom = std::max(std::abs(out.c_fs[i]), denom_floor);
      if (denom == 0 || std::abs(slope[i]) * window / denom >= settings.plateau_tol) {
        ok = false;
        break;
      }
    }
    if (ok) {
      const double mid = t_max - 0.5 * window;
      double best = std::numeric_limits<double>::max();
      for (std::size_t i = 0; i < npts; ++i) {
        const double dist = std::abs(out.times[i] - mid);
        if (dist < best) {
          best = dist;
          plateau_idx = i;
        }
      }
      out.plateau_time = out.times[plateau_idx];
    }
  }

  if (out.plateau_time) {
    out.rate_from_plateau = out.c_fs[plateau_idx];
    out.rate_from_integral = cumulative_trapezoid_at(out.times, out.c_ff, plateau_idx);
  } else {
    out.rate_from_plateau = std::numeric_limits<double>::quiet_NaN();
    out.rate_from_integral = std::numeric_limits<double>::quiet_NaN();
    out.warnings.push_back(
        "no plateau detected in the trailing window; extend t_max or supply "
        "plateau_override");
  }
  return out;
}

}  // namespace ctpi::obs
