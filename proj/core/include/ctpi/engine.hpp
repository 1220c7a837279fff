// engine.hpp -- end-to-end evaluation of complex-time correlation functions.
//
// For each requested time t the engine discretizes the contour, builds the
// influence coefficients for every bath, assembles the bare path-amplitude
// MPS for the sandwiched operator, traces out interior variables in the
// scheduled order, and reduces the final two-site chain to the operator
// O_B.  The correlation value is Tr(A O_B) / Tr(O_I), with the identity
// run sharing the contour and coefficients so discretization errors cancel
// between numerator and normalization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctpi/contour.hpp"
#include "ctpi/imatrix.hpp"
#include "ctpi/influence.hpp"
#include "ctpi/system.hpp"

namespace ctpi {

struct CorrelationRequest {
  SystemSpec system;
  std::vector<bath::BathSpec> baths;
  Matrix a_op;
  Matrix b_op;
  double beta = 1.0;
  int n_steps = 30;
  std::vector<double> times;
  tn::TruncationPolicy truncation;
  QuadratureSettings quadrature;
  tn::AbsorbSide absorb = tn::AbsorbSide::Left;
  tn::ScheduleOrder schedule = tn::ScheduleOrder::MiddleOut;
};

void validate_request(const CorrelationRequest& req);

// Contour-level work shared by every operator insertion at one time point.
struct TimepointWorkspace {
  ContourGrid grid;
  PropagatorPair propagators;
  std::vector<bath::IMatrix> imatrices;
  std::vector<std::vector<double>> couplings;
};

TimepointWorkspace prepare_timepoint(const CorrelationRequest& req, double t);

struct ObtResult {
  Matrix o;          // <s_1|O_B|s_{2N+2}>
  int max_bond = 1;  // largest post-truncation bond seen in this pipeline
};

// Full trace-out pipeline for one sandwiched operator on a prepared
// workspace.  Single-threaded; callers parallelize across pipelines.
ObtResult run_pipeline(const CorrelationRequest& req,
                       const TimepointWorkspace& ws, const Matrix& b_op);

ObtResult compute_obt(const CorrelationRequest& req, double t);

// Tr_sys O_I, which equals the full system+bath partition function divided
// by nothing: the identity insertion collapses the two contour branches
// into exp(-beta H) exactly, for any t and N.
Complex partition_function(const CorrelationRequest& req, double t);

struct CorrelationSeries {
  std::vector<double> times;
  std::vector<Complex> values;    // G_AB(t)
  std::vector<Complex> z_values;  // Tr_sys O_I per point
  std::vector<int> max_bond;      // per point, max across pipelines
  std::vector<std::string> warnings;
};

CorrelationSeries correlation_series(const CorrelationRequest& req);

// Explicit sum over all d^(2N+2) discretized paths with the same contour,
// propagators and influence coefficients as the tensor network pipeline.
// Guarded to 1e7 paths.  The workspace overload accepts hand-built
// influence coefficients.
Matrix brute_force_path_sum(const CorrelationRequest& req, double t);
Matrix brute_force_path_sum(const CorrelationRequest& req,
                            const TimepointWorkspace& ws, const Matrix& b_op);

}  // namespace ctpi
