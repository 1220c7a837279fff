#include <cmath>
#include <cstring>
#include <random>
#include <doctest.h>

#include "ctpi/engine.hpp"
#include "ctpi/oracles.hpp"

using namespace ctpi;

namespace {

CorrelationRequest two_level_request() {
  CorrelationRequest req;
  req.system.h0 = -ops::sigma_x();
  req.a_op = ops::sigma_z();
  req.b_op = ops::sigma_z();
  req.beta = 1.0;
  req.n_steps = 12;
  return req;
}

bath::BathSpec ohmic_bath(double xi, double omega_c) {
  bath::BathSpec b;
  b.density = bath::OhmicFamily{1.0, xi, omega_c};
  b.coupling = {1.0, -1.0};
  return b;
}

bath::BathSpec mode_bath(double omega, double c) {
  bath::BathSpec b;
  b.density = bath::DiscreteModes{{{omega, c, 1.0}}};
  b.coupling = {1.0, -1.0};
  return b;
}

}  // namespace

TEST_CASE("decoupled series matches the closed form") {
  CorrelationRequest req = two_level_request();
  req.beta = 1.3;
  for (int i = 0; i < 12; ++i) req.times.push_back(0.35 * i);
  CorrelationSeries series = correlation_series(req);
  REQUIRE(series.values.size() == req.times.size());
  CHECK(series.warnings.empty());
  for (std::size_t i = 0; i < req.times.size(); ++i) {
    Complex ref = oracle::bare_correlation(req.system.h0, req.a_op, req.b_op,
                                           req.beta, req.times[i]);
    CHECK(std::abs(series.values[i] - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("identity insertions normalize to one") {
  CorrelationRequest req = two_level_request();
  req.a_op = ops::identity(2);
  req.b_op = ops::identity(2);
  req.baths = {ohmic_bath(0.3, 4.0)};
  req.n_steps = 6;
  req.times = {0.0, 0.8, 1.6};
  CorrelationSeries series = correlation_series(req);
  for (Complex v : series.values) CHECK(std::abs(v - Complex(1, 0)) < 1e-12);
}

TEST_CASE("partition function") {
  CorrelationRequest req = two_level_request();

  SUBCASE("decoupled value is Tr exp(-beta h0) for any t and N") {
    for (double t : {0.0, 1.7}) {
      Complex z = partition_function(req, t);
      CHECK(std::abs(z - Complex(2 * std::cosh(req.beta), 0)) < 1e-10);
    }
  }

  SUBCASE("with a bath, the t-dependence of Z is discretization error") {
    req.baths = {ohmic_bath(0.2, 3.0)};
    auto spread = [&](int n) {
      req.n_steps = n;
      Complex z0 = partition_function(req, 0.0);
      Complex z1 = partition_function(req, 2.0);
      return std::abs(z1 - z0) / std::abs(z0);
    };
    const double coarse = spread(8);
    const double fine = spread(24);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(fine < 0.5 * coarse);
    CHECK(fine < 5e-2);
  }
}

TEST_CASE("negative times conjugate the series") {
  CorrelationRequest req = two_level_request();
  req.baths = {ohmic_bath(0.25, 3.0)};
  req.n_steps = 8;
  req.times = {-1.1, 1.1};
  CorrelationSeries series = correlation_series(req);
  CHECK(std::abs(series.values[0] - std::conj(series.values[1])) < 1e-9);
}

TEST_CASE("Trotter error shrinks with N against the explicit oracle") {
  CorrelationRequest req = two_level_request();
  req.baths = {mode_bath(1.2, 0.3)};
  req.truncation.cutoff = 1e-12;
  const double t = 1.5;

  oracle::ExplicitBathOracle dense(req.system.h0, req.baths[0].coupling,
                                   {{1.2, 0.3, 1.0, 14}}, req.beta);
  CHECK(dense.boundary_occupation() < 1e-6);
  Complex exact = dense.correlate(req.a_op, req.b_op, t);

  std::vector<Complex> g;
  for (int n : {8, 16, 32}) {
    req.n_steps = n;
    req.times = {t};
    g.push_back(correlation_series(req).values[0]);
  }
  const double d8 = std::abs(g[0] - exact);
  const double d16 = std::abs(g[1] - exact);
  const double d32 = std::abs(g[2] - exact);
  CAPTURE(d8);
  CAPTURE(d16);
  CAPTURE(d32);
  CHECK(d16 < d8);
  CHECK(d32 < d16);
  CHECK(std::abs(g[0] - g[1]) > std::abs(g[1] - g[2]));
}

TEST_CASE("series evaluation is deterministic") {
  CorrelationRequest req = two_level_request();
  req.baths = {ohmic_bath(0.3, 2.0)};
  req.n_steps = 6;
  req.times = {0.0, 0.5, 1.0, 1.5};
  CorrelationSeries a = correlation_series(req);
  CorrelationSeries b = correlation_series(req);
  REQUIRE(a.values.size() == b.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(),
                    a.values.size() * sizeof(Complex)) == 0);
  CHECK(a.max_bond == b.max_bond);
}

TEST_CASE("request validation") {
  CorrelationRequest req = two_level_request();
  SUBCASE("no time points") {
    CHECK_THROWS_AS(correlation_series(req), std::invalid_argument);
  }
  SUBCASE("operator dimension mismatch") {
    req.a_op = ops::identity(3);
    req.times = {0.0};
    CHECK_THROWS_AS(correlation_series(req), std::invalid_argument);
  }
  SUBCASE("coupling size mismatch") {
    bath::BathSpec b = ohmic_bath(0.1, 1.0);
    b.coupling = {1.0};
    req.baths = {b};
    req.times = {0.0};
    CHECK_THROWS_AS(correlation_series(req), std::invalid_argument);
  }
  SUBCASE("nonpositive temperature") {
    req.beta = 0.0;
    req.times = {0.0};
    CHECK_THROWS_AS(correlation_series(req), std::invalid_argument);
  }
}

TEST_CASE("brute force agrees with the pipeline for a physical bath") {
  CorrelationRequest req = two_level_request();
  req.baths = {ohmic_bath(0.35, 2.5)};
  req.n_steps = 3;
  req.truncation.cutoff = 0;
  req.truncation.mode = tn::TruncationPolicy::Mode::Absolute;
  const double t = 0.9;
  TimepointWorkspace ws = prepare_timepoint(req, t);
  Matrix net = run_pipeline(req, ws, req.b_op).o;
  Matrix ref = brute_force_path_sum(req, t);
  CHECK((net - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("truncated bonds stay bounded and are reported") {
  CorrelationRequest req = two_level_request();
  req.baths = {ohmic_bath(0.4, 3.0)};
  req.n_steps = 10;
  req.truncation.cutoff = 1e-8;
  req.times = {2.0};
  CorrelationSeries series = correlation_series(req);
  CHECK(series.max_bond[0] >= 2);
  CHECK(series.max_bond[0] <= 64);
}
