#include <cmath>
#include <doctest.h>

#include "ctpi/observables.hpp"
#include "ctpi/oracles.hpp"

using namespace ctpi;

namespace {

CorrelationRequest spin_boson(double xi, double omega_c, double beta, int n) {
  CorrelationRequest req;
  req.system.h0 = -ops::sigma_x();
  req.a_op = ops::sigma_z();
  req.b_op = ops::sigma_z();
  req.beta = beta;
  req.n_steps = n;
  if (xi != 0.0) {
    bath::BathSpec b;
    b.density = bath::OhmicFamily{1.0, xi, omega_c};
    b.coupling = {1.0, -1.0};
    req.baths = {b};
  }
  return req;
}

}  // namespace

TEST_CASE("flux operator") {
  const double omega = 0.7;
  Matrix h0 = -omega * ops::sigma_x();
  Matrix f = obs::flux_operator(h0, ops::projector(2, 0));
  CHECK((f - (-omega) * ops::sigma_y()).norm() < 1e-14);
  CHECK_THROWS_AS(obs::flux_operator(h0, ops::sigma_x()),
                  std::invalid_argument);
}

TEST_CASE("flux-side correlation starts at zero") {
  CorrelationRequest req = spin_boson(0.0, 1.0, 1.0, 8);
  req.times = {0.0, 0.3, 0.6, 0.9, 1.2};
  obs::RateSettings settings;
  settings.plateau_override = 0.6;
  obs::RateResult res = obs::compute_rate(req, ops::projector(2, 0), settings);
  CHECK(std::abs(res.c_fs[0]) < 1e-10);
  REQUIRE(res.plateau_time.has_value());
  CHECK(*res.plateau_time == doctest::Approx(0.6));
  CHECK(res.rate_from_plateau == doctest::Approx(res.c_fs[2]));
  CHECK(res.reactant_partition > 0);
}

TEST_CASE("plateau detection on a fast dissipative bath") {
  // Tunneling weak enough that the plateau decays much slower than the
  // trailing detection window, and a bath memory the contour still
  // resolves at this step count.
  CorrelationRequest req;
  req.system.h0 = -0.02 * ops::sigma_x();
  req.a_op = ops::identity(2);
  req.b_op = ops::identity(2);
  req.beta = 0.1;
  req.n_steps = 12;
  bath::BathSpec b;
  b.density = bath::OhmicFamily{1.0, 0.4, 10.0};
  b.coupling = {1.0, -1.0};
  req.baths = {b};
  req.truncation.cutoff = 1e-10;
  for (int i = 0; i <= 12; ++i) req.times.push_back(0.1 * i);

  obs::RateResult res = obs::compute_rate(req, ops::projector(2, 0));
  REQUIRE(res.plateau_time.has_value());
  CHECK(res.rate_from_plateau > 0);
  CHECK(res.rate_from_integral > 0);
  CHECK(std::abs(res.rate_from_plateau - res.rate_from_integral) <
        0.15 * std::abs(res.rate_from_plateau));
}

TEST_CASE("symmetrization by conjugation") {
  CorrelationSeries half;
  half.times = {0.0, 1.0};
  half.values = {Complex(1, 0), Complex(2, 3)};
  half.z_values = {Complex(5, 0), Complex(5, 0)};
  half.max_bond = {2, 3};
  CorrelationSeries sym = obs::symmetrize_by_conjugation(half);
  REQUIRE(sym.times.size() == 3);
  CHECK(sym.times[0] == -1.0);
  CHECK(sym.values[0] == Complex(2, -3));
  CHECK(sym.values[1] == Complex(1, 0));
  CHECK(sym.values[2] == Complex(2, 3));
  CHECK(sym.max_bond[0] == 3);
}

TEST_CASE("decoupled spectrum peaks at the level splitting") {
  CorrelationRequest req = spin_boson(0.0, 1.0, 0.8, 16);
  for (int i = 0; i <= 24; ++i) req.times.push_back(0.25 * i);
  CorrelationSeries sym = obs::symmetrize_by_conjugation(correlation_series(req));
  obs::SpectrumResult spec = obs::sscf_spectrum(sym, req.beta, obs::Window::Hann, 4);

  double best_omega = 0;
  double best = -1;
  double domega = spec.omega[1] - spec.omega[0];
  for (std::size_t i = 0; i < spec.omega.size(); ++i) {
    if (spec.omega[i] <= 0) continue;
    if (spec.s_omega[i] > best) {
      best = spec.s_omega[i];
      best_omega = spec.omega[i];
    }
  }
  CHECK(std::abs(best_omega - 2.0) <= domega + 1e-12);

  // S is even on the symmetric bin grid.
  const std::size_t n = spec.omega.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(spec.s_omega[i] ==
          doctest::Approx(spec.s_omega[n - 1 - i]).epsilon(1e-10));
  }
}

TEST_CASE("susceptibility symmetries") {
  CorrelationRequest req = spin_boson(0.0, 1.0, 0.8, 16);
  for (int i = 0; i <= 24; ++i) req.times.push_back(0.25 * i);
  CorrelationSeries sym = obs::symmetrize_by_conjugation(correlation_series(req));
  obs::SpectrumResult spec = obs::sscf_spectrum(sym, req.beta, obs::Window::Hann, 4);
  obs::susceptibility(spec, req.beta);

  const std::size_t n = spec.omega.size();
  const std::size_t mid = n / 2;
  CHECK(spec.omega[mid] == 0.0);
  CHECK(spec.chi_double_prime[mid] == 0.0);
  double scale = 0;
  for (double v : spec.chi_double_prime) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(std::isfinite(spec.chi_prime[i]));
    REQUIRE(std::isfinite(spec.chi_double_prime[i]));
    CHECK(std::abs(spec.chi_double_prime[i] +
                   spec.chi_double_prime[n - 1 - i]) < 1e-10 * scale);
    CHECK(std::abs(spec.chi_prime[i] - spec.chi_prime[n - 1 - i]) <
          1e-8 * std::max(1.0, std::abs(spec.chi_prime[i])));
  }
}

TEST_CASE("equilibrium density matrix, decoupled") {
  CorrelationRequest req = spin_boson(0.0, 1.0, 1.4, 10);
  obs::EquilibriumResult res = obs::equilibrium_density_matrix(req);
  Matrix expected = propagator(req.system.h0, Complex(0, -req.beta));
  expected /= expected.trace();
  CHECK((res.rho - expected).cwiseAbs().maxCoeff() < 1e-10);
  const double p0 = res.eigenvalues[0];
  const double p1 = res.eigenvalues[1];
  CHECK(res.purity == doctest::Approx(p0 * p0 + p1 * p1).epsilon(1e-10));
  CHECK(res.entropy ==
        doctest::Approx(-p0 * std::log(p0) - p1 * std::log(p1)).epsilon(1e-8));
}

TEST_CASE("equilibrium density matrix invariants with a bath") {
  CorrelationRequest req = spin_boson(0.3, 5.0, 1.0, 10);
  obs::EquilibriumResult res = obs::equilibrium_density_matrix(req);
  CHECK(std::abs(res.rho.trace() - Complex(1, 0)) < 1e-10);
  CHECK((res.rho - res.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < res.eigenvalues.size(); ++i)
    CHECK(res.eigenvalues[i] >= -1e-8);
  CHECK(res.entropy >= 0.0);
  CHECK(res.entropy <= std::log(2.0) + 1e-12);
  CHECK(res.purity >= 0.5 - 1e-12);
  CHECK(res.purity <= 1.0 + 1e-12);
  // The bath couples through sigma_z, suppressing sigma_x coherence
  // relative to the bare thermal state.
  Matrix bare = propagator(req.system.h0, Complex(0, -req.beta));
  bare /= bare.trace();
  CHECK(res.rho(0, 1).real() < bare(0, 1).real());
}
