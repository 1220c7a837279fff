#include <cmath>
#include <sstream>

#include "ctpi/observables.hpp"

namespace ctpi::obs {

namespace {

double uniform_step(const std::vector<double>& t, const char* who) {
  if (t.size() < 2) throw std::invalid_argument(std::string(who) + ": series too short");
  const double dt = t[1] - t[0];
  if (!(dt > 0)) throw std::invalid_argument(std::string(who) + ": times must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument(std::string(who) + ": time grid must be uniform");
    }
  }
  return dt;
}

}  // namespace

CorrelationSeries symmetrize_by_conjugation(const CorrelationSeries& series) {
  uniform_step(series.times, "symmetrize_by_conjugation");
  if (std::abs(series.times.front()) > 1e-12) {
    throw std::invalid_argument("symmetrize_by_conjugation: series must start at t = 0");
  }
  const std::size_t n = series.times.size();
  CorrelationSeries out;
  out.warnings = series.warnings;
  out.times.reserve(2 * n - 1);
  out.values.reserve(2 * n - 1);
  for (std::size_t i = n; i-- > 1;) {
    out.times.push_back(-series.times[i]);
    out.values.push_back(std::conj(series.values[i]));
    out.z_values.push_back(std::conj(series.z_values.empty() ? Complex{0, 0}
                                                             : series.z_values[i]));
    out.max_bond.push_back(series.max_bond.empty() ? 1 : series.max_bond[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.times.push_back(series.times[i]);
    out.values.push_back(series.values[i]);
    out.z_values.push_back(series.z_values.empty() ? Complex{0, 0}
                                                   : series.z_values[i]);
    out.max_bond.push_back(series.max_bond.empty() ? 1 : series.max_bond[i]);
  }
  return out;
}

SpectrumResult sscf_spectrum(const CorrelationSeries& series, double beta,
                             Window window, int zero_pad) {
  if (!(beta > 0)) throw std::invalid_argument("sscf_spectrum: beta must be > 0");
  if (zero_pad < 1) throw std::invalid_argument("sscf_spectrum: zero_pad >= 1");
  const double dt = uniform_step(series.times, "sscf_spectrum");
  const std::size_t n = series.times.size();
  const double t_lo = series.times.front(), t_hi = series.times.back();
  if (std::abs(t_lo + t_hi) > 1e-9 * std::max(1.0, t_hi)) {
    throw std::invalid_argument(
        "sscf_spectrum: series must cover a symmetric time range");
  }
  const double t_max = t_hi;

  std::vector<double> weights(n, 1.0);
  if (window == Window::Hann && t_max > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = 0.5 * (1.0 + std::cos(kPi * series.times[i] / t_max));
    }
  }

  // The exact symmetrized correlation function is real and even in t for
  // Hermitian A = B; any imaginary residue in the series is discretization
  // error.  Only the real part enters the transform, which therefore
  // reduces to a cosine sum and keeps S(omega) even (and chi'' odd) to
  // machine precision instead of leaking the residue into odd-in-omega
  // contamination.
  double max_imag = 0, max_mag = 0;
  for (std::size_t i = 0; i < n; ++i) {
    max_imag = std::max(max_imag, std::abs(series.values[i].imag()));
    max_mag = std::max(max_mag, std::abs(series.values[i]));
  }

  // Padded bin spacing; the transform itself is evaluated directly so any
  // grid length works and bins stay symmetric about zero.
  const std::size_t padded = n * static_cast<std::size_t>(zero_pad);
  const double domega = 2.0 * kPi / (static_cast<double>(padded) * dt);
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(padded / 2);

  SpectrumResult out;
  out.window = window;
  out.zero_pad = zero_pad;
  out.omega.reserve(2 * static_cast<std::size_t>(half) + 1);
  out.g_omega.reserve(out.omega.capacity());
  out.s_omega.reserve(out.omega.capacity());
  for (std::ptrdiff_t m = -half; m <= half; ++m) {
    const double omega = domega * static_cast<double>(m);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights[i] * series.values[i].real() *
             std::cos(omega * series.times[i]);
    }
    const double g = dt * acc;
    out.omega.push_back(omega);
    out.g_omega.push_back(Complex{g, 0.0});
    out.s_omega.push_back(std::cosh(0.5 * beta * omega) * g);
  }
  if (max_mag > 0 && max_imag > 1e-6 * max_mag) {
    std::ostringstream msg;
    msg << "series has imaginary residue " << max_imag << " (scale " << max_mag
        << "); discarded by the symmetrized transform";
    out.warnings.push_back(msg.str());
  }
  return out;
}

void susceptibility(SpectrumResult& spectrum, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("susceptibility: beta must be > 0");
  const std::size_t n = spectrum.omega.size();
  if (n < 3) throw std::invalid_argument("susceptibility: spectrum too short");
  spectrum.chi_double_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    spectrum.chi_double_prime[i] =
        std::tanh(0.5 * beta * spectrum.omega[i]) * spectrum.s_omega[i];
  }

  // Dispersive part by a principal-value sum; the symmetric grid makes the
  // skipped diagonal term a second-order error.
  const double domega = spectrum.omega[1] - spectrum.omega[0];
  auto pv_sum = [&](std::size_t stride) {
    std::vector<double> chi(n, 0.0);
    for (std::size_t i = 0; i < n; i += 1) {
      double acc = 0;
      for (std::size_t j = i % stride; j < n; j += stride) {
        if (j == i) continue;
        acc += spectrum.chi_double_prime[j] /
               (spectrum.omega[j] - spectrum.omega[i]);
      }
      chi[i] = acc * domega * static_cast<double>(stride) / kPi;
    }
    return chi;
  };
  spectrum.chi_prime = pv_sum(1);

  // Estimate the discretization error by halving the resolution.
  const std::vector<double> coarse = pv_sum(2);
  double max_diff = 0, max_chi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diff = std::max(max_diff, std::abs(coarse[i] - spectrum.chi_prime[i]));
    max_chi = std::max(max_chi, std::abs(spectrum.chi_prime[i]));
  }
  if (max_chi > 0 && max_diff > 0.01 * max_chi) {
    std::ostringstream msg;
    msg << "Kramers-Kronig sum changes by " << max_diff
        << " when the grid is coarsened (scale " << max_chi
        << "); frequency resolution may be insufficient";
    spectrum.warnings.push_back(msg.str());
  }
}

}  // namespace ctpi::obs
