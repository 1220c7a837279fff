#include "ctpi/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctpi::bath {

namespace {

double ohmic_value(const OhmicFamily& o, double omega) {
  if (omega == 0.0) return 0.0;
  return 0.5 * kPi * o.xi * std::pow(omega, o.s) *
         std::pow(o.omega_c, 1.0 - o.s) * std::exp(-omega / o.omega_c);
}

double tabulated_value(const Tabulated& t, double omega) {
  if (t.omega.empty() || omega < t.omega.front() || omega > t.omega.back()) {
    return 0.0;
  }
  auto it = std::upper_bound(t.omega.begin(), t.omega.end(), omega);
  if (it == t.omega.begin()) return t.j.front();
  std::size_t hi = static_cast<std::size_t>(it - t.omega.begin());
  if (hi >= t.omega.size()) return t.j.back();
  std::size_t lo = hi - 1;
  const double wa = t.omega[lo], wb = t.omega[hi];
  const double ja = t.j[lo], jb = t.j[hi];
  const double frac = (omega - wa) / (wb - wa);
  // Power-law segments keep the interpolant positive without overshoot;
  // fall back to linear when a sample or an abscissa is zero.
  if (ja > 0.0 && jb > 0.0 && wa > 0.0) {
    const double lfrac = std::log(omega / wa) / std::log(wb / wa);
    return ja * std::pow(jb / ja, lfrac);
  }
  return ja + frac * (jb - ja);
}

}  // namespace

void validate_density(const SpectralDensity& sd) {
  if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
    if (!(o->s > 0.0)) throw std::invalid_argument("spectral density: s must be > 0");
    if (o->xi < 0.0) throw std::invalid_argument("spectral density: xi must be >= 0");
    if (!(o->omega_c > 0.0)) {
      throw std::invalid_argument("spectral density: omega_c must be > 0");
    }
    return;
  }
  if (const auto* t = std::get_if<Tabulated>(&sd)) {
    if (t->omega.size() != t->j.size() || t->omega.size() < 2) {
      throw std::invalid_argument("tabulated density: need >= 2 matching samples");
    }
    for (std::size_t i = 0; i < t->omega.size(); ++i) {
      if (t->omega[i] < 0.0 || !std::isfinite(t->omega[i]) ||
          t->j[i] < 0.0 || !std::isfinite(t->j[i])) {
        throw std::invalid_argument("tabulated density: samples must be finite and >= 0");
      }
      if (i > 0 && t->omega[i] <= t->omega[i - 1]) {
        throw std::invalid_argument("tabulated density: omega must be strictly increasing");
      }
    }
    if (t->omega.front() == 0.0 && t->j.front() != 0.0) {
      throw std::invalid_argument("tabulated density: J(0) must vanish");
    }
    return;
  }
  const auto& d = std::get<DiscreteModes>(sd);
  for (const auto& mode : d.modes) {
    if (!(mode.omega > 0.0)) {
      throw std::invalid_argument("discrete modes: omega must be > 0");
    }
    if (!(mode.m > 0.0)) throw std::invalid_argument("discrete modes: m must be > 0");
  }
}

double eval_spectral_density(const SpectralDensity& sd, double omega) {
  if (omega < 0.0) {
    throw std::invalid_argument("eval_spectral_density: omega must be >= 0");
  }
  if (const auto* o = std::get_if<OhmicFamily>(&sd)) return ohmic_value(*o, omega);
  if (const auto* t = std::get_if<Tabulated>(&sd)) return tabulated_value(*t, omega);
  throw std::invalid_argument(
      "eval_spectral_density: discrete modes have no pointwise value");
}

bool is_trivial(const SpectralDensity& sd) {
  if (const auto* o = std::get_if<OhmicFamily>(&sd)) return o->xi == 0.0;
  if (const auto* t = std::get_if<Tabulated>(&sd)) {
    return std::all_of(t->j.begin(), t->j.end(), [](double v) { return v == 0.0; });
  }
  const auto& d = std::get<DiscreteModes>(sd);
  return std::all_of(d.modes.begin(), d.modes.end(),
                     [](const DiscreteModes::Mode& m) { return m.c == 0.0; });
}

double omega_upper(const SpectralDensity& sd, const QuadratureSettings& q) {
  if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
    return q.omega_max_factor * o->omega_c;
  }
  if (const auto* t = std::get_if<Tabulated>(&sd)) return t->omega.back();
  throw std::invalid_argument("omega_upper: discrete modes need no cutoff");
}

Complex cos_over_sinh(Complex b, double x) {
  // cos(B)/sinh(x) = (e^{iB-x} + e^{-iB-x}) / (1 - e^{-2x}); both exponents
  // have non-positive real part whenever |Im B| <= x.
  const Complex ib = kImag * b;
  const Complex num = std::exp(ib - x) + std::exp(-ib - x);
  return num / (-std::expm1(-2.0 * x));
}

Complex bath_integral(const SpectralDensity& sd, const QuadratureSettings& q,
                      const std::function<Complex(double)>& g,
                      double low_power, Complex low_coeff, double osc_scale) {
  if (is_trivial(sd)) return Complex{0, 0};

  if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
    Complex sum{0, 0};
    for (const auto& mode : d->modes) {
      const double weight = 0.5 * kPi * mode.c * mode.c / (mode.m * mode.omega);
      sum += weight * g(mode.omega);
    }
    return sum;
  }

  const double upper = omega_upper(sd, q);
  double lower = 0.0;
  Complex head{0, 0};
  if (const auto* o = std::get_if<OhmicFamily>(&sd)) {
    // Below omega_lo the integrand is (pi/2) xi omega_c^{1-s} low_coeff *
    // omega^{s + low_power}; integrate that power law analytically.
    lower = q.low_freq_fraction * o->omega_c;
    const double p = o->s + low_power;
    if (p <= -1.0) {
      throw NumericError("bath integral diverges at omega -> 0");
    }
    head = 0.5 * kPi * o->xi * std::pow(o->omega_c, 1.0 - o->s) * low_coeff *
           std::pow(lower, p + 1.0) / (p + 1.0);
  } else {
    const auto& t = std::get<Tabulated>(sd);
    lower = t.omega.front();  // J vanishes below the first sample
  }
  if (lower >= upper) return head;

  // Integrate in u with omega = u^2: the family's omega^{s-1}-type growth
  // at the low edge becomes u^{2s-1}, smooth for every s > 0, so the
  // subdivision budget goes to the oscillation instead of the edge.
  const double u_lo = std::sqrt(lower);
  const double u_hi = std::sqrt(upper);
  auto integrand = [&](double u) {
    const double omega = u * u;
    return 2.0 * u * eval_spectral_density(sd, omega) * g(omega);
  };
  // Seed so the fastest local oscillation, phase rate 2 u osc_scale at the
  // top of the range, gets a panel every couple of cycles.
  const double cycles = osc_scale * u_hi * (u_hi - u_lo) / kPi;
  int seeds = static_cast<int>(std::ceil(cycles / 2.0));
  seeds = std::clamp(seeds, 1, 256);
  return head + adaptive_gauss_kronrod(integrand, u_lo, u_hi, q.rel_tol,
                                       q.subdivision_limit, seeds);
}

Complex bath_response_alpha(const SpectralDensity& sd, double beta,
                            Complex tau, const QuadratureSettings& q) {
  if (!(beta > 0.0)) throw std::invalid_argument("bath_response_alpha: beta must be > 0");
  const double slack = 1e-9 * beta;
  if (tau.imag() > slack || tau.imag() < -beta - slack) {
    std::ostringstream msg;
    msg << "bath_response_alpha: Im(tau) = " << tau.imag()
        << " outside [-beta, 0], integrand diverges";
    throw std::invalid_argument(msg.str());
  }
  const Complex shift = tau + kImag * (0.5 * beta);
  auto g = [&](double omega) {
    return cos_over_sinh(omega * shift, 0.5 * beta * omega);
  };
  // cos/sinh ~ 2/(beta omega) as omega -> 0.
  const Complex low_coeff{2.0 / beta, 0.0};
  return bath_integral(sd, q, g, -1.0, low_coeff, std::abs(shift)) / kPi;
}

}  // namespace ctpi::bath
