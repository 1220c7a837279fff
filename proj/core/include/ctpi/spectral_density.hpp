// spectral_density.hpp -- harmonic bath models and J-weighted integrals.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ctpi/common.hpp"
#include "ctpi/quadrature.hpp"

namespace ctpi::bath {

// J(omega) = (pi/2) * xi * omega^s * omega_c^(1-s) * exp(-omega/omega_c).
// s < 1 sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic.
struct OhmicFamily {
  double s = 1.0;
  double xi = 0.0;
  double omega_c = 1.0;
};

// Sampled density, power-law interpolation between samples, zero outside
// the tabulated range.
struct Tabulated {
  std::vector<double> omega;
  std::vector<double> j;
};

// Finite collection of harmonic modes: J(omega) is a sum of delta spikes
// with weight (pi/2) c^2/(m omega) each, so J-weighted integrals collapse
// to closed-form sums.
struct DiscreteModes {
  struct Mode {
    double omega = 1.0;
    double c = 0.0;
    double m = 1.0;
  };
  std::vector<Mode> modes;
};

using SpectralDensity = std::variant<OhmicFamily, Tabulated, DiscreteModes>;

// Throws std::invalid_argument when parameters are out of range.
void validate_density(const SpectralDensity& sd);

// Pointwise J(omega) for the continuous forms.  DiscreteModes has no
// pointwise value and is rejected.
double eval_spectral_density(const SpectralDensity& sd, double omega);

// True when the density is identically zero (decoupled bath fast path).
bool is_trivial(const SpectralDensity& sd);

// Upper integration limit used for this density.
double omega_upper(const SpectralDensity& sd, const QuadratureSettings& q);

// Integral of J(omega) * g(omega) over omega in (0, inf).  For continuous
// densities the small-omega part below low_freq_fraction * omega_c is
// handled by the leading power law: the integrand must behave like
// J(omega) * low_coeff * omega^low_power there.  osc_scale is the largest
// |time| appearing inside the trigonometric kernel and controls the seed
// density of the adaptive rule.  DiscreteModes bypass quadrature entirely.
Complex bath_integral(const SpectralDensity& sd, const QuadratureSettings& q,
                      const std::function<Complex(double)>& g,
                      double low_power, Complex low_coeff, double osc_scale);

// Bath response function
//   alpha(tau) = (1/pi) Int dw J(w) cos(w (tau + i beta/2)) / sinh(beta w/2),
// the kernel whose double contour integral the discrete influence
// coefficients approximate.  Converges for Im(tau) in [-beta, 0].
Complex bath_response_alpha(const SpectralDensity& sd, double beta,
                            Complex tau, const QuadratureSettings& q);

// cos(B) / sinh(x) evaluated through shifted exponentials so that large x
// never overflows as long as |Im B| <= x.
Complex cos_over_sinh(Complex b, double x);

}  // namespace ctpi::bath
