// units.hpp -- spectroscopic unit conversions for the CLI boundary.
//
// Internal units are natural (hbar = k_B = 1) with time measured in ps.
// Energies and frequencies given in wavenumbers map to angular frequency
// via omega = 2*pi*c*nu with c in cm/ps, so 1 cm^-1 = 0.18836516 rad/ps.
#pragma once

namespace ctpi::units {

inline constexpr double kSpeedOfLightCmPerPs = 0.0299792458;
inline constexpr double kBoltzmannWavenumberPerK = 0.695034800;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// cm^-1 -> rad/ps (equivalently: energy in hbar=1 units with ps time).
inline double wavenumber_to_angular(double wavenumber) {
  return kTwoPi * kSpeedOfLightCmPerPs * wavenumber;
}

inline double angular_to_wavenumber(double omega) {
  return omega / (kTwoPi * kSpeedOfLightCmPerPs);
}

// Temperature in K -> inverse energy beta = 1/(k_B T) in ps/rad.
inline double kelvin_to_beta(double temperature) {
  return 1.0 / wavenumber_to_angular(kBoltzmannWavenumberPerK * temperature);
}

}  // namespace ctpi::units
