// quadrature.hpp -- adaptive Gauss-Kronrod integration of complex integrands.
#pragma once

#include <functional>

#include "ctpi/common.hpp"

namespace ctpi {

struct QuadratureSettings {
  double rel_tol = 1e-10;        // target relative error of each integral
  double omega_max_factor = 50;  // upper limit as a multiple of omega_c
  double low_freq_fraction = 1e-6;  // series handling below this * omega_c
  int subdivision_limit = 2000;
};

// Integrates f over [a, b] with a 7-15 Gauss-Kronrod rule, bisecting the
// worst interval until the accumulated error estimate drops below
// rel_tol * |result|.  Endpoints are never evaluated.  `initial_segments`
// seeds the interval list so oscillatory integrands are sampled densely
// enough for the error estimate to be trustworthy.
Complex adaptive_gauss_kronrod(const std::function<Complex(double)>& f,
                               double a, double b, double rel_tol,
                               int subdivision_limit,
                               int initial_segments = 1);

}  // namespace ctpi
