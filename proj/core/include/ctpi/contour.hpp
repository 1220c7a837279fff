// contour.hpp -- the complex-time integration contour.
//
// A correlation function at time t is evaluated along the contour that runs
// from 0 out to t_c = t - i beta/2 in N steps of dt_c = t_c / N, then back
// to -i beta in N conjugate steps.  Path variables are labelled 1..2N+2 in
// the order they appear in the path sum: label 2N+2 sits at the contour
// start (time 0), labels N+2 and N+1 both sit at t_c on either side of the
// sandwiched operator, and label 1 sits at the end point -i beta.
#pragma once

#include <vector>

#include "ctpi/common.hpp"

namespace ctpi {

struct ContourGrid {
  int n_steps = 0;  // N
  double t = 0;
  double beta = 0;
  Complex dt_c{0, 0};
  std::vector<Complex> points;  // points[k-1] = contour time of variable k

  int size() const { return 2 * n_steps + 2; }
};

// beta > 0 and n_steps >= 1; negative t is allowed (used when spectra are
// assembled from directly computed negative-time points).
ContourGrid build_contour(int n_steps, double t, double beta);

// Midpoint cells tiling the contour, one per path variable.  Cell k spans
// [b_k, b_{k+1}] with b_k = cell_boundaries(grid)[k-1]; interior boundaries
// bisect neighbouring variables and the ends close the tiling, so every
// variable (including the pair flanking the sandwiched operator) carries a
// nonzero slice of the contour.
std::vector<Complex> cell_boundaries(const ContourGrid& grid);

}  // namespace ctpi
