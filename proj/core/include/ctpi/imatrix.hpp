// imatrix.hpp -- discretized influence coefficients on the contour.
//
// Entry (k, k') weights the pair of path variables k and k' in the
// influence functional:
//
//   I_kk  = (2/pi) Int dw J/(w^2 sinh(bw/2)) sin(w(w_k - ib)/2) sin(w w_k/2)
//   I_kk' = (4/pi) Int dw J/(w^2 sinh(bw/2))
//             * cos(w(m_k - m_k' - ib/2)) sin(w w_k/2) sin(w w_k'/2)
//
// with b = beta, w_k and m_k the width and midpoint of variable k's contour
// cell.  The off-diagonal integral converges only for k >= k' (the
// time-ordered pairs); the k < k' half is filled in by symmetry, which is
// also how the pair sum is consumed downstream.
#pragma once

#include <string>
#include <vector>

#include "ctpi/contour.hpp"
#include "ctpi/spectral_density.hpp"

namespace ctpi::bath {

struct BathSpec {
  SpectralDensity density;
  // Eigenvalues of the system-side coupling operator, one per system basis
  // state.  All coupling operators are diagonal in the path-sum basis.
  std::vector<double> coupling;
  std::string label;
};

struct IMatrix {
  Eigen::MatrixXcd entries;  // (2N+2) x (2N+2), symmetric
  int n_steps = 0;
  double t = 0;
  double beta = 0;

  Complex operator()(int k, int kp) const {
    return entries(k - 1, kp - 1);  // 1-based variable labels
  }
};

// Builds the full symmetric coefficient matrix for one bath.  Entries are
// computed independently (and in parallel) on the k >= k' triangle.
IMatrix build_imatrix(const SpectralDensity& sd, const ContourGrid& grid,
                      const QuadratureSettings& q);

}  // namespace ctpi::bath
