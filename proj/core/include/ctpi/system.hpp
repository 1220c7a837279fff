// system.hpp -- system Hamiltonian, named operators, short-step propagators.
#pragma once

#include <string>

#include "ctpi/common.hpp"
#include "ctpi/contour.hpp"

namespace ctpi {

struct SystemSpec {
  Matrix h0;

  int dim() const { return static_cast<int>(h0.rows()); }
};

// Square, Hermitian within tolerance, dimension >= 2.
void validate_system(const SystemSpec& sys, double herm_tol = 1e-12);

// exp(-i h0 dt) for a Hermitian h0 and an arbitrary complex step.
Matrix propagator(const Matrix& h0, Complex dt);

struct PropagatorPair {
  Matrix u;      // exp(-i h0 dt_c), one forward contour step
  Matrix u_dag;  // exp(+i h0 conj(dt_c)), one backward contour step
};

// Both factors come from a single eigendecomposition of h0, so
// u_dag == adjoint(u) holds to roundoff and u * u_dag == exp(-beta h0 / N).
PropagatorPair build_propagators(const SystemSpec& sys, const ContourGrid& grid);

namespace ops {

Matrix identity(int dim);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix projector(int dim, int level);

}  // namespace ops

}  // namespace ctpi
