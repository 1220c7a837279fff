#include "ctpi/system.hpp"

#include <sstream>

namespace ctpi {

void validate_system(const SystemSpec& sys, double herm_tol) {
  if (sys.h0.rows() != sys.h0.cols()) {
    throw std::invalid_argument("system: h0 must be square");
  }
  if (sys.h0.rows() < 2) {
    throw std::invalid_argument("system: dimension must be >= 2");
  }
  const double scale = std::max(1.0, sys.h0.cwiseAbs().maxCoeff());
  const double asym = (sys.h0 - sys.h0.adjoint()).cwiseAbs().maxCoeff();
  if (asym > herm_tol * scale) {
    std::ostringstream msg;
    msg << "system: h0 not Hermitian, max |h0 - h0^dag| = " << asym;
    throw std::invalid_argument(msg.str());
  }
}

Matrix propagator(const Matrix& h0, Complex dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h0 + h0.adjoint()));
  if (es.info() != Eigen::Success) {
    throw NumericError("propagator: eigendecomposition failed");
  }
  const auto& vals = es.eigenvalues();
  Vector phases(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    phases[i] = std::exp(-kImag * vals[i] * dt);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

PropagatorPair build_propagators(const SystemSpec& sys, const ContourGrid& grid) {
  validate_system(sys);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sys.h0 + sys.h0.adjoint()));
  if (es.info() != Eigen::Success) {
    throw NumericError("build_propagators: eigendecomposition failed");
  }
  const auto& vals = es.eigenvalues();
  Vector fwd(vals.size()), bwd(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    fwd[i] = std::exp(-kImag * vals[i] * grid.dt_c);
    bwd[i] = std::exp(kImag * vals[i] * std::conj(grid.dt_c));
  }
  PropagatorPair pair;
  pair.u = es.eigenvectors() * fwd.asDiagonal() * es.eigenvectors().adjoint();
  pair.u_dag = es.eigenvectors() * bwd.asDiagonal() * es.eigenvectors().adjoint();
  return pair;
}

namespace ops {

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix projector(int dim, int level) {
  if (level < 0 || level >= dim) {
    throw std::invalid_argument("ops::projector: level out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(level, level) = 1;
  return m;
}

}  // namespace ops

}  // namespace ctpi
