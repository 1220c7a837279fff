#include <cmath>
#include <sstream>

#include "ctpi/observables.hpp"

namespace ctpi::obs {

EquilibriumResult equilibrium_density_matrix(const CorrelationRequest& base) {
  CorrelationRequest req = base;
  const int d = req.system.dim();
  req.b_op = ops::identity(d);
  req.a_op = ops::identity(d);

  const ObtResult obt = compute_obt(req, 0.0);
  const Complex z = obt.o.trace();
  if (!(std::abs(z) > 0)) {
    throw NumericError("equilibrium: vanishing partition function");
  }

  EquilibriumResult out;
  out.max_bond = obt.max_bond;
  out.rho = obt.o / z;

  const double trace_err = std::abs(out.rho.trace() - Complex{1, 0});
  if (trace_err > 1e-10) {
    std::ostringstream msg;
    msg << "equilibrium: trace deviates from 1 by " << trace_err;
    throw NumericError(msg.str());
  }
  const double herm = (out.rho - out.rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-8) {
    std::ostringstream msg;
    msg << "density matrix hermiticity residue " << herm;
    out.warnings.push_back(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (out.rho + out.rho.adjoint()));
  if (es.info() != Eigen::Success) {
    throw NumericError("equilibrium: eigendecomposition failed");
  }
  out.eigenvalues = es.eigenvalues();
  if (out.eigenvalues.minCoeff() < -1e-8) {
    std::ostringstream msg;
    msg << "equilibrium: negative population " << out.eigenvalues.minCoeff();
    throw NumericError(msg.str());
  }

  out.purity = 0;
  out.entropy = 0;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double p = std::max(out.eigenvalues[i], 0.0);
    out.purity += p * p;
    if (p > 0) out.entropy -= p * std::log(p);
  }
  const double max_entropy = std::log(static_cast<double>(d));
  if (out.entropy < -1e-12 || out.entropy > max_entropy + 1e-10) {
    std::ostringstream msg;
    msg << "equilibrium: entropy " << out.entropy << " outside [0, ln d]";
    throw NumericError(msg.str());
  }
  return out;
}

}  // namespace ctpi::obs
