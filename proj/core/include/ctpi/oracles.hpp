// oracles.hpp -- independent dense references for validating the engine.
//
// ExplicitBathOracle diagonalizes the full system + discrete-bath
// Hamiltonian in a truncated Fock space and evaluates the same complex-time
// correlation functions without any path discretization.  With an empty
// mode list it reduces to the bare (decoupled) system reference.
#pragma once

#include <vector>

#include "ctpi/common.hpp"

namespace ctpi::oracle {

struct DiscreteBathMode {
  double omega = 1.0;
  double c = 0.0;
  double m = 1.0;
  int fock = 8;  // Fock levels kept for this mode
};

class ExplicitBathOracle {
 public:
  // H = h0 (x) 1 + sum_j [w_j (n_j + 1/2) - c_j s (x) (a_j + a_j^dag) /
  // sqrt(2 m_j w_j)] + s^2 sum_j c_j^2/(2 m_j w_j^2), with s the diagonal
  // coupling operator given by its eigenvalues.  Total dimension is capped
  // at 4000.
  ExplicitBathOracle(const Matrix& h0, const std::vector<double>& coupling,
                     const std::vector<DiscreteBathMode>& modes, double beta);

  // G_AB(t) = Tr(A e^{i H conj(t_c)} B e^{-i H t_c}) / Tr(e^{-beta H}).
  Complex correlate(const Matrix& a_op, const Matrix& b_op, double t) const;

  // Thermal weight of the highest kept Fock level, maximized over modes;
  // above ~1e-8 the truncation is suspect.
  double boundary_occupation() const { return boundary_occupation_; }

  double log_partition() const { return log_z_; }

 private:
  int sys_dim_;
  int total_dim_;
  double beta_;
  Eigen::VectorXd evals_;   // shifted so the ground state sits at zero
  Matrix evecs_;
  double log_z_;
  double boundary_occupation_;

  Matrix lift(const Matrix& sys_op) const;  // sys_op (x) identity
  std::vector<int> fock_dims_;
};

// Decoupled-system correlation function, the xi = 0 closed form.
Complex bare_correlation(const Matrix& h0, const Matrix& a_op,
                         const Matrix& b_op, double beta, double t);

// Standard (real-time) correlation <A(t) B> over the same Hamiltonian;
// used to cross-check spectra through an independent route.
Complex bare_standard_correlation(const Matrix& h0, const Matrix& a_op,
                                  const Matrix& b_op, double beta, double t);

}  // namespace ctpi::oracle
