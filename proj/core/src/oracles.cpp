#include "ctpi/oracles.hpp"

#include <cmath>

namespace ctpi::oracle {

namespace {

// Kronecker product helpers over the system (x) mode_1 (x) ... ordering.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix ladder_x(int fock, double m, double omega) {
  // (a + a^dag) / sqrt(2 m omega)
  Matrix x = Matrix::Zero(fock, fock);
  for (int n = 0; n + 1 < fock; ++n) {
    const double amp = std::sqrt(static_cast<double>(n + 1));
    x(n, n + 1) = amp;
    x(n + 1, n) = amp;
  }
  return x / std::sqrt(2.0 * m * omega);
}

Matrix number_op(int fock) {
  Matrix n = Matrix::Zero(fock, fock);
  for (int i = 0; i < fock; ++i) n(i, i) = i;
  return n;
}

}  // namespace

ExplicitBathOracle::ExplicitBathOracle(const Matrix& h0,
                                       const std::vector<double>& coupling,
                                       const std::vector<DiscreteBathMode>& modes,
                                       double beta)
    : sys_dim_(static_cast<int>(h0.rows())), beta_(beta) {
  if (h0.rows() != h0.cols()) {
    throw std::invalid_argument("explicit bath oracle: h0 must be square");
  }
  if (static_cast<int>(coupling.size()) != sys_dim_) {
    throw std::invalid_argument("explicit bath oracle: coupling size mismatch");
  }
  if (!(beta > 0)) throw std::invalid_argument("explicit bath oracle: beta > 0");

  total_dim_ = sys_dim_;
  fock_dims_.clear();
  for (const auto& mode : modes) {
    if (mode.fock < 2) {
      throw std::invalid_argument("explicit bath oracle: fock cutoff must be >= 2");
    }
    if (!(mode.omega > 0) || !(mode.m > 0)) {
      throw std::invalid_argument("explicit bath oracle: omega and m must be > 0");
    }
    total_dim_ *= mode.fock;
    fock_dims_.push_back(mode.fock);
  }
  if (total_dim_ > 4000) {
    throw CapacityError("explicit bath oracle: dimension " +
                        std::to_string(total_dim_) + " exceeds 4000");
  }

  Matrix s_op = Matrix::Zero(sys_dim_, sys_dim_);
  for (int i = 0; i < sys_dim_; ++i) s_op(i, i) = coupling[static_cast<std::size_t>(i)];

  Matrix h = kron(h0, Matrix::Identity(total_dim_ / sys_dim_, total_dim_ / sys_dim_));
  double counter = 0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const auto& mode = modes[j];
    // Identity factors to the left (system + earlier modes) and right.
    int left = sys_dim_;
    for (std::size_t l = 0; l < j; ++l) left *= modes[l].fock;
    int right = 1;
    for (std::size_t r = j + 1; r < modes.size(); ++r) right *= modes[r].fock;

    Matrix hn = mode.omega * (number_op(mode.fock) +
                              0.5 * Matrix::Identity(mode.fock, mode.fock));
    Matrix x = ladder_x(mode.fock, mode.m, mode.omega);
    h += kron(Matrix::Identity(left, left),
              kron(hn, Matrix::Identity(right, right)));
    left /= sys_dim_;
    h -= mode.c * kron(s_op, kron(Matrix::Identity(left, left),
                                  kron(x, Matrix::Identity(right, right))));
    counter += mode.c * mode.c / (2.0 * mode.m * mode.omega * mode.omega);
  }
  Matrix s2 = s_op * s_op;
  h += counter * kron(s2, Matrix::Identity(total_dim_ / sys_dim_,
                                           total_dim_ / sys_dim_));

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) {
    throw NumericError("explicit bath oracle: eigendecomposition failed");
  }
  evals_ = es.eigenvalues().array() - es.eigenvalues().minCoeff();
  evecs_ = es.eigenvectors();

  double z = 0;
  for (Eigen::Index i = 0; i < evals_.size(); ++i) z += std::exp(-beta_ * evals_[i]);
  log_z_ = std::log(z) - beta_ * es.eigenvalues().minCoeff();

  // Thermal weight of the top Fock level of each mode.
  boundary_occupation_ = 0;
  if (!modes.empty()) {
    Eigen::VectorXd boltz(evals_.size());
    for (Eigen::Index i = 0; i < evals_.size(); ++i) {
      boltz[i] = std::exp(-beta_ * evals_[i]) / z;
    }
    for (std::size_t j = 0; j < modes.size(); ++j) {
      int left = sys_dim_;
      for (std::size_t l = 0; l < j; ++l) left *= modes[l].fock;
      left /= sys_dim_;
      int right = 1;
      for (std::size_t r = j + 1; r < modes.size(); ++r) right *= modes[r].fock;
      Matrix top = Matrix::Zero(fock_dims_[j], fock_dims_[j]);
      top(fock_dims_[j] - 1, fock_dims_[j] - 1) = 1;
      Matrix proj = kron(Matrix::Identity(sys_dim_, sys_dim_),
                         kron(Matrix::Identity(left, left),
                              kron(top, Matrix::Identity(right, right))));
      Matrix in_eig = evecs_.adjoint() * proj * evecs_;
      double occ = 0;
      for (Eigen::Index i = 0; i < evals_.size(); ++i) {
        occ += boltz[i] * in_eig(i, i).real();
      }
      boundary_occupation_ = std::max(boundary_occupation_, occ);
    }
  }
}

Matrix ExplicitBathOracle::lift(const Matrix& sys_op) const {
  const int env = total_dim_ / sys_dim_;
  return kron(sys_op, Matrix::Identity(env, env));
}

Complex ExplicitBathOracle::correlate(const Matrix& a_op, const Matrix& b_op,
                                      double t) const {
  if (a_op.rows() != sys_dim_ || b_op.rows() != sys_dim_) {
    throw std::invalid_argument("explicit bath oracle: operator dimension mismatch");
  }
  const Matrix a_eig = evecs_.adjoint() * lift(a_op) * evecs_;
  const Matrix b_eig = evecs_.adjoint() * lift(b_op) * evecs_;

  // Tr(A e^{i H conj(t_c)} B e^{-i H t_c}) =
  //   sum_{mn} A_nm B_mn e^{i(l_m - l_n) t} e^{-beta (l_m + l_n)/2}.
  Complex num{0, 0};
  for (Eigen::Index m = 0; m < evals_.size(); ++m) {
    for (Eigen::Index n = 0; n < evals_.size(); ++n) {
      const Complex phase =
          std::exp(kImag * (evals_[m] - evals_[n]) * t -
                   0.5 * beta_ * (evals_[m] + evals_[n]));
      num += a_eig(n, m) * b_eig(m, n) * phase;
    }
  }
  double z = 0;
  for (Eigen::Index i = 0; i < evals_.size(); ++i) z += std::exp(-beta_ * evals_[i]);
  return num / z;
}

Complex bare_correlation(const Matrix& h0, const Matrix& a_op,
                         const Matrix& b_op, double beta, double t) {
  ExplicitBathOracle oracle(h0, std::vector<double>(static_cast<std::size_t>(h0.rows()), 0.0),
                            {}, beta);
  return oracle.correlate(a_op, b_op, t);
}

Complex bare_standard_correlation(const Matrix& h0, const Matrix& a_op,
                                  const Matrix& b_op, double beta, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h0 + h0.adjoint()));
  const Eigen::VectorXd evals = es.eigenvalues().array() - es.eigenvalues().minCoeff();
  const Matrix a_eig = es.eigenvectors().adjoint() * a_op * es.eigenvectors();
  const Matrix b_eig = es.eigenvectors().adjoint() * b_op * es.eigenvectors();
  // <A(t) B> = (1/Z) sum_{mn} e^{-beta l_m} A_mn B_nm e^{i(l_m - l_n) t}.
  Complex num{0, 0};
  double z = 0;
  for (Eigen::Index m = 0; m < evals.size(); ++m) {
    z += std::exp(-beta * evals[m]);
    for (Eigen::Index n = 0; n < evals.size(); ++n) {
      num += std::exp(-beta * evals[m]) * a_eig(m, n) * b_eig(n, m) *
             std::exp(kImag * (evals[m] - evals[n]) * t);
    }
  }
  return num / z;
}

}  // namespace ctpi::oracle
