#include "ctpi/mps.hpp"

#include <algorithm>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ctpi::tn {

namespace {

using RowMat =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Factorization {
  Matrix left;   // U * diag(sigma)
  Matrix right;  // V^dag
};

// SVD split with singular values absorbed into the left factor.  rank_tol
// trims exactly-degenerate null directions when splitting bare gates.
Factorization split_left(const Matrix& m, double rank_tol) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index keep = sv.size();
  if (rank_tol > 0 && sv.size() > 0) {
    const double floor = rank_tol * sv(0);
    keep = 0;
    while (keep < sv.size() && sv(keep) > floor) ++keep;
    if (keep == 0) keep = 1;
  }
  Factorization f;
  f.left = svd.matrixU().leftCols(keep) *
           sv.head(keep).asDiagonal().toDenseMatrix().cast<Complex>();
  f.right = svd.matrixV().leftCols(keep).adjoint();
  return f;
}

Eigen::Index truncation_rank(const Eigen::VectorXd& sv,
                             const TruncationPolicy& policy) {
  Eigen::Index keep = sv.size();
  if (sv.size() == 0) return 1;
  switch (policy.mode) {
    case TruncationPolicy::Mode::Relative: {
      const double floor = policy.cutoff * sv(0);
      keep = 0;
      while (keep < sv.size() && sv(keep) >= floor && sv(keep) > 0) ++keep;
      if (policy.cutoff == 0) keep = sv.size();
      break;
    }
    case TruncationPolicy::Mode::Absolute: {
      keep = 0;
      while (keep < sv.size() && sv(keep) >= policy.cutoff && sv(keep) > 0) ++keep;
      break;
    }
    case TruncationPolicy::Mode::Weight: {
      const double total = sv.squaredNorm();
      const double budget = policy.cutoff * total;
      double tail = 0;
      keep = sv.size();
      while (keep > 1) {
        const double next = tail + sv(keep - 1) * sv(keep - 1);
        if (next > budget) break;
        tail = next;
        --keep;
      }
      break;
    }
  }
  if (keep < 1) keep = 1;
  if (policy.max_bond > 0 && keep > policy.max_bond) {
    if (policy.cutoff == 0 && policy.mode != TruncationPolicy::Mode::Absolute) {
      throw CapacityError("bond dimension " + std::to_string(keep) +
                          " exceeds max_bond with truncation disabled");
    }
    keep = policy.max_bond;
  }
  return keep;
}

}  // namespace

Matrix Tensor3::left_unfold() const {
  return Eigen::Map<const RowMat>(data.data(), static_cast<Eigen::Index>(dl) * d,
                                  dr);
}

Matrix Tensor3::right_unfold() const {
  return Eigen::Map<const RowMat>(data.data(), dl,
                                  static_cast<Eigen::Index>(d) * dr);
}

Tensor3 Tensor3::from_left_unfold(const Matrix& m, int dl, int d) {
  Tensor3 t(dl, d, static_cast<int>(m.cols()));
  Eigen::Map<RowMat>(t.data.data(), m.rows(), m.cols()) = m;
  return t;
}

Tensor3 Tensor3::from_right_unfold(const Matrix& m, int d, int dr) {
  Tensor3 t(static_cast<int>(m.rows()), d, dr);
  Eigen::Map<RowMat>(t.data.data(), m.rows(), m.cols()) = m;
  return t;
}

int PathMps::current_max_bond() const {
  int mx = 1;
  for (std::size_t j = 0; j + 1 < sites.size(); ++j) {
    mx = std::max(mx, sites[j].dr);
  }
  return mx;
}

void PathMps::note_bonds() {
  max_bond_seen = std::max(max_bond_seen, current_max_bond());
}

PathMps build_bare_pa_mps(const PropagatorPair& prop, const Matrix& b_op,
                          int n_steps) {
  const int d = static_cast<int>(prop.u.rows());
  if (b_op.rows() != d || b_op.cols() != d) {
    throw std::invalid_argument("build_bare_pa_mps: operator dimension mismatch");
  }
  if (n_steps < 1) throw std::invalid_argument("build_bare_pa_mps: n_steps >= 1");

  // Unitary gates keep full rank; only the sandwiched operator may drop rank.
  const Factorization back = split_left(prop.u_dag, 0.0);
  const Factorization fwd = split_left(prop.u, 0.0);
  const Factorization mid = split_left(b_op, 1e-14);

  const int n = n_steps;
  const int total = 2 * n + 2;
  PathMps mps;
  mps.phys_dim = d;
  mps.sites.reserve(static_cast<std::size_t>(total));
  mps.labels.resize(static_cast<std::size_t>(total));
  for (int j = 0; j < total; ++j) mps.labels[static_cast<std::size_t>(j)] = j + 1;

  auto link_tensor = [d](const Matrix& incoming, const Matrix& outgoing) {
    // incoming = R-half of the bond to the left (rows index that bond),
    // outgoing = L-half of the bond to the right (rows index the site).
    const int bl = static_cast<int>(incoming.rows());
    const int br = static_cast<int>(outgoing.cols());
    Tensor3 t(bl, d, br);
    for (int l = 0; l < bl; ++l) {
      for (int s = 0; s < d; ++s) {
        for (int r = 0; r < br; ++r) {
          t.at(l, s, r) = incoming(l, s) * outgoing(s, r);
        }
      }
    }
    return t;
  };
  auto head_tensor = [d](const Matrix& outgoing) {
    Tensor3 t(1, d, static_cast<int>(outgoing.cols()));
    for (int s = 0; s < d; ++s) {
      for (int r = 0; r < t.dr; ++r) t.at(0, s, r) = outgoing(s, r);
    }
    return t;
  };
  auto tail_tensor = [d](const Matrix& incoming) {
    Tensor3 t(static_cast<int>(incoming.rows()), d, 1);
    for (int l = 0; l < t.dl; ++l) {
      for (int s = 0; s < d; ++s) t.at(l, s, 0) = incoming(l, s);
    }
    return t;
  };

  // Variables 1..N+1 ride the backward links, N+1 -- N+2 the sandwiched
  // operator, N+2..2N+2 the forward links.
  mps.sites.push_back(head_tensor(back.left));
  for (int j = 2; j <= n; ++j) {
    mps.sites.push_back(link_tensor(back.right, back.left));
  }
  mps.sites.push_back(link_tensor(back.right, mid.left));
  mps.sites.push_back(link_tensor(mid.right, fwd.left));
  for (int j = n + 3; j <= 2 * n + 1; ++j) {
    mps.sites.push_back(link_tensor(fwd.right, fwd.left));
  }
  mps.sites.push_back(tail_tensor(fwd.right));

  mps.note_bonds();
  return mps;
}

void canonicalize_and_truncate(PathMps& mps, const TruncationPolicy& policy) {
  const int n = mps.size();
  if (n < 2) return;

  // Left-to-right QR pass establishes canonical form so the truncating
  // sweep below is locally optimal at every bond.
  for (int j = 0; j + 1 < n; ++j) {
    Tensor3& cur = mps.sites[static_cast<std::size_t>(j)];
    Matrix m = cur.left_unfold();
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    cur = Tensor3::from_left_unfold(q, cur.dl, cur.d);
    Tensor3& nxt = mps.sites[static_cast<std::size_t>(j + 1)];
    Matrix merged = r * nxt.right_unfold();
    nxt = Tensor3::from_right_unfold(merged, nxt.d, nxt.dr);
  }

  for (int j = n - 1; j >= 1; --j) {
    Tensor3& cur = mps.sites[static_cast<std::size_t>(j)];
    Matrix m = cur.right_unfold();
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index keep = truncation_rank(svd.singularValues(), policy);
    Matrix vdag = svd.matrixV().leftCols(keep).adjoint();
    cur = Tensor3::from_right_unfold(vdag, cur.d, cur.dr);
    Matrix carry =
        svd.matrixU().leftCols(keep) *
        svd.singularValues().head(keep).asDiagonal().toDenseMatrix().cast<Complex>();
    Tensor3& prv = mps.sites[static_cast<std::size_t>(j - 1)];
    Matrix merged = prv.left_unfold() * carry;
    prv = Tensor3::from_left_unfold(merged, prv.dl, prv.d);
  }
  mps.note_bonds();
}

Vector contract_dense(const PathMps& mps) {
  const int d = mps.phys_dim;
  const int n = mps.size();
  double log_entries = 0;
  for (int j = 0; j < n; ++j) log_entries += std::log2(static_cast<double>(d));
  if (log_entries > 24) {
    throw CapacityError("contract_dense: amplitude tensor exceeds 2^24 entries");
  }

  // Fold sites in from the left; rows enumerate the accumulated physical
  // indices with s_1 slowest, columns the open right bond.
  Matrix acc = mps.sites[0].left_unfold();  // (1 * d) x r
  for (int j = 1; j < n; ++j) {
    const Tensor3& site = mps.sites[static_cast<std::size_t>(j)];
    Matrix step = acc * site.right_unfold();  // rows x (d * dr)
    Matrix next(acc.rows() * d, site.dr);
    for (Eigen::Index row = 0; row < acc.rows(); ++row) {
      for (int s = 0; s < d; ++s) {
        next.row(row * d + s) = step.row(row).segment(
            static_cast<Eigen::Index>(s) * site.dr, site.dr);
      }
    }
    acc = std::move(next);
  }
  return acc.col(0);
}

}  // namespace ctpi::tn
