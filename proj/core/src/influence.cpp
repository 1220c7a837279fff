#include "ctpi/influence.hpp"

#include <algorithm>

namespace ctpi::tn {

namespace {

void check_couplings(const std::vector<bath::IMatrix>& imatrices,
                     const std::vector<std::vector<double>>& couplings,
                     int phys_dim) {
  if (imatrices.size() != couplings.size()) {
    throw std::invalid_argument("influence: one coupling vector per bath required");
  }
  for (const auto& c : couplings) {
    if (static_cast<int>(c.size()) != phys_dim) {
      throw std::invalid_argument(
          "influence: coupling eigenvalue count must match system dimension");
    }
  }
}

}  // namespace

InfluenceOperator build_influence_operator(
    int target_label, const std::vector<int>& survivors,
    const std::vector<bath::IMatrix>& imatrices,
    const std::vector<std::vector<double>>& couplings) {
  if (couplings.empty()) {
    throw std::invalid_argument("influence: at least one bath required");
  }
  const int d = static_cast<int>(couplings.front().size());
  check_couplings(imatrices, couplings, d);

  InfluenceOperator op;
  op.target_label = target_label;
  op.labels = survivors;
  auto pos = std::find(survivors.begin(), survivors.end(), target_label);
  if (pos == survivors.end()) {
    throw std::invalid_argument("influence: target not among survivors");
  }
  op.target_pos = static_cast<int>(pos - survivors.begin());

  op.center = Vector::Ones(d);
  for (std::size_t b = 0; b < imatrices.size(); ++b) {
    const Complex self = imatrices[b](target_label, target_label);
    for (int s = 0; s < d; ++s) {
      const double c = couplings[b][static_cast<std::size_t>(s)];
      op.center[s] *= std::exp(-self * (c * c));
    }
  }

  op.flank.resize(survivors.size());
  for (std::size_t j = 0; j < survivors.size(); ++j) {
    if (static_cast<int>(j) == op.target_pos) continue;
    Matrix w = Matrix::Ones(d, d);
    for (std::size_t b = 0; b < imatrices.size(); ++b) {
      const Complex pair = imatrices[b](target_label, survivors[j]);
      for (int sig = 0; sig < d; ++sig) {
        for (int s = 0; s < d; ++s) {
          const double cs = couplings[b][static_cast<std::size_t>(sig)];
          const double cj = couplings[b][static_cast<std::size_t>(s)];
          w(sig, s) *= std::exp(-pair * (cs * cj));
        }
      }
    }
    op.flank[j] = std::move(w);
  }
  return op;
}

PathMps apply_influence_and_trace(const PathMps& mps,
                                  const InfluenceOperator& op,
                                  const TruncationPolicy& policy,
                                  AbsorbSide side) {
  const int n = mps.size();
  const int d = mps.phys_dim;
  const int p = op.target_pos;
  if (static_cast<int>(op.labels.size()) != n || mps.labels != op.labels) {
    throw std::invalid_argument("apply_influence: operator does not match chain");
  }
  if (p <= 0 || p >= n - 1) {
    throw std::invalid_argument("apply_influence: cannot trace a chain end");
  }

  // Augment every surviving site with the bond value sigma = s_k; the comb
  // bond starts at the chain ends, so site 0 keeps left bond 1 and site
  // n-1 keeps right bond 1.
  auto augmented = [&](int j) {
    const Tensor3& t = mps.sites[static_cast<std::size_t>(j)];
    const Matrix& w = op.flank[static_cast<std::size_t>(j)];
    const int bl = (j == 0) ? 1 : t.dl * d;
    const int br = (j == n - 1) ? 1 : t.dr * d;
    Tensor3 out(bl, t.d, br);
    for (int sig = 0; sig < d; ++sig) {
      for (int l = 0; l < t.dl; ++l) {
        for (int s = 0; s < t.d; ++s) {
          const Complex weight = w(sig, s);
          for (int r = 0; r < t.dr; ++r) {
            const int nl = (j == 0) ? 0 : l * d + sig;
            const int nr = (j == n - 1) ? 0 : r * d + sig;
            out.at(nl, s, nr) += weight * t.at(l, s, r);
          }
        }
      }
    }
    return out;
  };

  // Centre vertex: V[(l, sig), (r, sig')] = [sig == sig'] center(sig)
  // T_p(l, sig, r), a plain matrix once the traced site's physical index
  // is routed onto the comb bond.
  const Tensor3& tp = mps.sites[static_cast<std::size_t>(p)];
  Matrix vertex = Matrix::Zero(static_cast<Eigen::Index>(tp.dl) * d,
                               static_cast<Eigen::Index>(tp.dr) * d);
  for (int sig = 0; sig < d; ++sig) {
    for (int l = 0; l < tp.dl; ++l) {
      for (int r = 0; r < tp.dr; ++r) {
        vertex(static_cast<Eigen::Index>(l) * d + sig,
               static_cast<Eigen::Index>(r) * d + sig) =
            op.center[sig] * tp.at(l, sig, r);
      }
    }
  }

  PathMps out;
  out.phys_dim = d;
  out.max_bond_seen = mps.max_bond_seen;
  out.labels.reserve(static_cast<std::size_t>(n) - 1);
  out.sites.reserve(static_cast<std::size_t>(n) - 1);
  for (int j = 0; j < n; ++j) {
    if (j == p) continue;
    out.labels.push_back(mps.labels[static_cast<std::size_t>(j)]);
    out.sites.push_back(augmented(j));
  }

  const int host = (side == AbsorbSide::Left) ? p - 1 : p;  // index in `out`
  Tensor3& h = out.sites[static_cast<std::size_t>(host)];
  if (side == AbsorbSide::Left) {
    Matrix merged = h.left_unfold() * vertex;  // (bl*d) x (dr_p * d)
    h = Tensor3::from_left_unfold(merged, h.dl, h.d);
  } else {
    Matrix merged = vertex * h.right_unfold();  // (dl_p*d) x (d * br)
    h = Tensor3::from_right_unfold(merged, h.d, h.dr);
  }

  canonicalize_and_truncate(out, policy);
  return out;
}

std::vector<int> application_schedule(int n_steps, ScheduleOrder order) {
  if (n_steps < 1) throw std::invalid_argument("application_schedule: n_steps >= 1");
  std::vector<int> sched;
  sched.reserve(static_cast<std::size_t>(2 * n_steps));
  if (order == ScheduleOrder::MiddleOut) {
    for (int j = 0; j < n_steps; ++j) {
      sched.push_back(n_steps + 1 - j);
      sched.push_back(n_steps + 2 + j);
    }
  } else {
    for (int k = 2; k <= 2 * n_steps + 1; ++k) sched.push_back(k);
  }
  return sched;
}

Matrix finalize_two_site(const PathMps& mps,
                         const std::vector<bath::IMatrix>& imatrices,
                         const std::vector<std::vector<double>>& couplings) {
  if (mps.size() != 2) {
    throw std::invalid_argument("finalize_two_site: chain must have two sites");
  }
  const int d = mps.phys_dim;
  check_couplings(imatrices, couplings, d);
  const int first = mps.labels.front();
  const int last = mps.labels.back();

  const Tensor3& a = mps.sites.front();
  const Tensor3& b = mps.sites.back();
  Matrix o = a.left_unfold() * b.right_unfold();  // (1*d) x bond times bond x (d*1)

  for (std::size_t bi = 0; bi < imatrices.size(); ++bi) {
    const auto& im = imatrices[bi];
    const auto& c = couplings[bi];
    const Complex pair = im(first, last);
    const Complex self_a = im(first, first);
    const Complex self_b = im(last, last);
    for (int s1 = 0; s1 < d; ++s1) {
      for (int s2 = 0; s2 < d; ++s2) {
        const double ca = c[static_cast<std::size_t>(s1)];
        const double cb = c[static_cast<std::size_t>(s2)];
        o(s1, s2) *= std::exp(-(pair * (ca * cb) + self_a * (ca * ca) +
                                self_b * (cb * cb)));
      }
    }
  }
  return o;
}

}  // namespace ctpi::tn
