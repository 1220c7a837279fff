// mps.hpp -- path-amplitude matrix product state.
//
// The bare path amplitude factorizes into nearest-neighbour two-site gates
// (one short-step propagator per link, plus the sandwiched operator at the
// centre link), so splitting every gate with an SVD and absorbing singular
// values to the left yields an exact MPS with bond dimension at most the
// system dimension.
#pragma once

#include <vector>

#include "ctpi/common.hpp"
#include "ctpi/system.hpp"

namespace ctpi::tn {

struct TruncationPolicy {
  enum class Mode {
    Relative,  // discard sigma_i / sigma_max < cutoff
    Absolute,  // discard sigma_i < cutoff
    Weight,    // discard largest tail with sum sigma_i^2 <= cutoff * total
  };
  double cutoff = 1e-10;
  Mode mode = Mode::Relative;
  int max_bond = 0;  // 0 = unlimited
};

// Dense rank-3 tensor, index order (left bond, physical, right bond).
struct Tensor3 {
  int dl = 1, d = 1, dr = 1;
  std::vector<Complex> data;

  Tensor3() = default;
  Tensor3(int dl_, int d_, int dr_)
      : dl(dl_), d(d_), dr(dr_),
        data(static_cast<std::size_t>(dl_) * d_ * dr_, Complex{0, 0}) {}

  Complex& at(int l, int s, int r) {
    return data[(static_cast<std::size_t>(l) * d + s) * dr + r];
  }
  Complex at(int l, int s, int r) const {
    return data[(static_cast<std::size_t>(l) * d + s) * dr + r];
  }

  // (dl * d) x dr and dl x (d * dr) matrix views of the same storage.
  Matrix left_unfold() const;
  Matrix right_unfold() const;
  static Tensor3 from_left_unfold(const Matrix& m, int dl, int d);
  static Tensor3 from_right_unfold(const Matrix& m, int d, int dr);
};

struct PathMps {
  int phys_dim = 0;
  std::vector<Tensor3> sites;
  // Original 1-based path-variable labels; tracing keeps survivors as the
  // two contiguous blocks {1..l} and {r..2N+2}.
  std::vector<int> labels;
  int max_bond_seen = 1;

  int size() const { return static_cast<int>(sites.size()); }
  int bond_after(int j) const { return sites[static_cast<std::size_t>(j)].dr; }
  int current_max_bond() const;
  void note_bonds();
};

// Exact MPS for the bare (system-only) path amplitude over 2N+2 variables.
PathMps build_bare_pa_mps(const PropagatorPair& prop, const Matrix& b_op,
                          int n_steps);

// QR sweep left-to-right, then a truncating SVD sweep right-to-left.
// Records post-truncation bond dimensions in max_bond_seen.  With
// cutoff = 0 and max_bond > 0, exceeding the cap raises CapacityError.
void canonicalize_and_truncate(PathMps& mps, const TruncationPolicy& policy);

// Dense amplitude vector indexed by (s_1, ..., s_L) with s_1 slowest.
// Guarded against more than 2^24 entries; intended for oracle-sized checks.
Vector contract_dense(const PathMps& mps);

}  // namespace ctpi::tn
