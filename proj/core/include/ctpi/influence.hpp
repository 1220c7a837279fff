// influence.hpp -- comb-shaped influence operators that trace out one path
// variable while applying every pair weight that involves it.
//
// The operator for target variable k is an MPO of bond dimension d whose
// bond carries the value of s_k.  Flank tensors are diagonal in the site
// index and multiply exp(-I_kk' s_k s_k'); the centre tensor has no upward
// leg, so applying the operator sums the target variable out.  Tracing in
// the middle-out order keeps survivors contiguous from both chain ends.
#pragma once

#include <vector>

#include "ctpi/imatrix.hpp"
#include "ctpi/mps.hpp"

namespace ctpi::tn {

enum class AbsorbSide { Left, Right };
enum class ScheduleOrder { MiddleOut, LeftToRight };

struct InfluenceOperator {
  int target_label = 0;      // 1-based path-variable label being traced
  int target_pos = 0;        // its position in the survivor list
  std::vector<int> labels;   // survivor labels the operator spans
  // flank[j](sigma, s): pair weight between the target (bond value sigma)
  // and survivor j in state s, aggregated over baths.  Unused at target_pos.
  std::vector<Matrix> flank;
  // center(sigma): self weight exp(-sum_b I_kk s^2) for the traced site.
  Vector center;
};

InfluenceOperator build_influence_operator(
    int target_label, const std::vector<int>& survivors,
    const std::vector<bath::IMatrix>& imatrices,
    const std::vector<std::vector<double>>& couplings);

// Applies the comb, absorbs the legless centre vertex into the chosen
// neighbour, and compresses.  Returns the shorter chain.
PathMps apply_influence_and_trace(const PathMps& mps,
                                  const InfluenceOperator& op,
                                  const TruncationPolicy& policy,
                                  AbsorbSide side = AbsorbSide::Left);

// Trace-out order over the 2N interior variables.  MiddleOut alternates
// outward from the operator insertion: N+1, N+2, N, N+3, ..., 2, 2N+1.
std::vector<int> application_schedule(int n_steps,
                                      ScheduleOrder order = ScheduleOrder::MiddleOut);

// Contracts the final two-site chain into the d x d operator
// <s_1|O_B|s_{2N+2}> and applies the three remaining influence weights
// (end-to-end pair and both end self pairs).
Matrix finalize_two_site(const PathMps& mps,
                         const std::vector<bath::IMatrix>& imatrices,
                         const std::vector<std::vector<double>>& couplings);

}  // namespace ctpi::tn
