#include <cmath>
#include <random>
#include <doctest.h>

#include "ctpi/engine.hpp"
#include "ctpi/influence.hpp"
#include "ctpi/mps.hpp"

using namespace ctpi;
using tn::PathMps;
using tn::Tensor3;
using tn::TruncationPolicy;

namespace {

std::mt19937_64 rng(20240817);

Complex crand() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex(u(rng), u(rng));
}

Matrix random_hermitian(int d) {
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = crand();
  return 0.5 * (m + m.adjoint()).eval();
}

Matrix random_matrix(int d) {
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = crand();
  return m;
}

// Symmetric complex coefficient matrix with entries small enough that the
// pair weights stay well conditioned.
bath::IMatrix random_imatrix(int n_steps, double scale) {
  const int len = 2 * n_steps + 2;
  Eigen::MatrixXcd e(len, len);
  for (int r = 0; r < len; ++r)
    for (int c = 0; c <= r; ++c) e(r, c) = e(c, r) = scale * crand();
  bath::IMatrix im;
  im.entries = e;
  im.n_steps = n_steps;
  im.beta = 1.0;
  return im;
}

TimepointWorkspace random_workspace(const CorrelationRequest& req, double t) {
  TimepointWorkspace ws;
  ws.grid = build_contour(req.n_steps, t, req.beta);
  ws.propagators = build_propagators(req.system, ws.grid);
  ws.imatrices = {random_imatrix(req.n_steps, 0.15)};
  ws.couplings = {{1.0, -1.0}};
  return ws;
}

PathMps random_mps(const std::vector<int>& bonds, int phys) {
  PathMps mps;
  mps.phys_dim = phys;
  const int n = static_cast<int>(bonds.size()) + 1;
  for (int j = 0; j < n; ++j) {
    const int dl = j == 0 ? 1 : bonds[static_cast<std::size_t>(j - 1)];
    const int dr = j == n - 1 ? 1 : bonds[static_cast<std::size_t>(j)];
    Tensor3 site(dl, phys, dr);
    for (auto& v : site.data) v = crand();
    mps.sites.push_back(site);
    mps.labels.push_back(j + 1);
  }
  return mps;
}

}  // namespace

TEST_CASE("bare path-amplitude MPS reproduces the gate product") {
  SystemSpec sys{random_hermitian(2)};
  ContourGrid g = build_contour(1, 0.6, 1.2);
  PropagatorPair p = build_propagators(sys, g);
  Matrix b = random_matrix(2);

  PathMps mps = tn::build_bare_pa_mps(p, b, 1);
  REQUIRE(mps.size() == 4);
  for (int j = 0; j + 1 < mps.size(); ++j) CHECK(mps.bond_after(j) <= 2);

  Vector dense = tn::contract_dense(mps);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      for (int s3 = 0; s3 < 2; ++s3)
        for (int s4 = 0; s4 < 2; ++s4) {
          Complex expect = p.u_dag(s1, s2) * b(s2, s3) * p.u(s3, s4);
          Complex got = dense[((s1 * 2 + s2) * 2 + s3) * 2 + s4];
          CHECK(std::abs(got - expect) < 1e-12);
        }
}

TEST_CASE("bare MPS trace with identity insertion gives Tr exp(-beta h0)") {
  SystemSpec sys{-ops::sigma_x()};
  ContourGrid g = build_contour(3, 0.9, 1.0);
  PropagatorPair p = build_propagators(sys, g);
  PathMps mps = tn::build_bare_pa_mps(p, ops::identity(2), 3);
  Vector dense = tn::contract_dense(mps);
  const int len = mps.size();
  Complex tr{0, 0};
  const std::size_t total = std::size_t{1} << len;
  for (std::size_t idx = 0; idx < total; ++idx) {
    int s_first = static_cast<int>(idx >> (len - 1)) & 1;
    int s_last = static_cast<int>(idx) & 1;
    if (s_first == s_last) tr += dense[static_cast<Eigen::Index>(idx)];
  }
  CHECK(std::abs(tr - Complex(2 * std::cosh(1.0), 0)) < 1e-12);
}

TEST_CASE("truncation modes follow their singular-value semantics") {
  // Two-site state with known singular values {1, 1e-6}.
  const double s2 = 1e-6;
  PathMps mps;
  mps.phys_dim = 2;
  mps.labels = {1, 2};
  Tensor3 a(1, 2, 2), b(2, 2, 1);
  a.at(0, 0, 0) = 1.0;
  a.at(0, 1, 1) = s2;
  b.at(0, 0, 0) = 1.0;
  b.at(1, 1, 0) = 1.0;
  mps.sites = {a, b};

  auto truncated_bond = [&](TruncationPolicy::Mode mode, double cutoff) {
    PathMps copy = mps;
    TruncationPolicy policy;
    policy.mode = mode;
    policy.cutoff = cutoff;
    tn::canonicalize_and_truncate(copy, policy);
    return copy.bond_after(0);
  };

  CHECK(truncated_bond(TruncationPolicy::Mode::Relative, 1e-3) == 1);
  CHECK(truncated_bond(TruncationPolicy::Mode::Relative, 1e-7) == 2);
  CHECK(truncated_bond(TruncationPolicy::Mode::Absolute, 1e-3) == 1);
  CHECK(truncated_bond(TruncationPolicy::Mode::Absolute, 1e-7) == 2);
  // Weight: discarded tail weight s2^2 = 1e-12 of total ~ 1.
  CHECK(truncated_bond(TruncationPolicy::Mode::Weight, 1e-11) == 1);
  CHECK(truncated_bond(TruncationPolicy::Mode::Weight, 1e-13) == 2);
}

TEST_CASE("weight truncation bounds the dense error") {
  PathMps mps = random_mps({4, 8, 8, 4}, 2);
  Vector before = tn::contract_dense(mps);
  TruncationPolicy policy;
  policy.mode = TruncationPolicy::Mode::Weight;
  policy.cutoff = 1e-2;
  tn::canonicalize_and_truncate(mps, policy);
  Vector after = tn::contract_dense(mps);
  const double rel2 = (after - before).squaredNorm() / before.squaredNorm();
  CHECK(rel2 <= 4 * policy.cutoff);
  CHECK(mps.current_max_bond() < 8);
}

TEST_CASE("lossless canonicalization preserves amplitudes") {
  PathMps mps = random_mps({3, 6, 6, 3}, 2);
  Vector before = tn::contract_dense(mps);
  TruncationPolicy policy;
  policy.mode = TruncationPolicy::Mode::Absolute;
  policy.cutoff = 0;
  tn::canonicalize_and_truncate(mps, policy);
  Vector after = tn::contract_dense(mps);
  CHECK((after - before).norm() < 1e-12 * before.norm());
}

TEST_CASE("bond cap raises CapacityError in lossless mode") {
  PathMps mps = random_mps({2, 4, 2}, 2);
  TruncationPolicy policy;
  policy.mode = TruncationPolicy::Mode::Relative;
  policy.cutoff = 0;
  policy.max_bond = 2;
  CHECK_THROWS_AS(tn::canonicalize_and_truncate(mps, policy), CapacityError);
}

TEST_CASE("trace-out schedules") {
  CHECK(tn::application_schedule(1) == std::vector<int>{2, 3});
  CHECK(tn::application_schedule(2) == std::vector<int>{3, 4, 2, 5});
  CHECK(tn::application_schedule(3) == std::vector<int>{4, 5, 3, 6, 2, 7});
  CHECK(tn::application_schedule(2, tn::ScheduleOrder::LeftToRight) ==
        std::vector<int>{2, 3, 4, 5});
}

TEST_CASE("influence operator tensors carry the pair weights") {
  const int n_steps = 2;
  std::vector<bath::IMatrix> ims = {random_imatrix(n_steps, 0.2),
                                    random_imatrix(n_steps, 0.1)};
  std::vector<std::vector<double>> couplings = {{1.0, -1.0}, {0.3, 0.7}};
  std::vector<int> survivors = {1, 2, 3, 4, 5, 6};
  const int target = 4;

  tn::InfluenceOperator op =
      tn::build_influence_operator(target, survivors, ims, couplings);
  CHECK(op.target_label == target);
  CHECK(op.labels == survivors);
  CHECK(op.target_pos == 3);

  for (int j = 0; j < 6; ++j) {
    if (j == op.target_pos) continue;
    const int other = survivors[static_cast<std::size_t>(j)];
    for (int sig = 0; sig < 2; ++sig)
      for (int s = 0; s < 2; ++s) {
        Complex expect =
            std::exp(-(ims[0](target, other) * couplings[0][static_cast<std::size_t>(sig)] *
                           couplings[0][static_cast<std::size_t>(s)] +
                       ims[1](target, other) * couplings[1][static_cast<std::size_t>(sig)] *
                           couplings[1][static_cast<std::size_t>(s)]));
        CHECK(std::abs(op.flank[static_cast<std::size_t>(j)](sig, s) - expect) <
              1e-14);
      }
  }
  for (int sig = 0; sig < 2; ++sig) {
    Complex expect =
        std::exp(-(ims[0](target, target) * couplings[0][static_cast<std::size_t>(sig)] *
                       couplings[0][static_cast<std::size_t>(sig)] +
                   ims[1](target, target) * couplings[1][static_cast<std::size_t>(sig)] *
                       couplings[1][static_cast<std::size_t>(sig)]));
    CHECK(std::abs(op.center[sig] - expect) < 1e-14);
  }
}

TEST_CASE("trace-out pipeline equals brute-force path enumeration") {
  for (int n_steps : {2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      CorrelationRequest req;
      req.system.h0 = random_hermitian(2);
      req.b_op = random_matrix(2);
      req.a_op = ops::identity(2);
      req.beta = 0.8;
      req.n_steps = n_steps;
      req.truncation.cutoff = 0;
      req.truncation.mode = TruncationPolicy::Mode::Absolute;
      TimepointWorkspace ws = random_workspace(req, 0.7);

      Matrix net = run_pipeline(req, ws, req.b_op).o;
      Matrix ref = brute_force_path_sum(req, ws, req.b_op);
      CAPTURE(n_steps);
      CAPTURE(trial);
      CHECK((net - ref).cwiseAbs().maxCoeff() <
            1e-10 * ref.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("absorb side and schedule order do not change the result") {
  CorrelationRequest req;
  req.system.h0 = random_hermitian(2);
  req.b_op = random_matrix(2);
  req.a_op = ops::identity(2);
  req.beta = 1.1;
  req.n_steps = 3;
  req.truncation.cutoff = 0;
  req.truncation.mode = TruncationPolicy::Mode::Absolute;
  TimepointWorkspace ws = random_workspace(req, 1.2);

  req.absorb = tn::AbsorbSide::Left;
  Matrix left = run_pipeline(req, ws, req.b_op).o;
  req.absorb = tn::AbsorbSide::Right;
  Matrix right = run_pipeline(req, ws, req.b_op).o;
  CHECK((left - right).cwiseAbs().maxCoeff() <
        1e-10 * left.cwiseAbs().maxCoeff());

  req.schedule = tn::ScheduleOrder::LeftToRight;
  Matrix ltr = run_pipeline(req, ws, req.b_op).o;
  CHECK((ltr - left).cwiseAbs().maxCoeff() <
        1e-10 * left.cwiseAbs().maxCoeff());
}

TEST_CASE("influence operator validation") {
  std::vector<bath::IMatrix> ims = {random_imatrix(2, 0.1)};
  std::vector<std::vector<double>> couplings = {{1.0, -1.0}};
  std::vector<int> survivors = {1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(tn::build_influence_operator(9, survivors, ims, couplings),
                  std::invalid_argument);
  CHECK_THROWS_AS(tn::build_influence_operator(3, survivors, {}, {}),
                  std::invalid_argument);
}
