#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eigenlocal/linalg.hpp"
#include "eigenlocal/mps.hpp"
#include "test_helpers.hpp"

using namespace eigenlocal;
using namespace eigenlocal::linalg;
using testutil::Rng;

TEST_CASE("pseudo inverse of identity and diagonal") {
  MatrixC id = MatrixC::Identity(3, 3);
  CHECK((pseudo_inverse(id) - id).norm() < 1e-14);

  MatrixC diag = MatrixC::Zero(2, 2);
  diag(0, 0) = 2.0;
  const MatrixC p = pseudo_inverse(diag);
  CHECK(std::abs(p(0, 0) - cplx(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(p(1, 1)) < 1e-14);
}

TEST_CASE("pseudo inverse satisfies the Penrose identities") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const index_t rows = 3 + trial % 4 * 13;  // up to ~42
    const index_t cols = 2 + trial % 5 * 9;
    const MatrixC m = rng.matrix(rows, cols);
    const MatrixC p = pseudo_inverse(m);
    CHECK((m * p * m - m).norm() < 1e-10 * m.norm());
    CHECK((p * m * p - p).norm() < 1e-10 * p.norm());
    CHECK(((m * p).adjoint() - m * p).norm() < 1e-10);
    CHECK(((p * m).adjoint() - p * m).norm() < 1e-10);
  }
}

TEST_CASE("pseudo inverse of a random 6x4 reproduces the matrix") {
  Rng rng(22);
  const MatrixC m = rng.matrix(6, 4);
  const MatrixC p = pseudo_inverse(m);
  CHECK((m * p * m - m).norm() < 1e-12);
}

TEST_CASE("least squares solves identity and inconsistent systems") {
  VectorC y(2);
  y << cplx(1.0, -2.0), cplx(0.0, 3.0);
  const auto rep = least_squares(MatrixC::Identity(2, 2), y);
  CHECK((rep.solution - y).norm() < 1e-14);
  CHECK(rep.residual_norm < 1e-14);
  CHECK(rep.rank == 2);
  CHECK(rep.nullspace_dim == 0);

  MatrixC m(2, 1);
  m << 1.0, 1.0;
  VectorC b(2);
  b << 0.0, 1.0;
  const auto rep2 = least_squares(m, b);
  CHECK(std::abs(rep2.solution(0) - cplx(0.5, 0.0)) < 1e-14);
  CHECK(rep2.residual_norm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("least squares recovers a planted solution") {
  Rng rng(23);
  const MatrixC m = rng.matrix(20, 7);
  VectorC x0(7);
  for (int i = 0; i < 7; ++i) x0(i) = rng.gaussian();
  const VectorC y = m * x0;
  const auto rep = least_squares(m, y);
  CHECK((rep.solution - x0).norm() < 1e-10);
  CHECK(rep.rank == 7);
}

TEST_CASE("least squares residual never exceeds that of the zero vector") {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixC m = rng.matrix(8, 5);
    VectorC y(8);
    for (int i = 0; i < 8; ++i) y(i) = rng.gaussian();
    const auto rep = least_squares(m, y);
    CHECK(rep.residual_norm <= y.norm() + 1e-12);
  }
}

TEST_CASE("nullspace basis dimensions") {
  CHECK(nullspace_basis(MatrixC::Identity(4, 4)).empty());
  CHECK(nullspace_basis(MatrixC::Zero(2, 3)).size() == 3);

  Rng rng(25);
  VectorC u(5), v(4);
  for (int i = 0; i < 5; ++i) u(i) = rng.gaussian();
  for (int i = 0; i < 4; ++i) v(i) = rng.gaussian();
  const MatrixC outer = u * v.transpose();
  const auto basis = nullspace_basis(outer);
  CHECK(basis.size() == 3);  // cols - 1
  for (const auto& x : basis) {
    CHECK((outer * x).norm() < 1e-10 * outer.norm());
    CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dominant eigenpair on simple maps") {
  MatrixC diag = MatrixC::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  auto [lam, v] = dominant_eigenpair([&](const VectorC& x) { return VectorC(diag * x); }, 2);
  CHECK(std::abs(lam - cplx(3.0, 0.0)) < 1e-12);
  CHECK(std::abs(std::abs(v(0)) - 1.0) < 1e-12);

  auto [lam1, v1] = dominant_eigenpair([](const VectorC& x) { return x; }, 5);
  CHECK(std::abs(lam1 - cplx(1.0, 0.0)) < 1e-12);
  CHECK(v1.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power iteration agrees with the dense path on a transfer matrix") {
  Rng rng(26);
  const auto m = testutil::random_injective_mps(rng, 2, 2);
  const MatrixC t = mps::transfer_matrix(m);
  auto apply = [&](const VectorC& x) { return VectorC(t * x); };

  const auto dense = dominant_eigenpair(apply, t.rows());
  EigenpairOptions iter_opts;
  iter_opts.dense_threshold = 0;  // force the iterative path
  iter_opts.max_iter = 20000;
  const auto iter = dominant_eigenpair(apply, t.rows(), iter_opts);
  CHECK(std::abs(dense.first - iter.first) < 1e-10);
}

TEST_CASE("non-convergence reports the last iterate") {
  // rotation: two eigenvalues of equal modulus, power iteration cannot settle
  MatrixC rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  EigenpairOptions opts;
  opts.dense_threshold = 0;
  opts.max_iter = 50;
  opts.tol = 1e-14;
  try {
    dominant_eigenpair([&](const VectorC& x) { return VectorC(rot * x); }, 2, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_iterate.size() == 2);
  }
}
