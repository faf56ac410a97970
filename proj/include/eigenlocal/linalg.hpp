#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "eigenlocal/tensor.hpp"

namespace eigenlocal::linalg {

/// Relative singular value cutoff used for rank decisions everywhere.
inline constexpr double kDefaultTol = 1e-10;

struct LinearSolveReport {
  VectorC solution;
  double residual_norm = 0.0;
  index_t rank = 0;
  index_t nullspace_dim = 0;
};

/// Moore-Penrose pseudoinverse; singular values below tol * sigma_max are
/// treated as zero.
MatrixC pseudo_inverse(const MatrixC& m, double tol = kDefaultTol);

/// Minimum-norm least-squares solution of M x = y via SVD.
LinearSolveReport least_squares(const MatrixC& m, const VectorC& y,
                                double tol = kDefaultTol);

/// Orthonormal basis of { x : ||M x|| <= tol * ||M|| * ||x|| }.
std::vector<VectorC> nullspace_basis(const MatrixC& m, double tol = kDefaultTol);

index_t matrix_rank(const MatrixC& m, double tol = kDefaultTol);

struct EigenpairOptions {
  double tol = 1e-10;
  index_t max_iter = 10000;
  /// Below this dimension the map is materialized and solved densely.
  index_t dense_threshold = 4096;
  std::uint64_t seed = 88172645463325252ull;
};

/// Eigenvalue of maximal modulus and a unit-norm eigenvector of a linear map
/// given by its action on vectors. Dense solve below the size threshold,
/// power iteration with restarts above it.
std::pair<cplx, VectorC> dominant_eigenpair(
    const std::function<VectorC(const VectorC&)>& apply, index_t dim,
    const EigenpairOptions& opts = {});

}  // namespace eigenlocal::linalg
