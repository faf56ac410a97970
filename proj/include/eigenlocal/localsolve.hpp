#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenlocal/mps.hpp"
#include "eigenlocal/tensor.hpp"

namespace eigenlocal::localsolve {

/// Operator on w contiguous sites, stored as a d^w x d^w matrix with site
/// indices fused row-major left-to-right.
struct LocalOperator {
  index_t w = 0;
  index_t d = 0;
  MatrixC mat;

  LocalOperator(index_t w_, index_t d_, MatrixC m);

  /// Infer the support width from the matrix size; throws if the size is
  /// not a power of d.
  static LocalOperator infer(index_t d, MatrixC m);

  static LocalOperator identity(index_t w_, index_t d_);
};

struct SolveOptions {
  double tol = linalg::kDefaultTol;
  double solvable_threshold = 1e-8;
};

/// Solution of the telescopic identity (O - eps) A...A = A B - B A.
struct TelescopicSolution {
  DenseTensor B;   // (D, d^{w-1}, D), minimum-norm and gauge-fixed
  cplx epsilon{0.0, 0.0};
  double residual = 0.0;  // Frobenius mismatch / (||O A...A|| + 1)
  index_t gauge_dim = 0;  // nullspace dimension of B -> A B - B A
  bool solvable = false;
  std::vector<std::string> warnings;
};

/// (O - eps) applied to the physical legs of the length-w block; (D, d^w, D).
DenseTensor telescopic_lhs(const mps::UniformMps& m, const LocalOperator& O, cplx epsilon);

/// A B - B A with legs in site order; B has shape (D, d^{w-1}, D).
DenseTensor telescopic_rhs(const mps::UniformMps& m, const DenseTensor& B);

/// Least-squares solve of the telescopic identity for (B, eps); eps is taken
/// as an unknown unless fix_epsilon is supplied.
TelescopicSolution solve(const mps::UniformMps& m, const LocalOperator& O,
                         std::optional<cplx> fix_epsilon = std::nullopt,
                         const SolveOptions& opts = {});

/// Nullspace of B -> A B - B A; for injective tensors its dimension is one,
/// spanned by the length-(w-1) block of A.
std::pair<index_t, std::vector<DenseTensor>> gauge_nullspace(
    const mps::UniformMps& m, index_t w, double tol = linalg::kDefaultTol);

/// Joint solve on a ring of site-dependent tensors, one two-site term per
/// bond; returns (B tensor, normalized residual) per bond.
std::vector<std::pair<DenseTensor, double>> solve_site_dependent(
    const mps::SiteChain& chain, const std::vector<LocalOperator>& terms,
    const SolveOptions& opts = {});

/// Boundary operator T with <l|T|j> = sum_{a,b} B[a,l,b] Ainv[a,j,b], where
/// the left inverse is taken at blocking length max(L, w-1) and B is padded
/// with site tensors up to that length.
LocalOperator boundary_operator(const mps::UniformMps& m, const DenseTensor& B,
                                double tol = linalg::kDefaultTol);

}  // namespace eigenlocal::localsolve
