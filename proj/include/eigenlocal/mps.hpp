#pragma once

#include <optional>
#include <vector>

#include "eigenlocal/linalg.hpp"
#include "eigenlocal/tensor.hpp"

namespace eigenlocal::mps {

/// Uniform MPS defined by one site tensor A of shape (D, d, D),
/// axes (left bond, physical, right bond).
struct UniformMps {
  DenseTensor A;

  explicit UniformMps(DenseTensor a);
  index_t bond_dim() const { return A.shape()[0]; }
  index_t phys_dim() const { return A.shape()[1]; }

  /// Physical slice A^i as a D x D matrix.
  MatrixC site_matrix(index_t i) const;
};

/// Ring of site-dependent tensors, tensor n of shape (D_n, d_n, D_{n+1})
/// with periodic bond matching.
struct SiteChain {
  std::vector<DenseTensor> tensors;

  explicit SiteChain(std::vector<DenseTensor> ts);
  index_t length() const { return static_cast<index_t>(tensors.size()); }
};

/// Left/right fixed points of the transfer matrix, Hermitized, positive
/// branch, scaled so that Tr(rho_l rho_r) = 1.
struct FixedPoints {
  MatrixC rho_l;
  MatrixC rho_r;
  double spectral_radius = 0.0;
  /// Smallest eigenvalues; positive for injective tensors.
  double min_eig_l = 0.0;
  double min_eig_r = 0.0;
};

struct InjectivityReport {
  bool injective = false;
  std::optional<index_t> length;
  std::vector<index_t> ranks;  // rank of the blocked map at l = 1, 2, ...
};

/// Matrix of X -> sum_i A^i X (A^i)^dagger acting on row-major vec(X).
MatrixC transfer_matrix(const UniformMps& m);

double spectral_radius(const UniformMps& m);

/// Rescale so the transfer matrix has spectral radius one.
UniformMps normalize(const UniformMps& m);

FixedPoints fixed_points(const UniformMps& m, double tol = linalg::kDefaultTol);

index_t default_l_max(const UniformMps& m);

InjectivityReport injectivity_length(const UniformMps& m, index_t l_max,
                                     double tol = linalg::kDefaultTol);
InjectivityReport injectivity_length(const UniformMps& m);

/// Blocked tensor (D, d^L, D): physical axes fused row-major in site order.
DenseTensor block(const UniformMps& m, index_t L);

/// Left inverse of the blocked map at length L: a tensor Ainv of shape
/// (D, d^L, D) with sum_i Ainv[g, i, e] * (A^{i_1}...A^{i_L})[a, b]
/// equal to delta_{ag} delta_{be}.
DenseTensor left_inverse(const UniformMps& m, index_t L,
                         double tol = linalg::kDefaultTol);

/// Inverse-like tensor X of shape (D, d^L, D) whose contraction with the
/// blocked tensor closes into the fixed-point caps:
/// sum_i X[g, i, dl] * block[a, i, b] = rho_r[a, g] * rho_l[dl, b].
DenseTensor proof_inverse_x(const UniformMps& m, index_t L,
                            double tol = linalg::kDefaultTol);

/// Fuse the bra/ket physical legs of an MPO tensor (D, d_out, d_in, D)
/// into one physical leg, out-major.
UniformMps vectorize_mpo(const DenseTensor& T);

}  // namespace eigenlocal::mps
