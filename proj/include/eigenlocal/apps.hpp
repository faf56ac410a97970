#pragma once

#include <array>
#include <utility>

#include "eigenlocal/localsolve.hpp"
#include "eigenlocal/mps.hpp"
#include "eigenlocal/tensor.hpp"

namespace eigenlocal::apps {

/// Virtual blocks of a physical-dimension-two MPO tensor:
/// T = |0><0| x a + |0><1| x b + |1><0| x c + |1><1| x d.
struct BlockMpo {
  MatrixC a, b, c, d;

  index_t virt_dim() const { return a.rows(); }
};

/// The four blocks assembled into an MPO tensor (n, 2, 2, n).
DenseTensor block_mpo_tensor(const BlockMpo& blocks);

/// Two-site XXZ term XX + YY + Delta ZZ as a 4x4 matrix.
localsolve::LocalOperator xxz_hamiltonian(cplx delta);

/// Deformation parameters: q solves q^2 - 2 Delta q + 1 = 0 (|q| >= 1 branch)
/// and lambda = q - 1/q.
std::pair<cplx, cplx> qdeform_params(cplx delta);

/// Frobenius residuals of the sixteen component equations of the two-site
/// MPO symmetry identity for the XXZ term, in the fixed tabulated order.
std::array<double, 16> xxz_component_residuals(const BlockMpo& T, const BlockMpo& Bt,
                                               cplx delta);

/// Residuals of the six quantum-plane relations
/// ab=q^-1 ba, ac=q^-1 ca, bd=q^-1 db, cd=q^-1 dc, bc=cb,
/// ad-da=(q-q^-1) bc.
std::array<double, 6> quantum_plane_check(const BlockMpo& T, cplx q);

/// Clock/shift witness of the quantum-plane relations:
/// a = diag(1, q, ..., q^{n-1}), d = diag(1, q^-1, ..., q^{-(n-1)}),
/// b the upper shift, c = 0, paired with the auxiliary blocks
/// (0, (q^-1 - q) b, 0, 0).
std::pair<BlockMpo, BlockMpo> build_xxz_mpo_solution(index_t n, cplx q);

/// Operator on two vectorized sites representing rho -> X rho Y, where X and
/// Y are two-site operators; per-site doubled index is out-major (i, k).
localsolve::LocalOperator doubled_two_site(const MatrixC& X, const MatrixC& Y, index_t d);

/// Generators of weak ([G, rho]) and strong (G rho) continuous symmetries on
/// vectorized density matrices.
localsolve::LocalOperator weak_symmetry_operator(const localsolve::LocalOperator& G);
localsolve::LocalOperator strong_symmetry_operator(const localsolve::LocalOperator& G);

/// MPO symmetry condition [H, O] = 0 as a telescopic solve on the vectorized
/// MPO with the doubled term h x Id - Id x h^T and eps fixed to zero.
localsolve::TelescopicSolution mpo_symmetry_solve(const DenseTensor& T,
                                                  const localsolve::LocalOperator& h,
                                                  const localsolve::SolveOptions& opts = {});

/// Steady-state condition L(rho) = 0 for one injective MPDO block; lsuper is
/// the two-site superoperator in the doubled-site index grouping.
localsolve::TelescopicSolution lindblad_steady_solve(const localsolve::LocalOperator& lsuper,
                                                     const DenseTensor& T,
                                                     const localsolve::SolveOptions& opts = {});

struct ZeroSumDecomposition {
  MatrixC Q;  // single-site operator, defined up to a multiple of Id
  double residual = 0.0;
  bool solvable = false;
};

/// Decide whether the translates of a two-site operator add up to zero on
/// every ring, and decompose O = Q x Id - Id x Q when they do.
ZeroSumDecomposition zero_sum_decompose(const localsolve::LocalOperator& O,
                                        const localsolve::SolveOptions& opts = {});

/// Exact-trajectory condition for the Schroedinger equation: builds the
/// single-site derivative operator from dA and the left inverse, embeds it
/// into the two-site term h - i O_deriv x Id, and solves with eps = 0.
localsolve::TelescopicSolution schrodinger_residual(const mps::UniformMps& m,
                                                    const DenseTensor& dA,
                                                    const localsolve::LocalOperator& h,
                                                    const localsolve::SolveOptions& opts = {});

/// Kronecker product with row-major index fusing.
MatrixC kron(const MatrixC& A, const MatrixC& B);

}  // namespace eigenlocal::apps
