#pragma once

#include "eigenlocal/localsolve.hpp"
#include "eigenlocal/mps.hpp"
#include "eigenlocal/tensor.hpp"

namespace eigenlocal::oracle {

/// Default cap on dense object entries (state vectors and matrices).
inline constexpr index_t kDefaultSizeCap = index_t(1) << 24;

struct RingReport {
  index_t n_sites = 0;
  double state_norm = 0.0;
  double eigen_residual = 0.0;  // ||(O_N - N eps) psi|| / ||psi||
  bool passed = false;
};

/// Full coefficient vector of the ring state, entries Tr(A^{i_1}...A^{i_N})
/// with i_1 the slowest index.
VectorC mps_state(const mps::UniformMps& m, index_t n,
                  index_t size_cap = kDefaultSizeCap);
VectorC mps_state(const mps::SiteChain& chain, index_t size_cap = kDefaultSizeCap);

/// Apply an operator to the listed sites (in order) of an n-site state with
/// uniform local dimension d.
VectorC apply_at_sites(const MatrixC& op, std::span<const index_t> sites, index_t n,
                       index_t d, const VectorC& v);

/// Apply O at sites (site, ..., site + w - 1) mod n of an n-site state.
VectorC apply_local(const localsolve::LocalOperator& O, index_t n, index_t site,
                    const VectorC& v);

/// Apply the sum of all n translations of O, with wraparound.
VectorC apply_extensive(const localsolve::LocalOperator& O, index_t n, const VectorC& v);

/// Dense d^n x d^n matrix of the sum of all translations of O.
MatrixC extensive_operator(const localsolve::LocalOperator& O, index_t n,
                           index_t size_cap = kDefaultSizeCap);

RingReport eigencheck(const mps::UniformMps& m, const localsolve::LocalOperator& O,
                      cplx epsilon, index_t n, double tol = 1e-10,
                      index_t size_cap = kDefaultSizeCap);

/// Ring check for site-dependent tensors: one term per bond, total target
/// eigenvalue e_total (terms are applied at their own bond only).
RingReport chain_eigencheck(const mps::SiteChain& chain,
                            const std::vector<localsolve::LocalOperator>& terms,
                            cplx e_total, double tol = 1e-10,
                            index_t size_cap = kDefaultSizeCap);

/// Build a two-site operator realizing a prescribed (B, eps) on an MPS that
/// is injective at length one: on the image of the blocked map the operator
/// is fixed by the telescopic identity, on the complement it acts as eps*Id.
localsolve::LocalOperator construct_operator(const mps::UniformMps& m,
                                             const DenseTensor& B, cplx epsilon,
                                             double tol = linalg::kDefaultTol);

/// Residual of the boundary-operator identity on a region of the ring:
/// (sum_{i in Lambda} O_i - eps |Lambda|) psi vs the difference of the
/// boundary operator applied at the two edges of Lambda.
double boundary_identity_check(const mps::UniformMps& m, const DenseTensor& B,
                               const localsolve::LocalOperator& O, cplx epsilon,
                               index_t n, index_t region_size,
                               index_t size_cap = kDefaultSizeCap);

/// Dense operator represented by an MPO tensor (D, d_out, d_in, D) on a ring.
MatrixC mpo_dense(const DenseTensor& T, index_t n, index_t size_cap = kDefaultSizeCap);

/// || [H_n, O_n] ||_F / ||O_n||_F with H_n extensive from h and O_n the dense
/// MPO of T.
double commutator_check(const localsolve::LocalOperator& h, const DenseTensor& T,
                        index_t n, index_t size_cap = kDefaultSizeCap);

}  // namespace eigenlocal::oracle
