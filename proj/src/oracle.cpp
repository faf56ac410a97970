#include "eigenlocal/oracle.hpp"

#include <cmath>
#include <numeric>

namespace eigenlocal::oracle {

namespace {

index_t checked_pow(index_t base, index_t exp, index_t cap, const char* what) {
  index_t p = 1;
  for (index_t i = 0; i < exp; ++i) {
    if (p > cap / base) {
      throw SizeCapError(std::string(what) + " would exceed the size cap of " +
                         std::to_string(cap) + " entries");
    }
    p *= base;
  }
  if (p > cap) {
    throw SizeCapError(std::string(what) + " would exceed the size cap of " +
                       std::to_string(cap) + " entries");
  }
  return p;
}

VectorC trace_state(const std::vector<DenseTensor>& site_tensors, index_t size_cap) {
  index_t total_phys = 1;
  for (const auto& t : site_tensors) {
    if (total_phys > size_cap / t.shape()[1]) {
      throw SizeCapError("state vector would exceed the size cap of " +
                         std::to_string(size_cap) + " entries");
    }
    total_phys *= t.shape()[1];
  }

  // running tensor (P, D_first, D_right), P the accumulated physical index
  DenseTensor run = permute(site_tensors[0], {1, 0, 2});
  for (std::size_t k = 1; k < site_tensors.size(); ++k) {
    DenseTensor next = contract(run, site_tensors[k], {{2, 0}});  // (P, Dl, d, Dr)
    next = permute(next, {0, 2, 1, 3});
    run = reshape(next, {next.shape()[0] * next.shape()[1], next.shape()[2], next.shape()[3]});
  }

  const index_t p = run.shape()[0];
  const index_t dl = run.shape()[1];
  VectorC state(p);
  for (index_t i = 0; i < p; ++i) {
    cplx tr(0.0, 0.0);
    for (index_t a = 0; a < dl; ++a) tr += run.at({i, a, a});
    state(i) = tr;
  }
  return state;
}

}  // namespace

VectorC mps_state(const mps::UniformMps& m, index_t n, index_t size_cap) {
  if (n < 1) throw DimensionError("ring needs at least one site");
  std::vector<DenseTensor> sites(static_cast<std::size_t>(n), m.A);
  return trace_state(sites, size_cap);
}

VectorC mps_state(const mps::SiteChain& chain, index_t size_cap) {
  return trace_state(chain.tensors, size_cap);
}

VectorC apply_at_sites(const MatrixC& op, std::span<const index_t> sites, index_t n,
                       index_t d, const VectorC& v) {
  const index_t w = static_cast<index_t>(sites.size());
  if (w > n) throw DimensionError("operator support exceeds ring size");
  index_t total = 1;
  for (index_t i = 0; i < n; ++i) total *= d;
  if (v.size() != total) throw DimensionError("state length does not match d^n");

  std::vector<index_t> shape(static_cast<std::size_t>(n), d);
  std::vector<cplx> data(v.data(), v.data() + v.size());
  DenseTensor t(shape, std::move(data));

  std::vector<index_t> perm;
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  for (index_t ax : sites) {
    if (ax < 0 || ax >= n || taken[static_cast<std::size_t>(ax)]) {
      throw DimensionError("operator sites must be distinct and inside the ring");
    }
    perm.push_back(ax);
    taken[static_cast<std::size_t>(ax)] = true;
  }
  for (index_t ax = 0; ax < n; ++ax) {
    if (!taken[static_cast<std::size_t>(ax)]) perm.push_back(ax);
  }

  DenseTensor front = permute(t, perm);
  MatrixC res = op * front.as_matrix(w);
  DenseTensor out = DenseTensor::from_matrix(res, front.shape());

  std::vector<index_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[static_cast<std::size_t>(perm[k])] = k;
  DenseTensor back = permute(out, inv);

  return Eigen::Map<const VectorC>(back.data().data(), back.size());
}

VectorC apply_local(const localsolve::LocalOperator& O, index_t n, index_t site,
                    const VectorC& v) {
  std::vector<index_t> sites;
  for (index_t k = 0; k < O.w; ++k) sites.push_back((site + k) % n);
  return apply_at_sites(O.mat, sites, n, O.d, v);
}

VectorC apply_extensive(const localsolve::LocalOperator& O, index_t n, const VectorC& v) {
  VectorC acc = VectorC::Zero(v.size());
  for (index_t site = 0; site < n; ++site) acc += apply_local(O, n, site, v);
  return acc;
}

MatrixC extensive_operator(const localsolve::LocalOperator& O, index_t n, index_t size_cap) {
  if (n < O.w) throw DimensionError("ring shorter than the operator support");
  const index_t dim = checked_pow(O.d, n, size_cap, "dense operator rows");
  checked_pow(dim, 2, size_cap, "dense extensive operator");
  MatrixC out(dim, dim);
  VectorC e = VectorC::Zero(dim);
  for (index_t j = 0; j < dim; ++j) {
    e(j) = 1.0;
    out.col(j) = apply_extensive(O, n, e);
    e(j) = 0.0;
  }
  return out;
}

RingReport eigencheck(const mps::UniformMps& m, const localsolve::LocalOperator& O,
                      cplx epsilon, index_t n, double tol, index_t size_cap) {
  if (O.d != m.phys_dim()) throw DimensionError("operator/MPS physical dimension mismatch");
  const VectorC psi = mps_state(m, n, size_cap);
  const double norm = psi.norm();
  if (norm == 0.0) throw DimensionError("ring state vanishes");
  const VectorC r = apply_extensive(O, n, psi) - cplx(static_cast<double>(n), 0.0) * epsilon * psi;
  RingReport rep;
  rep.n_sites = n;
  rep.state_norm = norm;
  rep.eigen_residual = r.norm() / norm;
  rep.passed = rep.eigen_residual < tol;
  return rep;
}

RingReport chain_eigencheck(const mps::SiteChain& chain,
                            const std::vector<localsolve::LocalOperator>& terms,
                            cplx e_total, double tol, index_t size_cap) {
  const index_t n = chain.length();
  if (static_cast<index_t>(terms.size()) != n) throw DimensionError("one term per bond required");
  const index_t d = chain.tensors[0].shape()[1];
  for (const auto& t : chain.tensors) {
    if (t.shape()[1] != d) {
      throw DimensionError("chain_eigencheck requires a uniform physical dimension");
    }
  }
  const VectorC psi = mps_state(chain, size_cap);
  const double norm = psi.norm();
  if (norm == 0.0) throw DimensionError("ring state vanishes");
  VectorC acc = -e_total * psi;
  for (index_t k = 0; k < n; ++k) acc += apply_local(terms[k], n, k, psi);
  RingReport rep;
  rep.n_sites = n;
  rep.state_norm = norm;
  rep.eigen_residual = acc.norm() / norm;
  rep.passed = rep.eigen_residual < tol;
  return rep;
}

localsolve::LocalOperator construct_operator(const mps::UniformMps& m, const DenseTensor& B,
                                             cplx epsilon, double tol) {
  const index_t D = m.bond_dim();
  const index_t d = m.phys_dim();
  const auto inj = mps::injectivity_length(m, 1, tol);
  if (!inj.injective) {
    throw UnsupportedConstructionError(
        "construct_operator requires injectivity at blocking length one (d >= D^2); "
        "observed rank " +
        std::to_string(inj.ranks.empty() ? 0 : inj.ranks.front()) + " < " +
        std::to_string(D * D));
  }

  const DenseTensor blk = permute(mps::block(m, 2), {1, 0, 2});  // (d^2, D, D)
  const auto G = blk.as_matrix(1);                               // d^2 x D^2
  const DenseTensor rhs = permute(localsolve::telescopic_rhs(m, B), {1, 0, 2});
  const MatrixC K = epsilon * G + rhs.as_matrix(1);

  const MatrixC Gp = linalg::pseudo_inverse(G, tol);
  const MatrixC proj = G * Gp;  // projector onto the blocked image
  MatrixC O = K * Gp + epsilon * (MatrixC::Identity(proj.rows(), proj.cols()) - proj);
  return localsolve::LocalOperator(2, d, std::move(O));
}

double boundary_identity_check(const mps::UniformMps& m, const DenseTensor& B,
                               const localsolve::LocalOperator& O, cplx epsilon,
                               index_t n, index_t region_size, index_t size_cap) {
  if (region_size < 1 || region_size > n) throw DimensionError("region must fit inside the ring");
  const VectorC psi = mps_state(m, n, size_cap);
  const double norm = psi.norm();

  VectorC lhs = -epsilon * cplx(static_cast<double>(region_size), 0.0) * psi;
  for (index_t k = 0; k < region_size; ++k) lhs += apply_local(O, n, k, psi);

  const localsolve::LocalOperator t = localsolve::boundary_operator(m, B);
  // one term of the telescoped sum survives at each edge of the region
  const VectorC rhs = apply_local(t, n, region_size % n, psi) - apply_local(t, n, 0, psi);

  return (lhs - rhs).norm() / norm;
}

MatrixC mpo_dense(const DenseTensor& T, index_t n, index_t size_cap) {
  const mps::UniformMps vec = mps::vectorize_mpo(T);
  const index_t d_out = T.shape()[1];
  const index_t d_in = T.shape()[2];
  const VectorC v = mps_state(vec, n, size_cap);

  std::vector<index_t> shape;
  for (index_t k = 0; k < n; ++k) {
    shape.push_back(d_out);
    shape.push_back(d_in);
  }
  std::vector<cplx> data(v.data(), v.data() + v.size());
  DenseTensor t(shape, std::move(data));

  std::vector<index_t> perm;
  for (index_t k = 0; k < n; ++k) perm.push_back(2 * k);
  for (index_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);
  DenseTensor split = permute(t, perm);
  return split.as_matrix(n);
}

double commutator_check(const localsolve::LocalOperator& h, const DenseTensor& T, index_t n,
                        index_t size_cap) {
  if (T.shape()[1] != h.d || T.shape()[2] != h.d) {
    throw DimensionError("MPO physical dimensions must match the Hamiltonian term");
  }
  const MatrixC H = extensive_operator(h, n, size_cap);
  const MatrixC O = mpo_dense(T, n, size_cap);
  const double onorm = O.norm();
  if (onorm == 0.0) throw DimensionError("MPO contracts to zero on this ring");
  return (H * O - O * H).norm() / onorm;
}

}  // namespace eigenlocal::oracle
