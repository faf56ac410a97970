#include "eigenlocal/mps.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace eigenlocal::mps {

UniformMps::UniformMps(DenseTensor a) : A(std::move(a)) {
  if (A.rank() != 3) throw DimensionError("MPS site tensor must have rank 3 (left, phys, right)");
  if (A.shape()[0] != A.shape()[2]) {
    throw DimensionError("MPS site tensor must have equal left/right bond dimensions");
  }
  if (frobenius_norm(A) == 0.0) throw DimensionError("MPS site tensor is identically zero");
}

MatrixC UniformMps::site_matrix(index_t i) const {
  const index_t D = bond_dim();
  MatrixC out(D, D);
  for (index_t a = 0; a < D; ++a) {
    for (index_t b = 0; b < D; ++b) out(a, b) = A.at({a, i, b});
  }
  return out;
}

SiteChain::SiteChain(std::vector<DenseTensor> ts) : tensors(std::move(ts)) {
  if (tensors.empty()) throw DimensionError("SiteChain needs at least one tensor");
  const index_t n = static_cast<index_t>(tensors.size());
  for (index_t k = 0; k < n; ++k) {
    if (tensors[k].rank() != 3) throw DimensionError("SiteChain tensors must have rank 3");
    const index_t next = (k + 1) % n;
    if (tensors[k].shape()[2] != tensors[next].shape()[0]) {
      throw DimensionError("SiteChain bond mismatch between sites " + std::to_string(k) +
                           " and " + std::to_string(next));
    }
  }
}

MatrixC transfer_matrix(const UniformMps& m) {
  const index_t D = m.bond_dim();
  // row-major vec: T[(a,g),(b,dl)] = sum_i A^i[a,b] conj(A^i[g,dl])
  MatrixC T = MatrixC::Zero(D * D, D * D);
  for (index_t i = 0; i < m.phys_dim(); ++i) {
    const MatrixC Ai = m.site_matrix(i);
    for (index_t a = 0; a < D; ++a)
      for (index_t g = 0; g < D; ++g)
        for (index_t b = 0; b < D; ++b)
          for (index_t dl = 0; dl < D; ++dl)
            T(a * D + g, b * D + dl) += Ai(a, b) * std::conj(Ai(g, dl));
  }
  return T;
}

double spectral_radius(const UniformMps& m) {
  const MatrixC T = transfer_matrix(m);
  auto [lambda, v] = linalg::dominant_eigenpair(
      [&T](const VectorC& x) { return VectorC(T * x); }, T.rows());
  (void)v;
  return std::abs(lambda);
}

UniformMps normalize(const UniformMps& m) {
  const double r = spectral_radius(m);
  if (r <= 0.0) throw DimensionError("cannot normalize: transfer matrix has zero spectral radius");
  return UniformMps(cplx(1.0 / std::sqrt(r), 0.0) * m.A);
}

namespace {

MatrixC hermitized_positive_eigvec(const VectorC& vec, index_t D) {
  MatrixC rho(D, D);
  for (index_t a = 0; a < D; ++a)
    for (index_t b = 0; b < D; ++b) rho(a, b) = vec(a * D + b);
  // fix the arbitrary eigenvector phase via the trace, then Hermitize
  const cplx tr = rho.trace();
  if (std::abs(tr) > 0.0) rho *= std::conj(tr) / std::abs(tr);
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  if (rho.trace().real() < 0.0) rho = -rho;
  return rho;
}

}  // namespace

FixedPoints fixed_points(const UniformMps& m, double tol) {
  const index_t D = m.bond_dim();
  const MatrixC T = transfer_matrix(m);

  Eigen::ComplexEigenSolver<MatrixC> es(T);
  const auto& evals = es.eigenvalues();
  Eigen::Index i_max = 0;
  evals.cwiseAbs().maxCoeff(&i_max);
  const double r1 = std::abs(evals(i_max));
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (i == i_max) continue;
    r2 = std::max(r2, std::abs(evals(i)));
  }
  if (D > 1 && r1 - r2 < tol * std::max(r1, 1.0)) {
    throw NonInjectivityError(
        "degenerate dominant transfer eigenvalue (gap " + std::to_string(r1 - r2) +
        "); the tensor is not injective");
  }

  FixedPoints fp;
  fp.spectral_radius = std::sqrt(r1);
  fp.rho_r = hermitized_positive_eigvec(es.eigenvectors().col(i_max), D);

  // left fixed point: dominant eigenvector of the adjoint map
  Eigen::ComplexEigenSolver<MatrixC> esl(T.adjoint().eval());
  Eigen::Index i_max_l = 0;
  esl.eigenvalues().cwiseAbs().maxCoeff(&i_max_l);
  fp.rho_l = hermitized_positive_eigvec(esl.eigenvectors().col(i_max_l), D);

  fp.rho_r /= fp.rho_r.trace().real();
  const cplx s = (fp.rho_l * fp.rho_r).trace();
  if (std::abs(s) == 0.0) throw NonInjectivityError("fixed points have vanishing overlap");
  fp.rho_l /= s.real();

  Eigen::SelfAdjointEigenSolver<MatrixC> sl(fp.rho_l), sr(fp.rho_r);
  fp.min_eig_l = sl.eigenvalues().minCoeff();
  fp.min_eig_r = sr.eigenvalues().minCoeff();
  return fp;
}

index_t default_l_max(const UniformMps& m) {
  const double D2 = static_cast<double>(m.bond_dim() * m.bond_dim());
  const double d = static_cast<double>(m.phys_dim());
  const index_t base = d > 1.0 ? static_cast<index_t>(std::ceil(std::log(D2) / std::log(d))) : 1;
  return 2 * std::max<index_t>(base, 1) + 2;
}

InjectivityReport injectivity_length(const UniformMps& m, index_t l_max, double tol) {
  if (l_max < 1) throw DimensionError("injectivity_length: l_max must be >= 1");
  const index_t D2 = m.bond_dim() * m.bond_dim();
  InjectivityReport rep;
  for (index_t l = 1; l <= l_max; ++l) {
    const DenseTensor blk = block(m, l);  // (D, d^l, D)
    const DenseTensor mat = permute(blk, {1, 0, 2});
    const index_t r = linalg::matrix_rank(mat.as_matrix(1), tol);
    rep.ranks.push_back(r);
    if (r == D2) {
      rep.injective = true;
      rep.length = l;
      break;
    }
  }
  return rep;
}

InjectivityReport injectivity_length(const UniformMps& m) {
  return injectivity_length(m, default_l_max(m));
}

DenseTensor block(const UniformMps& m, index_t L) {
  if (L < 1) throw DimensionError("block length must be >= 1");
  DenseTensor out = m.A;
  for (index_t l = 1; l < L; ++l) {
    // (D, d^l, D) x (D, d, D) over the shared bond -> (D, d^l, d, D)
    out = contract(out, m.A, {{2, 0}});
    out = reshape(out, {m.bond_dim(), out.shape()[1] * m.phys_dim(), m.bond_dim()});
  }
  return out;
}

DenseTensor left_inverse(const UniformMps& m, index_t L, double tol) {
  const index_t D = m.bond_dim();
  const DenseTensor blk = permute(block(m, L), {1, 0, 2});  // (d^L, D, D)
  const auto G = blk.as_matrix(1);                          // d^L x D^2
  const index_t r = linalg::matrix_rank(G, tol);
  if (r < D * D) {
    throw RankDeficiencyError("left_inverse: blocked map has rank " + std::to_string(r) +
                                  " < " + std::to_string(D * D) + " at length " +
                                  std::to_string(L),
                              r);
  }
  const MatrixC pinv = linalg::pseudo_inverse(G, tol);  // D^2 x d^L
  DenseTensor ainv = DenseTensor::from_matrix(pinv, {D, D, pinv.cols()});
  return permute(ainv, {0, 2, 1});  // (D, d^L, D)
}

DenseTensor proof_inverse_x(const UniformMps& m, index_t L, double tol) {
  const DenseTensor ainv = left_inverse(m, L, tol);
  const FixedPoints fp = fixed_points(m, tol);
  const index_t D = m.bond_dim();
  const index_t P = ainv.shape()[1];
  // X[g, i, dl] = sum_{a,e} rho_r[a, g] * Ainv[a, i, e] * rho_l[dl, e]
  DenseTensor rr = DenseTensor::from_matrix(fp.rho_r, {D, D});
  DenseTensor rl = DenseTensor::from_matrix(fp.rho_l, {D, D});
  DenseTensor x = contract(rr, ainv, {{0, 0}});  // (g, i, e)
  x = contract(x, rl, {{2, 1}});                 // (g, i, dl)
  return reshape(x, {D, P, D});
}

UniformMps vectorize_mpo(const DenseTensor& T) {
  if (T.rank() != 4) throw DimensionError("MPO tensor must have rank 4 (left, out, in, right)");
  if (T.shape()[0] != T.shape()[3]) throw DimensionError("MPO tensor bond mismatch");
  return UniformMps(reshape(T, {T.shape()[0], T.shape()[1] * T.shape()[2], T.shape()[3]}));
}

}  // namespace eigenlocal::mps
