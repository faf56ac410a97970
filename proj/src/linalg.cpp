#include "eigenlocal/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <random>

namespace eigenlocal::linalg {

namespace {

Eigen::JacobiSVD<MatrixC> full_svd(const MatrixC& m) {
  return Eigen::JacobiSVD<MatrixC>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

index_t rank_from_svd(const Eigen::JacobiSVD<MatrixC>& svd, double tol) {
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol * sv(0);
  index_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

MatrixC pseudo_inverse(const MatrixC& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("pseudo_inverse of empty matrix");
  auto svd = full_svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  VectorC inv_sv = VectorC::Zero(std::min(m.rows(), m.cols()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv_sv(i) = cplx(1.0 / sv(i), 0.0);
  }
  return svd.matrixV().leftCols(sv.size()) * inv_sv.asDiagonal() *
         svd.matrixU().leftCols(sv.size()).adjoint();
}

LinearSolveReport least_squares(const MatrixC& m, const VectorC& y, double tol) {
  if (m.rows() != y.size()) {
    throw DimensionError("least_squares: row count " + std::to_string(m.rows()) +
                         " does not match rhs length " + std::to_string(y.size()));
  }
  auto svd = full_svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;

  VectorC uty = svd.matrixU().adjoint() * y;
  VectorC z = VectorC::Zero(m.cols());
  index_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      z(i) = uty(i) / sv(i);
      ++rank;
    }
  }
  LinearSolveReport rep;
  rep.solution = svd.matrixV() * z;
  rep.residual_norm = (m * rep.solution - y).norm();
  rep.rank = rank;
  rep.nullspace_dim = m.cols() - rank;
  return rep;
}

std::vector<VectorC> nullspace_basis(const MatrixC& m, double tol) {
  auto svd = full_svd(m);
  const index_t rank = rank_from_svd(svd, tol);
  std::vector<VectorC> basis;
  for (Eigen::Index i = rank; i < m.cols(); ++i) {
    basis.push_back(svd.matrixV().col(i));
  }
  return basis;
}

index_t matrix_rank(const MatrixC& m, double tol) {
  return rank_from_svd(full_svd(m), tol);
}

std::pair<cplx, VectorC> dominant_eigenpair(
    const std::function<VectorC(const VectorC&)>& apply, index_t dim,
    const EigenpairOptions& opts) {
  if (dim <= 0) throw DimensionError("dominant_eigenpair: dimension must be positive");

  if (dim <= opts.dense_threshold) {
    MatrixC mat(dim, dim);
    VectorC e = VectorC::Zero(dim);
    for (index_t j = 0; j < dim; ++j) {
      e(j) = 1.0;
      mat.col(j) = apply(e);
      e(j) = 0.0;
    }
    Eigen::ComplexEigenSolver<MatrixC> es(mat);
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    VectorC v = es.eigenvectors().col(best);
    v /= v.norm();
    return {es.eigenvalues()(best), v};
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorC v(dim);
  auto randomize = [&] {
    for (index_t i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v /= v.norm();
  };
  randomize();

  cplx lambda(0.0, 0.0);
  const index_t restart_period = std::max<index_t>(opts.max_iter / 4, 1);
  for (index_t it = 1; it <= opts.max_iter; ++it) {
    VectorC w = apply(v);
    lambda = v.dot(w);  // Rayleigh quotient, v has unit norm
    if ((w - lambda * v).norm() <= opts.tol * std::max(1.0, std::abs(lambda))) {
      return {lambda, v};
    }
    const double wn = w.norm();
    if (wn == 0.0) {
      return {cplx(0.0, 0.0), v};  // map annihilated the iterate; 0 is dominant on its span
    }
    v = w / wn;
    if (it % restart_period == 0 && it < opts.max_iter) randomize();
  }
  std::vector<cplx> iterate(v.data(), v.data() + v.size());
  throw ConvergenceError("dominant_eigenpair: power iteration did not converge in " +
                             std::to_string(opts.max_iter) + " iterations",
                         std::move(iterate));
}

}  // namespace eigenlocal::linalg
