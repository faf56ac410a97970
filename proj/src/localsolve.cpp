#include "eigenlocal/localsolve.hpp"

#include <cmath>

namespace eigenlocal::localsolve {

namespace {

index_t int_log(index_t base, index_t value) {
  index_t w = 0;
  index_t p = 1;
  while (p < value) {
    p *= base;
    ++w;
  }
  if (p != value) return -1;
  return w;
}

/// Matrix of B -> A B - B A: rows index vec of the (D, d^w, D) image,
/// columns index vec of B.
MatrixC rhs_map_matrix(const mps::UniformMps& m, index_t w) {
  const index_t D = m.bond_dim();
  const index_t d = m.phys_dim();
  index_t pb = 1;
  for (index_t i = 0; i < w - 1; ++i) pb *= d;
  const index_t n_b = D * pb * D;
  const index_t n_rows = D * pb * d * D;

  MatrixC M = MatrixC::Zero(n_rows, n_b);
  DenseTensor basis({D, pb, D});
  for (index_t col = 0; col < n_b; ++col) {
    basis.data()[col] = 1.0;
    const DenseTensor img = telescopic_rhs(m, basis);
    for (index_t r = 0; r < n_rows; ++r) M(r, col) = img.data()[r];
    basis.data()[col] = 0.0;
  }
  return M;
}

DenseTensor apply_phys(const MatrixC& op, const DenseTensor& blk) {
  // blk: (D, P, D); op acts on the physical axis
  const index_t D = blk.shape()[0];
  const index_t P = blk.shape()[1];
  const DenseTensor pm = permute(blk, {1, 0, 2});  // (P, D, D)
  MatrixC res = op * pm.as_matrix(1);
  DenseTensor out = DenseTensor::from_matrix(res, {P, D, D});
  return permute(out, {1, 0, 2});
}

}  // namespace

LocalOperator::LocalOperator(index_t w_, index_t d_, MatrixC m)
    : w(w_), d(d_), mat(std::move(m)) {
  if (w < 1 || d < 1) throw DimensionError("LocalOperator needs w >= 1 and d >= 1");
  index_t p = 1;
  for (index_t i = 0; i < w; ++i) p *= d;
  if (mat.rows() != p || mat.cols() != p) {
    throw DimensionError("LocalOperator matrix must be d^w x d^w");
  }
}

LocalOperator LocalOperator::infer(index_t d, MatrixC m) {
  if (m.rows() != m.cols()) throw DimensionError("LocalOperator matrix must be square");
  const index_t w = int_log(d, m.rows());
  if (w < 1) {
    throw DimensionError("operator size " + std::to_string(m.rows()) +
                         " is not a positive power of the physical dimension " +
                         std::to_string(d));
  }
  return LocalOperator(w, d, std::move(m));
}

LocalOperator LocalOperator::identity(index_t w_, index_t d_) {
  index_t p = 1;
  for (index_t i = 0; i < w_; ++i) p *= d_;
  return LocalOperator(w_, d_, MatrixC::Identity(p, p));
}

DenseTensor telescopic_lhs(const mps::UniformMps& m, const LocalOperator& O, cplx epsilon) {
  if (O.d != m.phys_dim()) {
    throw DimensionError("operator physical dimension " + std::to_string(O.d) +
                         " does not match MPS physical dimension " +
                         std::to_string(m.phys_dim()));
  }
  const DenseTensor blk = block(m, O.w);
  MatrixC shifted = O.mat - epsilon * MatrixC::Identity(O.mat.rows(), O.mat.cols());
  return apply_phys(shifted, blk);
}

DenseTensor telescopic_rhs(const mps::UniformMps& m, const DenseTensor& B) {
  const index_t D = m.bond_dim();
  const index_t d = m.phys_dim();
  if (B.rank() != 3 || B.shape()[0] != D || B.shape()[2] != D) {
    throw DimensionError("B must have shape (D, d^{w-1}, D)");
  }
  const index_t pb = B.shape()[1];
  DenseTensor ab = contract(m.A, B, {{2, 0}});  // (D, d, pb, D)
  ab = reshape(ab, {D, d * pb, D});
  DenseTensor ba = contract(B, m.A, {{2, 0}});  // (D, pb, d, D)
  ba = reshape(ba, {D, pb * d, D});
  return ab - ba;
}

TelescopicSolution solve(const mps::UniformMps& m, const LocalOperator& O,
                         std::optional<cplx> fix_epsilon, const SolveOptions& opts) {
  const index_t D = m.bond_dim();
  const index_t d = m.phys_dim();
  if (O.d != d) throw DimensionError("operator/MPS physical dimension mismatch");
  if (O.w < 2) throw DimensionError("telescopic solve needs support width >= 2");

  const DenseTensor blk = block(m, O.w);
  const DenseTensor o_blk = apply_phys(O.mat, blk);
  const double scale = frobenius_norm(o_blk) + 1.0;

  const MatrixC M_b = rhs_map_matrix(m, O.w);
  const index_t n_b = M_b.cols();
  const index_t n_rows = M_b.rows();

  MatrixC M;
  VectorC y(n_rows);
  if (fix_epsilon) {
    M = M_b;
    const DenseTensor lhs = telescopic_lhs(m, O, *fix_epsilon);
    for (index_t r = 0; r < n_rows; ++r) y(r) = lhs.data()[r];
  } else {
    M.resize(n_rows, n_b + 1);
    M.leftCols(n_b) = M_b;
    for (index_t r = 0; r < n_rows; ++r) {
      M(r, n_b) = blk.data()[r];
      y(r) = o_blk.data()[r];
    }
  }

  const auto rep = linalg::least_squares(M, y, opts.tol);

  TelescopicSolution sol;
  index_t pb = 1;
  for (index_t i = 0; i < O.w - 1; ++i) pb *= d;
  std::vector<cplx> bdata(rep.solution.data(), rep.solution.data() + n_b);
  sol.B = DenseTensor({D, pb, D}, std::move(bdata));
  sol.epsilon = fix_epsilon ? *fix_epsilon : rep.solution(n_b);
  sol.residual = rep.residual_norm / scale;
  sol.gauge_dim = static_cast<index_t>(linalg::nullspace_basis(M_b, opts.tol).size());
  sol.solvable = sol.residual < opts.solvable_threshold;

  // deterministic representative: project out the block direction
  const DenseTensor g = block(m, O.w - 1);
  const cplx gg = overlap(g, g);
  if (std::abs(gg) > 0.0) {
    sol.B = sol.B - (overlap(g, sol.B) / gg) * g;
  }

  const auto inj = mps::injectivity_length(m);
  if (!inj.injective) {
    sol.warnings.push_back(
        "input tensor is not injective: a vanishing residual is still sufficient for the "
        "global eigenvalue equation, but solvability is no longer necessary");
  }
  return sol;
}

std::pair<index_t, std::vector<DenseTensor>> gauge_nullspace(const mps::UniformMps& m,
                                                             index_t w, double tol) {
  if (w < 2) throw DimensionError("gauge_nullspace needs w >= 2");
  const index_t D = m.bond_dim();
  index_t pb = 1;
  for (index_t i = 0; i < w - 1; ++i) pb *= m.phys_dim();
  const MatrixC M = rhs_map_matrix(m, w);
  const auto basis = linalg::nullspace_basis(M, tol);
  std::vector<DenseTensor> out;
  for (const auto& v : basis) {
    std::vector<cplx> data(v.data(), v.data() + v.size());
    out.emplace_back(std::vector<index_t>{D, pb, D}, std::move(data));
  }
  return {static_cast<index_t>(out.size()), std::move(out)};
}

std::vector<std::pair<DenseTensor, double>> solve_site_dependent(
    const mps::SiteChain& chain, const std::vector<LocalOperator>& terms,
    const SolveOptions& opts) {
  const index_t n = chain.length();
  if (static_cast<index_t>(terms.size()) != n) {
    throw DimensionError("need exactly one two-site term per bond");
  }
  for (index_t k = 0; k < n; ++k) {
    if (terms[k].w != 2) throw DimensionError("site-dependent solve supports w = 2 terms");
    if (terms[k].d != chain.tensors[k].shape()[1]) {
      throw DimensionError("term " + std::to_string(k) + " physical dimension mismatch");
    }
  }

  // unknown layout: vec(B^{[0]}) | vec(B^{[1]}) | ...
  std::vector<index_t> offset(n + 1, 0);
  for (index_t k = 0; k < n; ++k) {
    const auto& s = chain.tensors[k].shape();
    offset[k + 1] = offset[k] + s[0] * s[1] * s[2];
  }
  const index_t n_unknowns = offset[n];

  std::vector<index_t> row_offset(n + 1, 0);
  std::vector<DenseTensor> rhs_blocks;
  for (index_t k = 0; k < n; ++k) {
    const auto& ak = chain.tensors[k];
    const auto& an = chain.tensors[(k + 1) % n];
    DenseTensor pair = contract(ak, an, {{2, 0}});  // (Dk, dk, dn, Dk2)
    pair = reshape(pair, {pair.shape()[0], pair.shape()[1] * pair.shape()[2], pair.shape()[3]});
    rhs_blocks.push_back(apply_phys(terms[k].mat, pair));
    row_offset[k + 1] = row_offset[k] + rhs_blocks.back().size();
  }

  MatrixC M = MatrixC::Zero(row_offset[n], n_unknowns);
  VectorC y(row_offset[n]);
  for (index_t k = 0; k < n; ++k) {
    const index_t next = (k + 1) % n;
    const auto& ak = chain.tensors[k];
    const auto& an = chain.tensors[next];

    for (index_t r = 0; r < rhs_blocks[k].size(); ++r) {
      y(row_offset[k] + r) = rhs_blocks[k].data()[r];
    }

    // + A^{[k]} B^{[next]}
    {
      DenseTensor basis(an.shape());
      for (index_t c = 0; c < basis.size(); ++c) {
        basis.data()[c] = 1.0;
        DenseTensor img = contract(ak, basis, {{2, 0}});
        basis.data()[c] = 0.0;
        for (index_t r = 0; r < img.size(); ++r) {
          M(row_offset[k] + r, offset[next] + c) += img.data()[r];
        }
      }
    }
    // - B^{[k]} A^{[next]}
    {
      DenseTensor basis(ak.shape());
      for (index_t c = 0; c < basis.size(); ++c) {
        basis.data()[c] = 1.0;
        DenseTensor img = contract(basis, an, {{2, 0}});
        basis.data()[c] = 0.0;
        for (index_t r = 0; r < img.size(); ++r) {
          M(row_offset[k] + r, offset[k] + c) -= img.data()[r];
        }
      }
    }
  }

  const auto rep = linalg::least_squares(M, y, opts.tol);
  const VectorC resid_vec = M * rep.solution - y;

  std::vector<std::pair<DenseTensor, double>> out;
  for (index_t k = 0; k < n; ++k) {
    std::vector<cplx> data(rep.solution.data() + offset[k], rep.solution.data() + offset[k + 1]);
    DenseTensor bk(chain.tensors[k].shape(), std::move(data));
    const double raw = resid_vec.segment(row_offset[k], row_offset[k + 1] - row_offset[k]).norm();
    const double scale = frobenius_norm(rhs_blocks[k]) + 1.0;
    out.emplace_back(std::move(bk), raw / scale);
  }
  return out;
}

LocalOperator boundary_operator(const mps::UniformMps& m, const DenseTensor& B, double tol) {
  const index_t D = m.bond_dim();
  const index_t d = m.phys_dim();
  if (B.rank() != 3 || B.shape()[0] != D || B.shape()[2] != D) {
    throw DimensionError("B must have shape (D, d^{w-1}, D)");
  }
  const index_t wm1 = int_log(d, B.shape()[1]);
  if (wm1 < 1) throw DimensionError("B physical dimension is not a power of d");

  const auto inj = mps::injectivity_length(m);
  if (!inj.injective) {
    throw RankDeficiencyError("boundary_operator requires an injective tensor",
                              inj.ranks.empty() ? 0 : inj.ranks.back());
  }
  const index_t L = std::max(*inj.length, wm1);

  DenseTensor bpad = B;
  for (index_t l = wm1; l < L; ++l) {
    bpad = contract(bpad, m.A, {{2, 0}});
    bpad = reshape(bpad, {D, bpad.shape()[1] * d, D});
  }
  const DenseTensor ainv = mps::left_inverse(m, L, tol);
  const DenseTensor t = contract(bpad, ainv, {{0, 0}, {2, 2}});  // (d^L, d^L)
  MatrixC tm = t.as_matrix(1);
  return LocalOperator(L, d, std::move(tm));
}

}  // namespace eigenlocal::localsolve
