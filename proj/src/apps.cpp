#include "eigenlocal/apps.hpp"

#include <cmath>

namespace eigenlocal::apps {

namespace {

const MatrixC& block_of(const BlockMpo& m, int idx) {
  switch (idx) {
    case 0: return m.a;
    case 1: return m.b;
    case 2: return m.c;
    default: return m.d;
  }
}

}  // namespace

MatrixC kron(const MatrixC& A, const MatrixC& B) {
  MatrixC out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

DenseTensor block_mpo_tensor(const BlockMpo& blocks) {
  const index_t n = blocks.virt_dim();
  for (const MatrixC* m : {&blocks.a, &blocks.b, &blocks.c, &blocks.d}) {
    if (m->rows() != n || m->cols() != n) {
      throw DimensionError("all four MPO blocks must share one virtual dimension");
    }
  }
  DenseTensor T({n, 2, 2, n});
  for (index_t o = 0; o < 2; ++o)
    for (index_t i = 0; i < 2; ++i) {
      const MatrixC& blk = block_of(blocks, static_cast<int>(2 * o + i));
      for (index_t al = 0; al < n; ++al)
        for (index_t be = 0; be < n; ++be) T.at({al, o, i, be}) = blk(al, be);
    }
  return T;
}

localsolve::LocalOperator xxz_hamiltonian(cplx delta) {
  MatrixC h = MatrixC::Zero(4, 4);
  h(0, 0) = delta;
  h(1, 1) = -delta;
  h(2, 2) = -delta;
  h(1, 2) = 2.0;
  h(2, 1) = 2.0;
  h(3, 3) = delta;
  return localsolve::LocalOperator(2, 2, std::move(h));
}

std::pair<cplx, cplx> qdeform_params(cplx delta) {
  const cplx root = std::sqrt(delta * delta - cplx(1.0, 0.0));
  cplx q = delta + root;
  const cplx q_other = delta - root;
  if (std::abs(q_other) > std::abs(q) ||
      (std::abs(std::abs(q_other) - std::abs(q)) < 1e-14 && q_other.imag() > q.imag())) {
    q = q_other;
  }
  return {q, q - cplx(1.0, 0.0) / q};
}

std::array<double, 16> xxz_component_residuals(const BlockMpo& T, const BlockMpo& Bt,
                                               cplx delta) {
  if (T.virt_dim() != Bt.virt_dim()) {
    throw DimensionError("black and auxiliary MPO blocks must share the virtual dimension");
  }

  // one left-hand term: (c0 + c1*Delta) * black[x] * black[y]
  struct Term {
    double c0, c1;
    int x, y;
  };
  // one equation: sum of lhs terms = black[p]*aux[q] - aux[p]*black[q]
  struct Equation {
    std::vector<Term> lhs;
    int p, q;
  };
  enum { A = 0, B = 1, C = 2, D = 3 };
  static const std::vector<Equation> table = {
      {{}, A, A},
      {{{0, 2, A, B}, {-2, 0, B, A}}, A, B},
      {{{0, 2, B, A}, {-2, 0, A, B}}, B, A},
      {{}, B, B},
      {{{2, 0, C, A}, {0, -2, A, C}}, A, C},
      {{{2, 0, C, B}, {-2, 0, B, C}}, A, D},
      {{{2, 0, D, A}, {-2, 0, A, D}}, B, C},
      {{{2, 0, D, B}, {0, -2, B, D}}, B, D},
      {{{2, 0, A, C}, {0, -2, C, A}}, C, A},
      {{{2, 0, A, D}, {-2, 0, D, A}}, C, B},
      {{{2, 0, B, C}, {-2, 0, C, B}}, D, A},
      {{{2, 0, B, D}, {0, -2, D, B}}, D, B},
      {{}, C, C},
      {{{0, 2, C, D}, {-2, 0, D, C}}, C, D},
      {{{0, 2, D, C}, {-2, 0, C, D}}, D, C},
      {{}, D, D},
  };

  std::array<double, 16> res{};
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& eq = table[k];
    MatrixC lhs = MatrixC::Zero(T.virt_dim(), T.virt_dim());
    for (const Term& t : eq.lhs) {
      lhs += (cplx(t.c0, 0.0) + cplx(t.c1, 0.0) * delta) * block_of(T, t.x) * block_of(T, t.y);
    }
    const MatrixC rhs =
        block_of(T, eq.p) * block_of(Bt, eq.q) - block_of(Bt, eq.p) * block_of(T, eq.q);
    res[k] = (lhs - rhs).norm();
  }
  return res;
}

std::array<double, 6> quantum_plane_check(const BlockMpo& T, cplx q) {
  const cplx qi = cplx(1.0, 0.0) / q;
  const MatrixC& a = T.a;
  const MatrixC& b = T.b;
  const MatrixC& c = T.c;
  const MatrixC& d = T.d;
  return {
      (a * b - qi * b * a).norm(),
      (a * c - qi * c * a).norm(),
      (b * d - qi * d * b).norm(),
      (c * d - qi * d * c).norm(),
      (b * c - c * b).norm(),
      ((a * d - d * a) - (q - qi) * b * c).norm(),
  };
}

std::pair<BlockMpo, BlockMpo> build_xxz_mpo_solution(index_t n, cplx q) {
  if (n < 2) throw DimensionError("the clock/shift witness needs virtual dimension >= 2");
  BlockMpo T;
  T.a = MatrixC::Zero(n, n);
  T.d = MatrixC::Zero(n, n);
  T.b = MatrixC::Zero(n, n);
  T.c = MatrixC::Zero(n, n);
  cplx qp(1.0, 0.0), qm(1.0, 0.0);
  for (index_t i = 0; i < n; ++i) {
    T.a(i, i) = qp;
    T.d(i, i) = qm;
    qp *= q;
    qm /= q;
  }
  for (index_t i = 0; i + 1 < n; ++i) T.b(i, i + 1) = 1.0;

  BlockMpo Bt;
  Bt.a = MatrixC::Zero(n, n);
  Bt.c = MatrixC::Zero(n, n);
  Bt.d = MatrixC::Zero(n, n);
  Bt.b = (cplx(1.0, 0.0) / q - q) * T.b;
  return {std::move(T), std::move(Bt)};
}

localsolve::LocalOperator doubled_two_site(const MatrixC& X, const MatrixC& Y, index_t d) {
  const index_t d2 = d * d;
  if (X.rows() != d2 || X.cols() != d2 || Y.rows() != d2 || Y.cols() != d2) {
    throw DimensionError("doubled_two_site expects two-site operators of size d^2");
  }
  const index_t dd = d2 * d2;
  MatrixC out = MatrixC::Zero(dd, dd);
  for (index_t i1 = 0; i1 < d; ++i1)
    for (index_t k1 = 0; k1 < d; ++k1)
      for (index_t i2 = 0; i2 < d; ++i2)
        for (index_t k2 = 0; k2 < d; ++k2) {
          const index_t row = ((i1 * d + k1) * d + i2) * d + k2;
          for (index_t i1p = 0; i1p < d; ++i1p)
            for (index_t k1p = 0; k1p < d; ++k1p)
              for (index_t i2p = 0; i2p < d; ++i2p)
                for (index_t k2p = 0; k2p < d; ++k2p) {
                  const index_t col = ((i1p * d + k1p) * d + i2p) * d + k2p;
                  out(row, col) =
                      X(i1 * d + i2, i1p * d + i2p) * Y(k1p * d + k2p, k1 * d + k2);
                }
        }
  return localsolve::LocalOperator(2, d2, std::move(out));
}

localsolve::LocalOperator weak_symmetry_operator(const localsolve::LocalOperator& G) {
  if (G.w != 2) throw DimensionError("symmetry generator must act on two sites");
  const MatrixC id = MatrixC::Identity(G.mat.rows(), G.mat.cols());
  MatrixC out = doubled_two_site(G.mat, id, G.d).mat - doubled_two_site(id, G.mat, G.d).mat;
  return localsolve::LocalOperator(2, G.d * G.d, std::move(out));
}

localsolve::LocalOperator strong_symmetry_operator(const localsolve::LocalOperator& G) {
  if (G.w != 2) throw DimensionError("symmetry generator must act on two sites");
  const MatrixC id = MatrixC::Identity(G.mat.rows(), G.mat.cols());
  return doubled_two_site(G.mat, id, G.d);
}

localsolve::TelescopicSolution mpo_symmetry_solve(const DenseTensor& T,
                                                  const localsolve::LocalOperator& h,
                                                  const localsolve::SolveOptions& opts) {
  const mps::UniformMps m = mps::vectorize_mpo(T);
  if (T.shape()[1] != h.d || T.shape()[2] != h.d) {
    throw DimensionError("MPO physical dimensions must match the Hamiltonian term");
  }
  return localsolve::solve(m, weak_symmetry_operator(h), cplx(0.0, 0.0), opts);
}

localsolve::TelescopicSolution lindblad_steady_solve(const localsolve::LocalOperator& lsuper,
                                                     const DenseTensor& T,
                                                     const localsolve::SolveOptions& opts) {
  const mps::UniformMps m = mps::vectorize_mpo(T);
  if (lsuper.d != m.phys_dim()) {
    throw DimensionError("superoperator site dimension must equal the squared MPDO dimension");
  }
  return localsolve::solve(m, lsuper, cplx(0.0, 0.0), opts);
}

ZeroSumDecomposition zero_sum_decompose(const localsolve::LocalOperator& O,
                                        const localsolve::SolveOptions& opts) {
  if (O.w != 2) throw DimensionError("zero_sum_decompose expects a two-site operator");
  const index_t d = O.d;

  // vectorized identity MPO: product MPS of vec(Id)
  DenseTensor u({1, d * d, 1});
  for (index_t i = 0; i < d; ++i) u.at({0, i * d + i, 0}) = 1.0;
  const mps::UniformMps m{u};

  const MatrixC id = MatrixC::Identity(d * d, d * d);
  const auto doubled = doubled_two_site(O.mat, id, d);
  const auto sol = localsolve::solve(m, doubled, cplx(0.0, 0.0), opts);

  // O = Q x Id - Id x Q with Q read off the auxiliary tensor
  MatrixC q(d, d);
  for (index_t i = 0; i < d; ++i)
    for (index_t k = 0; k < d; ++k) q(i, k) = -sol.B.at({0, i * d + k, 0});

  ZeroSumDecomposition out;
  out.Q = std::move(q);
  out.residual = sol.residual;
  out.solvable = sol.solvable;
  return out;
}

localsolve::TelescopicSolution schrodinger_residual(const mps::UniformMps& m,
                                                    const DenseTensor& dA,
                                                    const localsolve::LocalOperator& h,
                                                    const localsolve::SolveOptions& opts) {
  if (h.w != 2 || h.d != m.phys_dim()) {
    throw DimensionError("schrodinger_residual expects a two-site term matching the MPS");
  }
  if (dA.shape() != m.A.shape()) throw DimensionError("dA must have the shape of the site tensor");

  const auto inj = mps::injectivity_length(m, 1, opts.tol);
  if (!inj.injective) {
    throw RankDeficiencyError("schrodinger_residual requires injectivity at length one",
                              inj.ranks.empty() ? 0 : inj.ranks.front());
  }

  const DenseTensor ainv = mps::left_inverse(m, 1, opts.tol);
  const DenseTensor od = contract(dA, ainv, {{0, 0}, {2, 2}});  // (d, d)
  const MatrixC o_deriv = od.as_matrix(1);

  const MatrixC id = MatrixC::Identity(m.phys_dim(), m.phys_dim());
  MatrixC k = h.mat - cplx(0.0, 1.0) * kron(o_deriv, id);
  return localsolve::solve(m, localsolve::LocalOperator(2, m.phys_dim(), std::move(k)),
                           cplx(0.0, 0.0), opts);
}

}  // namespace eigenlocal::apps
