#include "eigenlocal/peps2d.hpp"

#include <cmath>

namespace eigenlocal::peps2d {

namespace {

DenseTensor matrix_tensor(const MatrixC& m) {
  return DenseTensor::from_matrix(m, {m.rows(), m.cols()});
}

/// Row of two site tensors with an optional matrix on the internal
/// horizontal bond; axes (L, U0, D0, P0, R, U1, D1, P1).
DenseTensor double_row(const DenseTensor& A, const MatrixC* h) {
  DenseTensor left = A;
  if (h != nullptr) {
    // attach the insertion to the right leg
    DenseTensor t = contract(A, matrix_tensor(*h), {{1, 0}});  // (l,u,d,p,hcol)
    left = permute(t, {0, 4, 1, 2, 3});
  }
  return contract(left, A, {{1, 0}});
}

index_t int_pow(index_t b, index_t e) {
  index_t p = 1;
  for (index_t i = 0; i < e; ++i) p *= b;
  return p;
}

}  // namespace

void validate_square(const DenseTensor& A) {
  if (A.rank() != 5) {
    throw DimensionError("square PEPS tensor must have rank 5 (l, r, u, d, phys)");
  }
  if (A.shape()[0] != A.shape()[1] || A.shape()[2] != A.shape()[3]) {
    throw DimensionError("square PEPS tensor needs matching left/right and up/down bonds");
  }
}

void validate_hex(const DenseTensor& A) {
  if (A.rank() != 4) {
    throw DimensionError("hexagonal tensor must have rank 4 (leg1, leg2, leg3, phys)");
  }
}

DenseTensor plaquette_patch(const DenseTensor& A, const MatrixC* h0, const MatrixC* h1,
                            const MatrixC* v0, const MatrixC* v1) {
  validate_square(A);
  const index_t dv = A.shape()[2];

  const DenseTensor row0 = double_row(A, h0);  // (L0,U00,D00,P00,R0,U01,D01,P01)
  DenseTensor row1 = double_row(A, h1);        // (L1,U10,D10,P10,R1,U11,D11,P11)

  const MatrixC id = MatrixC::Identity(dv, dv);
  const MatrixC& m0 = v0 != nullptr ? *v0 : id;
  const MatrixC& m1 = v1 != nullptr ? *v1 : id;
  // feed the column insertions into the up legs of row 1
  row1 = contract(matrix_tensor(m0), row1, {{1, 1}});  // (V0,L1,D10,P10,R1,U11,D11,P11)
  row1 = contract(matrix_tensor(m1), row1, {{1, 5}});  // (V1,V0,L1,D10,P10,R1,D11,P11)

  // D00 - V0, D01 - V1
  DenseTensor patch = contract(row0, row1, {{2, 1}, {6, 0}});
  // (L0,U0,P00,R0,U1,P01, L1,D0,P10,R1,D1,P11)
  patch = permute(patch, {0, 6, 3, 9, 1, 4, 7, 10, 2, 5, 8, 11});
  const auto& s = patch.shape();
  return reshape(patch, {s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7],
                         s[8] * s[9] * s[10] * s[11]});
}

namespace {

DenseTensor apply_plaquette_op(const MatrixC& op, const DenseTensor& patch) {
  // physical index is the last axis
  MatrixC res = patch.as_matrix(8) * op.transpose();
  return DenseTensor::from_matrix(res, patch.shape());
}

DenseTensor insertion_difference(const DenseTensor& A, const MatrixC& X, const MatrixC& Y) {
  const DenseTensor xr0 = plaquette_patch(A, &X, nullptr, nullptr, nullptr);
  const DenseTensor xr1 = plaquette_patch(A, nullptr, &X, nullptr, nullptr);
  const DenseTensor yc0 = plaquette_patch(A, nullptr, nullptr, &Y, nullptr);
  const DenseTensor yc1 = plaquette_patch(A, nullptr, nullptr, nullptr, &Y);
  return xr0 - xr1 + yc0 - yc1;
}

}  // namespace

double plaquette_identity_residual(const DenseTensor& A, const localsolve::LocalOperator& O,
                                   cplx eps, const MatrixC& X, const MatrixC& Y) {
  validate_square(A);
  if (O.w != 4 || O.d != A.shape()[4]) {
    throw DimensionError("plaquette operator must act on four sites of the PEPS dimension");
  }
  const DenseTensor patch = plaquette_patch(A);
  const MatrixC shifted = O.mat - eps * MatrixC::Identity(O.mat.rows(), O.mat.cols());
  const DenseTensor lhs = apply_plaquette_op(shifted, patch);
  return frobenius_norm(lhs - insertion_difference(A, X, Y));
}

PlaquetteSolution solve_plaquette(const DenseTensor& A, const localsolve::LocalOperator& O,
                                  const localsolve::SolveOptions& opts) {
  validate_square(A);
  if (O.w != 4 || O.d != A.shape()[4]) {
    throw DimensionError("plaquette operator must act on four sites of the PEPS dimension");
  }
  const index_t dh = A.shape()[0];
  const index_t dv = A.shape()[2];
  const index_t nx = dh * dh;
  const index_t ny = dv * dv;

  const DenseTensor patch = plaquette_patch(A);
  const DenseTensor o_patch = apply_plaquette_op(O.mat, patch);
  const index_t rows = patch.size();

  MatrixC M(rows, nx + ny + 1);
  MatrixC basis_h = MatrixC::Zero(dh, dh);
  for (index_t c = 0; c < nx; ++c) {
    basis_h(c / dh, c % dh) = 1.0;
    const DenseTensor diff = plaquette_patch(A, &basis_h, nullptr, nullptr, nullptr) -
                             plaquette_patch(A, nullptr, &basis_h, nullptr, nullptr);
    basis_h(c / dh, c % dh) = 0.0;
    for (index_t r = 0; r < rows; ++r) M(r, c) = diff.data()[r];
  }
  MatrixC basis_v = MatrixC::Zero(dv, dv);
  for (index_t c = 0; c < ny; ++c) {
    basis_v(c / dv, c % dv) = 1.0;
    const DenseTensor diff = plaquette_patch(A, nullptr, nullptr, &basis_v, nullptr) -
                             plaquette_patch(A, nullptr, nullptr, nullptr, &basis_v);
    basis_v(c / dv, c % dv) = 0.0;
    for (index_t r = 0; r < rows; ++r) M(r, nx + c) = diff.data()[r];
  }
  VectorC y(rows);
  for (index_t r = 0; r < rows; ++r) {
    M(r, nx + ny) = patch.data()[r];
    y(r) = o_patch.data()[r];
  }

  const auto rep = linalg::least_squares(M, y, opts.tol);

  PlaquetteSolution sol;
  sol.X = Eigen::Map<const MatrixC>(rep.solution.data(), dh, dh);
  sol.Y = Eigen::Map<const MatrixC>(rep.solution.data() + nx, dv, dv);
  sol.epsilon_per_site = rep.solution(nx + ny);
  sol.residual = rep.residual_norm / (frobenius_norm(o_patch) + 1.0);
  sol.solvable = sol.residual < opts.solvable_threshold;
  sol.nullspace_dim =
      static_cast<index_t>(linalg::nullspace_basis(M.leftCols(nx + ny), opts.tol).size());
  return sol;
}

namespace {

/// Dense torus state by row-wise contraction; site (y, x) fused row-major.
VectorC torus_state(const DenseTensor& A, index_t nx, index_t ny, index_t size_cap) {
  const index_t d = A.shape()[4];
  const index_t dv = A.shape()[2];
  index_t total = 1;
  for (index_t i = 0; i < nx * ny; ++i) {
    if (total > size_cap / d) {
      throw SizeCapError("torus state would exceed the size cap of " +
                         std::to_string(size_cap) + " entries");
    }
    total *= d;
  }

  // horizontal ring of nx tensors: chain (l, r, {u,d,p} per site), then trace
  DenseTensor chain = A;  // (l, r, u, d, p)
  for (index_t k = 1; k < nx; ++k) {
    DenseTensor next = contract(chain, A, {{1, 0}});
    // free chain axes: l, sites...; free A: r, u, d, p -> move r back to slot 1
    const index_t ra = 1 + 3 * k;
    std::vector<index_t> perm{0, ra};
    for (index_t ax = 1; ax < ra; ++ax) perm.push_back(ax);
    perm.push_back(ra + 1);
    perm.push_back(ra + 2);
    perm.push_back(ra + 3);
    chain = permute(next, perm);
  }
  // trace l with r
  const index_t dl = chain.shape()[0];
  std::vector<index_t> ring_shape(chain.shape().begin() + 2, chain.shape().end());
  DenseTensor ring(ring_shape);
  {
    const index_t inner = shape_product(ring_shape);
    for (index_t a = 0; a < dl; ++a) {
      const index_t base = (a * dl + a) * inner;
      for (index_t i = 0; i < inner; ++i) ring.data()[i] += chain.data()[base + i];
    }
  }
  // group (u vec, d vec, p vec)
  std::vector<index_t> perm;
  for (index_t k = 0; k < nx; ++k) perm.push_back(3 * k);
  for (index_t k = 0; k < nx; ++k) perm.push_back(3 * k + 1);
  for (index_t k = 0; k < nx; ++k) perm.push_back(3 * k + 2);
  const DenseTensor grouped = permute(ring, perm);
  const index_t bond_block = int_pow(dv, nx);
  const index_t phys_block = int_pow(d, nx);
  const DenseTensor rowt = reshape(grouped, {bond_block, bond_block, phys_block});

  // stack rows: psi[p_0..p_{ny-1}] = Tr(M[p_0] ... M[p_{ny-1}])
  std::vector<MatrixC> row_mats(static_cast<std::size_t>(phys_block));
  for (index_t p = 0; p < phys_block; ++p) {
    MatrixC m(bond_block, bond_block);
    for (index_t u = 0; u < bond_block; ++u)
      for (index_t dn = 0; dn < bond_block; ++dn) m(u, dn) = rowt.at({u, dn, p});
    row_mats[static_cast<std::size_t>(p)] = std::move(m);
  }

  std::vector<MatrixC> acc = row_mats;
  for (index_t y = 1; y < ny; ++y) {
    std::vector<MatrixC> next(acc.size() * row_mats.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < row_mats.size(); ++j)
        next[i * row_mats.size() + j] = acc[i] * row_mats[j];
    acc = std::move(next);
  }
  VectorC psi(static_cast<index_t>(acc.size()));
  for (std::size_t i = 0; i < acc.size(); ++i) psi(static_cast<index_t>(i)) = acc[i].trace();
  return psi;
}

}  // namespace

oracle::RingReport torus_eigencheck(const DenseTensor& A, const localsolve::LocalOperator& O,
                                    cplx eps_per_site, index_t nx, index_t ny, double tol,
                                    index_t size_cap) {
  validate_square(A);
  if (O.w != 4 || O.d != A.shape()[4]) {
    throw DimensionError("plaquette operator must act on four sites of the PEPS dimension");
  }
  if (nx < 2 || ny < 2) throw DimensionError("torus needs at least 2x2 sites");
  const index_t n_sites = nx * ny;
  const VectorC psi = torus_state(A, nx, ny, size_cap);
  const double norm = psi.norm();
  if (norm == 0.0) throw DimensionError("torus state vanishes");

  VectorC acc = -cplx(static_cast<double>(n_sites), 0.0) * eps_per_site * psi;
  for (index_t y = 0; y < ny; ++y) {
    for (index_t x = 0; x < nx; ++x) {
      const index_t xr = (x + 1) % nx;
      const index_t yd = (y + 1) % ny;
      const std::array<index_t, 4> sites = {y * nx + x, y * nx + xr, yd * nx + x, yd * nx + xr};
      acc += oracle::apply_at_sites(O.mat, sites, n_sites, O.d, psi);
    }
  }

  oracle::RingReport rep;
  rep.n_sites = n_sites;
  rep.state_norm = norm;
  rep.eigen_residual = acc.norm() / norm;
  rep.passed = rep.eigen_residual < tol;
  return rep;
}

namespace {

/// Two-site patch joining leg o of the first tensor to leg o of the second;
/// axes: (first other legs ascending, second other legs ascending, fused
/// physical p1 p2).
DenseTensor hex_pair_patch(const DenseTensor& t1, const DenseTensor& t2, index_t o) {
  DenseTensor p = contract(t1, t2, {{o, o}});
  // free t1: two legs + phys, free t2: same
  p = permute(p, {0, 1, 3, 4, 2, 5});
  const auto& s = p.shape();
  return reshape(p, {s[0], s[1], s[2], s[3], s[4] * s[5]});
}

DenseTensor hex_apply(const MatrixC& op, const DenseTensor& patch) {
  MatrixC res = patch.as_matrix(4) * op.transpose();
  return DenseTensor::from_matrix(res, patch.shape());
}

}  // namespace

HexCheckResult hex_sufficient_check(const DenseTensor& A1, const DenseTensor& A2,
                                    const localsolve::LocalOperator& h, const DenseTensor& R,
                                    const DenseTensor& B, const std::array<cplx, 3>& r,
                                    const std::array<cplx, 3>& b, double tol) {
  validate_hex(A1);
  validate_hex(A2);
  validate_hex(R);
  validate_hex(B);
  if (A1.shape() != B.shape()) throw DimensionError("B must have the shape of A1");
  if (A2.shape() != R.shape()) throw DimensionError("R must have the shape of A2");
  if (h.w != 2 || h.d != A1.shape()[3] || h.d != A2.shape()[3]) {
    throw DimensionError("h must be a two-site operator of the hex physical dimension");
  }

  HexCheckResult out;
  for (index_t o = 0; o < 3; ++o) {
    if (A1.shape()[o] != A2.shape()[o]) {
      throw DimensionError("leg " + std::to_string(o + 1) + " bond mismatch between A1 and A2");
    }
    const DenseTensor lhs = hex_apply(h.mat, hex_pair_patch(A1, A2, o));
    const DenseTensor rhs =
        r[static_cast<std::size_t>(o)] * hex_pair_patch(A1, R, o) +
        b[static_cast<std::size_t>(o)] * hex_pair_patch(B, A2, o);
    out.identity_residuals[static_cast<std::size_t>(o)] = frobenius_norm(lhs - rhs);
  }
  out.constraint_residuals[0] = std::abs(r[0] + r[1] + r[2]);
  out.constraint_residuals[1] = std::abs(b[0] + b[1] + b[2]);
  out.certified = out.identity_residuals[0] < tol && out.identity_residuals[1] < tol &&
                  out.identity_residuals[2] < tol && out.constraint_residuals[0] < tol &&
                  out.constraint_residuals[1] < tol;
  return out;
}

oracle::RingReport hex_torus_eigencheck(const DenseTensor& A1, const DenseTensor& A2,
                                        const localsolve::LocalOperator& h, cplx eps,
                                        index_t cells_m, index_t cells_n, double tol,
                                        index_t size_cap) {
  validate_hex(A1);
  validate_hex(A2);
  const index_t d = A1.shape()[3];
  if (A2.shape()[3] != d) throw DimensionError("A1 and A2 physical dimensions must match");
  if (h.w != 2 || h.d != d) throw DimensionError("h must be a two-site operator of dimension d");
  for (index_t o = 0; o < 3; ++o) {
    if (A1.shape()[o] != A2.shape()[o]) throw DimensionError("A1/A2 bond mismatch");
  }
  if (cells_m < 2 || cells_n < 2) throw DimensionError("periodic patch needs >= 2x2 cells");

  const index_t cells = cells_m * cells_n;
  const index_t n_sites = 2 * cells;
  index_t total = 1;
  for (index_t i = 0; i < n_sites; ++i) {
    if (total > size_cap / d) {
      throw SizeCapError("hex patch state would exceed the size cap");
    }
    total *= d;
  }

  auto cell_id = [&](index_t m, index_t n) { return m * cells_n + n; };
  auto a1_site = [&](index_t m, index_t n) { return 2 * cell_id(m, n); };
  auto a2_site = [&](index_t m, index_t n) { return 2 * cell_id(m, n) + 1; };
  // bond (o, m, n) joins leg o of A1(m, n) with leg o of one A2 neighbor
  auto bond_id = [&](index_t o, index_t m, index_t n) { return (o * cells_m + m) * cells_n + n; };
  const index_t n_bonds = 3 * cells;

  std::vector<index_t> bond_dim(static_cast<std::size_t>(n_bonds));
  for (index_t o = 0; o < 3; ++o)
    for (index_t m = 0; m < cells_m; ++m)
      for (index_t n = 0; n < cells_n; ++n)
        bond_dim[static_cast<std::size_t>(bond_id(o, m, n))] = A1.shape()[o];

  // state by explicit sum over bond assignments
  VectorC psi = VectorC::Zero(total);
  std::vector<index_t> assign(static_cast<std::size_t>(n_bonds), 0);
  std::vector<cplx> site_vec(static_cast<std::size_t>(n_sites * d));
  while (true) {
    for (index_t m = 0; m < cells_m; ++m) {
      for (index_t n = 0; n < cells_n; ++n) {
        const index_t b1 = assign[static_cast<std::size_t>(bond_id(0, m, n))];
        const index_t b2 = assign[static_cast<std::size_t>(bond_id(1, m, n))];
        const index_t b3 = assign[static_cast<std::size_t>(bond_id(2, m, n))];
        for (index_t p = 0; p < d; ++p) {
          site_vec[static_cast<std::size_t>(a1_site(m, n) * d + p)] = A1.at({b1, b2, b3, p});
        }
        const index_t c1 = assign[static_cast<std::size_t>(bond_id(0, m, n))];
        const index_t c2 = assign[static_cast<std::size_t>(bond_id(1, (m + 1) % cells_m, n))];
        const index_t c3 = assign[static_cast<std::size_t>(bond_id(2, m, (n + 1) % cells_n))];
        for (index_t p = 0; p < d; ++p) {
          site_vec[static_cast<std::size_t>(a2_site(m, n) * d + p)] = A2.at({c1, c2, c3, p});
        }
      }
    }
    // accumulate the outer product over sites
    std::vector<index_t> pidx(static_cast<std::size_t>(n_sites), 0);
    for (index_t flat = 0; flat < total; ++flat) {
      cplx prod(1.0, 0.0);
      for (index_t s = 0; s < n_sites; ++s) {
        prod *= site_vec[static_cast<std::size_t>(s * d + pidx[static_cast<std::size_t>(s)])];
        if (prod == cplx(0.0, 0.0)) break;
      }
      psi(flat) += prod;
      for (index_t s = n_sites - 1; s >= 0; --s) {
        if (++pidx[static_cast<std::size_t>(s)] < d) break;
        pidx[static_cast<std::size_t>(s)] = 0;
      }
    }
    // next bond assignment
    index_t k = n_bonds - 1;
    for (; k >= 0; --k) {
      if (++assign[static_cast<std::size_t>(k)] < bond_dim[static_cast<std::size_t>(k)]) break;
      assign[static_cast<std::size_t>(k)] = 0;
    }
    if (k < 0) break;
  }

  const double norm = psi.norm();
  if (norm == 0.0) throw DimensionError("hex patch state vanishes");

  const MatrixC o_b =
      h.mat + (eps / cplx(static_cast<double>(n_bonds), 0.0)) *
                  MatrixC::Identity(h.mat.rows(), h.mat.cols());
  VectorC acc = -eps * psi;
  for (index_t m = 0; m < cells_m; ++m) {
    for (index_t n = 0; n < cells_n; ++n) {
      const std::array<std::array<index_t, 2>, 3> pairs = {{
          {a1_site(m, n), a2_site(m, n)},
          {a1_site(m, n), a2_site((m + cells_m - 1) % cells_m, n)},
          {a1_site(m, n), a2_site(m, (n + cells_n - 1) % cells_n)},
      }};
      for (const auto& pr : pairs) {
        acc += oracle::apply_at_sites(o_b, pr, n_sites, d, psi);
      }
    }
  }

  oracle::RingReport rep;
  rep.n_sites = n_sites;
  rep.state_norm = norm;
  rep.eigen_residual = acc.norm() / norm;
  rep.passed = rep.eigen_residual < tol;
  return rep;
}

}  // namespace eigenlocal::peps2d
