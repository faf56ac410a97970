#pragma once

#include <array>

#include "eigenlocal/localsolve.hpp"
#include "eigenlocal/oracle.hpp"
#include "eigenlocal/tensor.hpp"

namespace eigenlocal::peps2d {

/// Square-lattice PEPS site tensor: axes (left, right, up, down, physical);
/// left/right and up/down bond dimensions must each match.
void validate_square(const DenseTensor& A);

/// Hexagonal-lattice trivalent tensor: axes (leg1, leg2, leg3, physical).
void validate_hex(const DenseTensor& A);

/// Open 2x2 patch of four site tensors with optional matrices inserted on
/// the two horizontal internal bonds (row 0, row 1) and the two vertical
/// internal bonds (column 0, column 1). Result axes:
/// (L0, L1, R0, R1, U0, U1, D0, D1, fused physical d^4), sites fused
/// row-major: (0,0), (0,1), (1,0), (1,1).
DenseTensor plaquette_patch(const DenseTensor& A, const MatrixC* h0 = nullptr,
                            const MatrixC* h1 = nullptr, const MatrixC* v0 = nullptr,
                            const MatrixC* v1 = nullptr);

/// Frobenius norm of (O - eps) patch - [X@row0 - X@row1 + Y@col0 - Y@col1]
/// on the open patch.
double plaquette_identity_residual(const DenseTensor& A, const localsolve::LocalOperator& O,
                                   cplx eps, const MatrixC& X, const MatrixC& Y);

struct PlaquetteSolution {
  MatrixC X;  // horizontal bond insertion
  MatrixC Y;  // vertical bond insertion
  cplx epsilon_per_site{0.0, 0.0};
  double residual = 0.0;
  bool solvable = false;
  index_t nullspace_dim = 0;  // gauge freedom of the (X, Y) insertions
};

PlaquetteSolution solve_plaquette(const DenseTensor& A, const localsolve::LocalOperator& O,
                                  const localsolve::SolveOptions& opts = {});

/// Dense global check on an Nx x Ny torus: residual of
/// sum_plaquettes O_p psi = Nx Ny eps_per_site psi.
oracle::RingReport torus_eigencheck(const DenseTensor& A, const localsolve::LocalOperator& O,
                                    cplx eps_per_site, index_t nx, index_t ny,
                                    double tol = 1e-10,
                                    index_t size_cap = oracle::kDefaultSizeCap);

struct HexCheckResult {
  std::array<double, 3> identity_residuals{};   // one per bond orientation
  std::array<double, 2> constraint_residuals{}; // |r1+r2+r3|, |b1+b2+b3|
  bool certified = false;                       // all five below tolerance
};

/// Sufficient eigenstate condition on the hexagonal lattice: per bond
/// orientation o, h (A1 A2) = r_o (A1 R) + b_o (B A2) on the open two-site
/// patch, together with vanishing coefficient sums.
HexCheckResult hex_sufficient_check(const DenseTensor& A1, const DenseTensor& A2,
                                    const localsolve::LocalOperator& h, const DenseTensor& R,
                                    const DenseTensor& B, const std::array<cplx, 3>& r,
                                    const std::array<cplx, 3>& b, double tol = 1e-10);

/// Dense global check on a periodic patch of cells_m x cells_n unit cells
/// (two sites per cell); h is the shifted bond operator, eps the total target
/// eigenvalue of the unshifted sum.
oracle::RingReport hex_torus_eigencheck(const DenseTensor& A1, const DenseTensor& A2,
                                        const localsolve::LocalOperator& h, cplx eps,
                                        index_t cells_m = 2, index_t cells_n = 2,
                                        double tol = 1e-9,
                                        index_t size_cap = oracle::kDefaultSizeCap);

}  // namespace eigenlocal::peps2d
