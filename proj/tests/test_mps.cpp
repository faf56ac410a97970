#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eigenlocal/mps.hpp"
#include "eigenlocal/oracle.hpp"
#include "test_helpers.hpp"

using namespace eigenlocal;
using namespace eigenlocal::mps;
using testutil::Rng;

namespace {

/// One bottom/top column of the double-layer network:
/// col[bl, tl, br, tr] = sum_p A[bl, p, br] conj(A)[tl, p, tr].
DenseTensor double_layer_column(const UniformMps& m) {
  DenseTensor c = contract(m.A, conjugate(m.A), {{1, 1}});  // (bl, br, tl, tr)
  return permute(c, {0, 2, 1, 3});
}

/// caps[a, g, b, dl] = rho_r(a, g) * rho_l(dl, b)
DenseTensor caps_tensor(const MatrixC& rho_r, const MatrixC& rho_l) {
  const index_t D = rho_r.rows();
  DenseTensor out({D, D, D, D});
  for (index_t a = 0; a < D; ++a)
    for (index_t g = 0; g < D; ++g)
      for (index_t b = 0; b < D; ++b)
        for (index_t dl = 0; dl < D; ++dl) out.at({a, g, b, dl}) = rho_r(a, g) * rho_l(dl, b);
  return out;
}

}  // namespace

TEST_CASE("transfer matrix of a bond-dimension-one tensor") {
  const auto m = testutil::ferro_mps();
  const MatrixC t = transfer_matrix(m);
  REQUIRE(t.rows() == 1);
  CHECK(std::abs(t(0, 0) - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("left-canonical tensor has vec(Id) as left fixed vector") {
  const auto m = testutil::aklt_mps();  // left-canonical by construction
  const MatrixC t = transfer_matrix(m);
  VectorC vid = VectorC::Zero(4);
  vid(0) = 1.0;
  vid(3) = 1.0;
  CHECK((t.adjoint() * vid - vid).norm() < 1e-12);
}

TEST_CASE("transfer matrix action agrees with direct contraction") {
  Rng rng(31);
  const UniformMps m(rng.tensor({2, 2, 2}));
  const MatrixC t = transfer_matrix(m);
  const MatrixC x = rng.matrix(2, 2);
  MatrixC direct = MatrixC::Zero(2, 2);
  for (index_t i = 0; i < 2; ++i) {
    const MatrixC ai = m.site_matrix(i);
    direct += ai * x * ai.adjoint();
  }
  VectorC vx(4);
  vx << x(0, 0), x(0, 1), x(1, 0), x(1, 1);
  const VectorC tv = t * vx;
  CHECK(std::abs(tv(0) - direct(0, 0)) < 1e-13);
  CHECK(std::abs(tv(1) - direct(0, 1)) < 1e-13);
  CHECK(std::abs(tv(2) - direct(1, 0)) < 1e-13);
  CHECK(std::abs(tv(3) - direct(1, 1)) < 1e-13);
}

TEST_CASE("normalize fixes the spectral radius and is idempotent") {
  DenseTensor a({1, 2, 1});
  a.at({0, 0, 0}) = 3.0;
  const auto n = normalize(UniformMps(a));
  CHECK(std::abs(n.A.at({0, 0, 0}) - cplx(1.0, 0.0)) < 1e-12);

  Rng rng(32);
  const UniformMps m(rng.tensor({3, 2, 3}));
  const auto nm = normalize(m);
  CHECK(spectral_radius(nm) == doctest::Approx(1.0).epsilon(1e-10));
  const auto again = normalize(nm);
  CHECK(frobenius_norm(again.A - nm.A) < 1e-12 * frobenius_norm(nm.A));
}

TEST_CASE("fixed points at bond dimension one") {
  const auto fp = fixed_points(normalize(testutil::ferro_mps()));
  CHECK(std::abs(fp.rho_l(0, 0) - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(fp.rho_r(0, 0) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("AKLT left fixed point is proportional to the identity") {
  const auto fp = fixed_points(testutil::aklt_mps());
  const cplx scale = fp.rho_l.trace() / 2.0;
  CHECK((fp.rho_l - scale * MatrixC::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("fixed point invariants on random injective tensors") {
  Rng rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = testutil::random_injective_mps(rng, 2, 3);
    const auto fp = fixed_points(m);
    const MatrixC t = transfer_matrix(m);
    VectorC vr(4), vl(4);
    for (index_t a = 0; a < 2; ++a)
      for (index_t b = 0; b < 2; ++b) {
        vr(a * 2 + b) = fp.rho_r(a, b);
        vl(a * 2 + b) = fp.rho_l(a, b);
      }
    CHECK((t * vr - vr).norm() < 1e-10);
    CHECK((t.adjoint() * vl - vl).norm() < 1e-10);
    CHECK(std::abs((fp.rho_l * fp.rho_r).trace() - cplx(1.0, 0.0)) < 1e-10);
    CHECK((fp.rho_l - fp.rho_l.adjoint()).norm() < 1e-12);
    CHECK((fp.rho_r - fp.rho_r.adjoint()).norm() < 1e-12);
    CHECK(fp.min_eig_l > 1e-10);
    CHECK(fp.min_eig_r > 1e-10);
  }
}

TEST_CASE("degenerate transfer spectrum is reported") {
  CHECK_THROWS_AS(fixed_points(testutil::ghz_mps()), NonInjectivityError);
}

TEST_CASE("injectivity length basics") {
  const auto rep1 = injectivity_length(testutil::ferro_mps(), 3);
  CHECK(rep1.injective);
  CHECK(rep1.length == 1);

  const auto ghz = injectivity_length(testutil::ghz_mps(), 4);
  CHECK_FALSE(ghz.injective);
  REQUIRE(ghz.ranks.size() == 4);
  for (index_t r : ghz.ranks) CHECK(r == 2);  // diagonal products stay rank two

  const auto aklt = injectivity_length(testutil::aklt_mps(), 4);
  CHECK(aklt.injective);
  CHECK(aklt.length == 2);
  REQUIRE(aklt.ranks.size() == 2);
  CHECK(aklt.ranks[0] == 3);
  CHECK(aklt.ranks[1] == 4);
}

TEST_CASE("blocked map ranks are nondecreasing") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const UniformMps m(rng.tensor({2, 2, 2}));
    InjectivityReport rep = injectivity_length(m, 4);
    for (std::size_t k = 1; k < rep.ranks.size(); ++k) {
      CHECK(rep.ranks[k] >= rep.ranks[k - 1]);
      CHECK(rep.ranks[k] <= 4);
    }
  }
}

TEST_CASE("block reproduces matrix products") {
  const auto m = testutil::aklt_mps();
  CHECK(frobenius_norm(block(m, 1) - m.A) == 0.0);

  DenseTensor a({1, 2, 1});
  a.at({0, 0, 0}) = cplx(0.5, 0.0);
  a.at({0, 1, 0}) = cplx(0.0, 2.0);
  const UniformMps prod(a);
  const DenseTensor b2 = block(prod, 2);
  for (index_t i = 0; i < 2; ++i)
    for (index_t j = 0; j < 2; ++j)
      CHECK(std::abs(b2.at({0, i * 2 + j, 0}) - a.at({0, i, 0}) * a.at({0, j, 0})) < 1e-14);

  // blocked chain against explicit three-site matrix products
  Rng rng(35);
  const UniformMps r(rng.tensor({2, 2, 2}));
  const DenseTensor b3 = block(r, 3);
  for (index_t i = 0; i < 2; ++i)
    for (index_t j = 0; j < 2; ++j)
      for (index_t k = 0; k < 2; ++k) {
        const MatrixC prod3 = r.site_matrix(i) * r.site_matrix(j) * r.site_matrix(k);
        for (index_t x = 0; x < 2; ++x)
          for (index_t y = 0; y < 2; ++y)
            CHECK(std::abs(b3.at({x, (i * 2 + j) * 2 + k, y}) - prod3(x, y)) < 1e-12);
      }
}

TEST_CASE("left inverse recontraction gives the double delta") {
  // bond dimension one: conjugate vector over its squared norm
  DenseTensor a({1, 3, 1});
  a.at({0, 0, 0}) = cplx(1.0, 1.0);
  a.at({0, 1, 0}) = cplx(0.0, -2.0);
  a.at({0, 2, 0}) = cplx(0.5, 0.0);
  const UniformMps m1(a);
  const DenseTensor inv1 = left_inverse(m1, 1);
  cplx total(0.0, 0.0);
  for (index_t i = 0; i < 3; ++i) total += inv1.at({0, i, 0}) * a.at({0, i, 0});
  CHECK(std::abs(total - cplx(1.0, 0.0)) < 1e-12);

  // AKLT at blocking length two
  const auto aklt = testutil::aklt_mps();
  const DenseTensor inv2 = left_inverse(aklt, 2);
  const DenseTensor blk2 = block(aklt, 2);
  const DenseTensor check = contract(inv2, blk2, {{1, 1}});  // (g, e, a, b)
  for (index_t g = 0; g < 2; ++g)
    for (index_t e = 0; e < 2; ++e)
      for (index_t x = 0; x < 2; ++x)
        for (index_t y = 0; y < 2; ++y) {
          const cplx want = (g == x && e == y) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          CHECK(std::abs(check.at({g, e, x, y}) - want) < 1e-10);
        }

  // random injective tensor at length one
  Rng rng(36);
  const auto r = testutil::random_injective_mps(rng, 2, 5);
  const DenseTensor invr = left_inverse(r, 1);
  const DenseTensor chk = contract(invr, block(r, 1), {{1, 1}});
  for (index_t g = 0; g < 2; ++g)
    for (index_t e = 0; e < 2; ++e)
      for (index_t x = 0; x < 2; ++x)
        for (index_t y = 0; y < 2; ++y) {
          const cplx want = (g == x && e == y) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          CHECK(std::abs(chk.at({g, e, x, y}) - want) < 1e-12);
        }
}

TEST_CASE("left inverse requires injectivity") {
  try {
    left_inverse(testutil::ghz_mps(), 2);
    FAIL("expected RankDeficiencyError");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.observed_rank == 2);
  }
}

TEST_CASE("inverse-like tensor closes into the fixed-point caps") {
  // bond dimension one: contraction equals rho_r * rho_l = 1
  const auto m1 = normalize(testutil::ferro_mps());
  const DenseTensor x1 = proof_inverse_x(m1, 1);
  const DenseTensor c1 = contract(block(m1, 1), x1, {{1, 1}});
  CHECK(std::abs(c1.at({0, 0, 0, 0}) - cplx(1.0, 0.0)) < 1e-12);

  // AKLT at length two
  const auto aklt = testutil::aklt_mps();
  const auto fp = fixed_points(aklt);
  const DenseTensor x2 = proof_inverse_x(aklt, 2);
  const DenseTensor mid = contract(block(aklt, 2), x2, {{1, 1}});  // (a, b, g, dl)
  const DenseTensor caps = permute(caps_tensor(fp.rho_r, fp.rho_l), {0, 2, 1, 3});
  CHECK(frobenius_norm(mid - caps) < 1e-10);
}

TEST_CASE("inverse-like contraction survives padding with transfer columns") {
  Rng rng(37);
  const auto m = testutil::random_injective_mps(rng, 2, 5);
  const auto fp = fixed_points(m);
  const DenseTensor x = proof_inverse_x(m, 1);
  const DenseTensor mid = contract(block(m, 1), x, {{1, 1}});  // (a, b, g, dl)
  const DenseTensor col = double_layer_column(m);              // (bl, tl, br, tr)

  // one extra physical-contracted column on each side
  DenseTensor left_pad = contract(col, mid, {{2, 0}, {3, 2}});   // (bl, tl, b, dl)
  DenseTensor both = contract(left_pad, col, {{2, 0}, {3, 1}});  // (bl, tl, br, tr)

  const DenseTensor want = caps_tensor(fp.rho_r, fp.rho_l);  // (a, g, b, dl)
  CHECK(frobenius_norm(both - want) < 1e-10);
}

TEST_CASE("vectorized MPO basics") {
  // identity MPO becomes the product state of vec(Id)
  DenseTensor t({1, 2, 2, 1});
  t.at({0, 0, 0, 0}) = 1.0;
  t.at({0, 1, 1, 0}) = 1.0;
  const auto v = vectorize_mpo(t);
  CHECK(v.phys_dim() == 4);
  CHECK(std::abs(v.A.at({0, 0, 0}) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(v.A.at({0, 3, 0}) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(v.A.at({0, 1, 0})) < 1e-15);

  // vectorize then reshape back is the identity
  const DenseTensor back = reshape(v.A, {1, 2, 2, 1});
  CHECK(frobenius_norm(back - t) == 0.0);

  // <<O|O>> as an MPS norm equals Tr(O^dag O) on a ring of four sites
  Rng rng(38);
  const DenseTensor rt = rng.tensor({2, 2, 2, 2});
  const VectorC psi = oracle::mps_state(mps::vectorize_mpo(rt), 4);
  const MatrixC dense = oracle::mpo_dense(rt, 4);
  CHECK(psi.squaredNorm() ==
        doctest::Approx((dense.adjoint() * dense).trace().real()).epsilon(1e-10));
}
