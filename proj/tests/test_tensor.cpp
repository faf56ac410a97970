#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eigenlocal/tensor.hpp"
#include "test_helpers.hpp"

using namespace eigenlocal;
using testutil::Rng;

namespace {

/// Independent nested-loop contraction used as ground truth.
DenseTensor contract_reference(const DenseTensor& a, const DenseTensor& b,
                               const std::vector<std::pair<index_t, index_t>>& pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (auto [x, y] : pairs) {
    used_a[x] = true;
    used_b[y] = true;
  }
  std::vector<index_t> free_a, free_b;
  for (index_t k = 0; k < a.rank(); ++k)
    if (!used_a[k]) free_a.push_back(k);
  for (index_t k = 0; k < b.rank(); ++k)
    if (!used_b[k]) free_b.push_back(k);

  std::vector<index_t> out_shape;
  for (index_t k : free_a) out_shape.push_back(a.shape()[k]);
  for (index_t k : free_b) out_shape.push_back(b.shape()[k]);
  DenseTensor out(out_shape.empty() ? std::vector<index_t>{} : out_shape);

  std::vector<index_t> cont_dims;
  for (auto [x, y] : pairs) cont_dims.push_back(a.shape()[x]);
  index_t cont_total = 1;
  for (index_t cd : cont_dims) cont_total *= cd;

  const index_t out_total = out.size();
  std::vector<index_t> oidx(out_shape.size(), 0);
  for (index_t flat = 0; flat < out_total; ++flat) {
    // decode output index
    {
      index_t rem = flat;
      for (index_t k = static_cast<index_t>(out_shape.size()) - 1; k >= 0; --k) {
        oidx[k] = rem % out_shape[k];
        rem /= out_shape[k];
      }
    }
    cplx acc(0.0, 0.0);
    for (index_t c = 0; c < cont_total; ++c) {
      std::vector<index_t> ia(a.rank()), ib(b.rank());
      for (std::size_t k = 0; k < free_a.size(); ++k) ia[free_a[k]] = oidx[k];
      for (std::size_t k = 0; k < free_b.size(); ++k) ib[free_b[k]] = oidx[free_a.size() + k];
      index_t rem = c;
      for (index_t k = static_cast<index_t>(pairs.size()) - 1; k >= 0; --k) {
        const index_t v = rem % cont_dims[k];
        rem /= cont_dims[k];
        ia[pairs[k].first] = v;
        ib[pairs[k].second] = v;
      }
      acc += a.at(ia) * b.at(ib);
    }
    out.data()[flat] = acc;
  }
  return out;
}

double rel_err(const DenseTensor& x, const DenseTensor& y) {
  return frobenius_norm(x - y) / (frobenius_norm(y) + 1e-300);
}

}  // namespace

TEST_CASE("identity contraction returns the vector") {
  DenseTensor id({2, 2});
  id.at({0, 0}) = 1.0;
  id.at({1, 1}) = 1.0;
  DenseTensor v({2}, {cplx(0.3, 1.0), cplx(-2.0, 0.5)});
  const DenseTensor r = contract(id, v, {{1, 0}});
  REQUIRE(r.shape() == std::vector<index_t>{2});
  CHECK(r.data()[0] == v.data()[0]);
  CHECK(r.data()[1] == v.data()[1]);
}

TEST_CASE("matrix product matches a triple loop") {
  Rng rng(11);
  const DenseTensor a = rng.tensor({2, 3});
  const DenseTensor b = rng.tensor({3, 4});
  const DenseTensor c = contract(a, b, {{1, 0}});
  REQUIRE(c.shape() == std::vector<index_t>{2, 4});
  for (index_t i = 0; i < 2; ++i) {
    for (index_t j = 0; j < 4; ++j) {
      cplx acc(0, 0);
      for (index_t k = 0; k < 3; ++k) acc += a.at({i, k}) * b.at({k, j});
      CHECK(std::abs(c.at({i, j}) - acc) < 1e-13);
    }
  }
}

TEST_CASE("full contraction against the conjugate is a nonnegative norm") {
  Rng rng(12);
  const DenseTensor v = rng.tensor({5});
  const DenseTensor r = contract(conjugate(v), v, {{0, 0}});
  REQUIRE(r.rank() == 0);
  REQUIRE(r.size() == 1);
  CHECK(r.data()[0].real() > 0.0);
  CHECK(std::abs(r.data()[0].imag()) < 1e-14);
}

TEST_CASE("contract matches the loop oracle on random instances") {
  Rng rng(13);
  std::mt19937_64 shape_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const index_t ra = 1 + shape_rng() % 3;
    const index_t rb = 1 + shape_rng() % 3;
    std::vector<index_t> sa, sb;
    for (index_t k = 0; k < ra; ++k) sa.push_back(1 + shape_rng() % 4);
    for (index_t k = 0; k < rb; ++k) sb.push_back(1 + shape_rng() % 4);
    // pair a random prefix of axes, forcing equal lengths
    const index_t np = shape_rng() % (std::min(ra, rb) + 1);
    std::vector<std::pair<index_t, index_t>> pairs;
    for (index_t k = 0; k < np; ++k) {
      sb[k] = sa[k];
      pairs.push_back({k, k});
    }
    const DenseTensor a = rng.tensor(sa);
    const DenseTensor b = rng.tensor(sb);
    const DenseTensor fast = contract(a, b, pairs);
    const DenseTensor slow = contract_reference(a, b, pairs);
    CHECK(rel_err(fast, slow) < 1e-12);
  }
}

TEST_CASE("contraction order independence on random triples") {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseTensor a = rng.tensor({3, 4});
    const DenseTensor b = rng.tensor({4, 5});
    const DenseTensor c = rng.tensor({5, 2});
    const DenseTensor left = contract(contract(a, b, {{1, 0}}), c, {{1, 0}});
    const DenseTensor right = contract(a, contract(b, c, {{1, 0}}), {{1, 0}});
    CHECK(rel_err(left, right) < 1e-10);
  }
}

TEST_CASE("permute inverse is bit-exact") {
  Rng rng(15);
  const DenseTensor a = rng.tensor({2, 3, 4});
  const DenseTensor p = permute(a, {2, 0, 1});
  REQUIRE(p.shape() == std::vector<index_t>{4, 2, 3});
  const DenseTensor back = permute(p, {1, 2, 0});
  REQUIRE(back.shape() == a.shape());
  for (index_t i = 0; i < a.size(); ++i) {
    CHECK(back.data()[i] == a.data()[i]);  // bit-exact
  }
}

TEST_CASE("reshape round trip is the identity") {
  Rng rng(16);
  const DenseTensor a = rng.tensor({2, 3});
  const DenseTensor flat = reshape(a, {6});
  const DenseTensor back = reshape(flat, {2, 3});
  for (index_t i = 0; i < a.size(); ++i) CHECK(back.data()[i] == a.data()[i]);
}

TEST_CASE("contraction errors name both axes") {
  Rng rng(17);
  const DenseTensor a = rng.tensor({2, 3});
  const DenseTensor b = rng.tensor({4, 2});
  CHECK_THROWS_AS(contract(a, b, {{1, 0}}), DimensionError);
  try {
    contract(a, b, {{1, 0}});
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("axis 1") != std::string::npos);
    CHECK(msg.find("axis 0") != std::string::npos);
  }
  CHECK_THROWS_AS(contract(a, b, {{0, 1}, {0, 0}}), DimensionError);  // not disjoint
}

TEST_CASE("invalid permutation and reshape are rejected") {
  Rng rng(18);
  const DenseTensor a = rng.tensor({2, 3});
  CHECK_THROWS_AS(permute(a, {0, 0}), DimensionError);
  CHECK_THROWS_AS(permute(a, {0, 2}), DimensionError);
  CHECK_THROWS_AS(reshape(a, {7}), DimensionError);
}
