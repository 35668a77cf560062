#include "vncorr/algebra.hpp"
#include "vncorr/rng.hpp"

#include "doctest.h"

#include <algorithm>

using namespace vncorr;

namespace {

std::vector<CMatrix> matrix_units(Index n) {
  std::vector<CMatrix> units;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      CMatrix u = CMatrix::Zero(n, n);
      u(i, j) = 1;
      units.push_back(u);
    }
  return units;
}

VNAlgebra full_matrix_algebra(Index n) { return generate_algebra(n, matrix_units(n)); }

VNAlgebra scalars(Index n) { return generate_algebra(n, {}); }

CMatrix diag(std::initializer_list<double> entries) {
  CMatrix d = CMatrix::Zero(static_cast<Index>(entries.size()),
                            static_cast<Index>(entries.size()));
  Index i = 0;
  for (double e : entries) d(i, i) = e, ++i;
  return d;
}

}  // namespace

TEST_CASE("generate: no generators gives the scalars") {
  VNAlgebra a = generate_algebra(3, {});
  CHECK(a.dim() == 1);
  CHECK(validate_algebra(a).pass());
  CHECK(in_span(a.identity(), a.basis));
}

TEST_CASE("generate: matrix units give all of M_2") {
  VNAlgebra a = generate_algebra(2, matrix_units(2));
  CHECK(a.dim() == 4);
  CHECK(validate_algebra(a).pass());
}

TEST_CASE("generate: diag(1,2,2) closes to a two-dimensional diagonal algebra") {
  VNAlgebra a = generate_algebra(3, {diag({1, 2, 2})});
  CHECK(a.dim() == 2);
  CHECK(validate_algebra(a).pass());
  CHECK(in_span(diag({5, -1, -1}), a.basis));
  CHECK_FALSE(in_span(diag({0, 1, 2}), a.basis));
}

TEST_CASE("generate rejects wrongly shaped generators") {
  CHECK_THROWS_AS(generate_algebra(3, {CMatrix::Identity(2, 2)}),
                  DimensionMismatchError);
}

TEST_CASE("commutant: full algebra vs scalars") {
  CHECK(commutant(full_matrix_algebra(3)).dim() == 1);
  CHECK(commutant(scalars(3)).dim() == 9);
}

TEST_CASE("commutant: M_2 tensor 1_3 has commutant 1_2 tensor M_3") {
  std::vector<CMatrix> gens;
  for (const auto& u : matrix_units(2)) gens.push_back(kron(u, CMatrix::Identity(3, 3)));
  VNAlgebra a = generate_algebra(6, gens);
  CHECK(a.dim() == 4);
  VNAlgebra ap = commutant(a);
  CHECK(ap.dim() == 9);
  for (const auto& u : matrix_units(3))
    CHECK(in_span(kron(CMatrix::Identity(2, 2), u), ap.basis));
}

TEST_CASE("center: factor, diagonal algebra, two-block algebra") {
  CHECK(center(full_matrix_algebra(3)).dim() == 1);

  VNAlgebra d3 = generate_algebra(3, {diag({1, 2, 3})});
  CHECK(d3.dim() == 3);
  CHECK(center(d3).dim() == 3);

  // M_2 + M_3 block diagonal in M_5
  std::vector<CMatrix> gens;
  for (const auto& u : matrix_units(2)) {
    CMatrix m = CMatrix::Zero(5, 5);
    m.topLeftCorner(2, 2) = u;
    gens.push_back(m);
  }
  for (const auto& u : matrix_units(3)) {
    CMatrix m = CMatrix::Zero(5, 5);
    m.bottomRightCorner(3, 3) = u;
    gens.push_back(m);
  }
  VNAlgebra a = generate_algebra(5, gens);
  CHECK(a.dim() == 13);
  VNAlgebra z = center(a);
  CHECK(z.dim() == 2);
  CHECK(in_span(diag({1, 1, 0, 0, 0}), z.basis));
}

TEST_CASE("minimal central projections") {
  auto ps = minimal_central_projections(full_matrix_algebra(3));
  REQUIRE(ps.size() == 1);
  CHECK(max_abs(ps[0] - CMatrix::Identity(3, 3)) < 1e-9);

  VNAlgebra d2 = generate_algebra(2, {diag({1, 2})});
  auto qs = minimal_central_projections(d2);
  REQUIRE(qs.size() == 2);
  CMatrix sum = qs[0] + qs[1];
  CHECK(max_abs(sum - CMatrix::Identity(2, 2)) < 1e-9);
  CHECK(max_abs(qs[0] * qs[1]) < 1e-9);
  for (const auto& q : qs) CHECK(max_abs(q * q - q) < 1e-9);
}

TEST_CASE("block_structure: factors and multiples") {
  BlockStructure b1 = block_structure(full_matrix_algebra(3));
  REQUIRE(b1.blocks.size() == 1);
  CHECK(b1.blocks[0].block_dim == 3);
  CHECK(b1.blocks[0].multiplicity == 1);

  BlockStructure b2 = block_structure(scalars(4));
  REQUIRE(b2.blocks.size() == 1);
  CHECK(b2.blocks[0].block_dim == 1);
  CHECK(b2.blocks[0].multiplicity == 4);

  std::vector<CMatrix> gens;
  for (const auto& u : matrix_units(2)) gens.push_back(kron(u, CMatrix::Identity(2, 2)));
  VNAlgebra a = generate_algebra(4, gens);
  BlockStructure b3 = block_structure(a);
  REQUIRE(b3.blocks.size() == 1);
  CHECK(b3.blocks[0].block_dim == 2);
  CHECK(b3.blocks[0].multiplicity == 2);
  // commutant swaps block dims and multiplicities
  BlockStructure b3p = block_structure(commutant(a));
  CHECK(b3p.blocks[0].block_dim == 2);
  CHECK(b3p.blocks[0].multiplicity == 2);
  CHECK(commutant(a).dim() == 4);
}

TEST_CASE("block_structure isometry carries the algebra onto its model") {
  VNAlgebra a = random_algebra(42, 6);
  BlockStructure bs = block_structure(a);
  for (const auto& blk : bs.blocks) {
    CHECK(max_abs(blk.isometry.adjoint() * blk.isometry -
                  CMatrix::Identity(blk.block_dim * blk.multiplicity,
                                    blk.block_dim * blk.multiplicity)) < 1e-9);
  }
  CHECK(bs.algebra_dim() == a.dim());
  CHECK(bs.ambient_dim() == a.ambient_dim);
}

TEST_CASE("random_algebra: budget one gives the scalars on C^1") {
  VNAlgebra a = random_algebra(123, 1);
  CHECK(a.ambient_dim == 1);
  CHECK(a.dim() == 1);
}

TEST_CASE("random_algebra satisfies the invariants for many seeds") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    VNAlgebra a = random_algebra(seed, 8);
    CHECK(a.ambient_dim <= 8);
    CHECK(validate_algebra(a).pass());
  }
}

TEST_CASE("random_algebra is bit-for-bit deterministic per seed") {
  VNAlgebra a = random_algebra(77, 6), b = random_algebra(77, 6);
  REQUIRE(a.dim() == b.dim());
  for (Index i = 0; i < a.dim(); ++i) CHECK(max_abs(a.basis[i] - b.basis[i]) == 0.0);
}

TEST_CASE("bicommutant property and dimension laws on random algebras") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    VNAlgebra a = random_algebra(seed * 31 + 1, 7);
    VNAlgebra ap = commutant(a);
    VNAlgebra app = commutant(ap);
    CHECK(algebra_distance(a, app) < 1e-8);

    BlockStructure bs = block_structure(a);
    Index expected = 0;
    for (const auto& blk : bs.blocks) expected += blk.multiplicity * blk.multiplicity;
    CHECK(ap.dim() == expected);

    // commutant blocks swap (n_k, m_k); compare as multisets
    BlockStructure bsp = block_structure(ap);
    std::vector<std::pair<Index, Index>> lhs, rhs;
    for (const auto& blk : bs.blocks) lhs.emplace_back(blk.multiplicity, blk.block_dim);
    for (const auto& blk : bsp.blocks) rhs.emplace_back(blk.block_dim, blk.multiplicity);
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    CHECK(lhs == rhs);

    CHECK(algebra_distance(center(a), center(ap)) < 1e-8);
    CHECK(center(a).dim() == static_cast<Index>(bs.blocks.size()));

    VNAlgebra regen = generate_algebra(a.ambient_dim, a.basis);
    CHECK(algebra_equal(regen, a));
  }
}
