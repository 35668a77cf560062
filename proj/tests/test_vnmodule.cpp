#include "vncorr/vnmodule.hpp"

#include "vncorr/rng.hpp"

#include "doctest.h"

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

VNAlgebra diagonal_algebra_2() {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 2;
  return generate_algebra(2, {d});
}

// B viewed as the module over itself.
ConcreteModule algebra_as_module(const VNAlgebra& b) {
  return make_module(b, b.ambient_dim, b.basis);
}

}  // namespace

TEST_CASE("make_module over M_n always yields B(G, H)") {
  VNAlgebra b = full_matrix_algebra(3);
  // one matrix unit right-closes to the full row module B(C^3, C^1)
  CMatrix unit = CMatrix::Zero(3, 3);
  unit(0, 1) = 1;
  ConcreteModule row = make_module(b, 3, {unit});
  CHECK(row.carrier_shrunk);
  CHECK(row.carrier_dim == 1);
  CHECK(row.dim() == 3);
  CHECK(validate_module(row).pass());
  // the identity closes to all of B(C^3, C^3)
  ConcreteModule full = make_module(b, 3, {CMatrix::Identity(3, 3)});
  CHECK_FALSE(full.carrier_shrunk);
  CHECK(full.dim() == 9);
  CHECK(validate_module(full).pass());
}

TEST_CASE("make_module: a single column over the scalars shrinks the carrier") {
  VNAlgebra b = scalars(1);
  CMatrix col = CMatrix::Zero(4, 1);
  col(2, 0) = 1;
  ConcreteModule e = make_module(b, 4, {col});
  CHECK(e.carrier_shrunk);
  CHECK(e.carrier_dim == 1);
  CHECK(e.dim() == 1);
  CHECK(validate_module(e).pass());
}

TEST_CASE("make_module: identity over the diagonal algebra closes to it") {
  VNAlgebra b = diagonal_algebra_2();
  ConcreteModule e = make_module(b, 2, {CMatrix::Identity(2, 2)});
  CHECK(e.dim() == 2);
  CHECK(validate_module(e).pass());
  CMatrix d = CMatrix::Zero(2, 2);
  d(1, 1) = 7;
  CHECK(in_span(d, e.basis));
}

TEST_CASE("make_module rejects spanning sets whose inner products escape B") {
  SeededRng rng(5);
  VNAlgebra b = scalars(2);
  CMatrix x = rng.gaussian_matrix(2, 2);
  CHECK_THROWS_AS(make_module(b, 2, {x}), InnerProductEscapesBError);
}

TEST_CASE("commutant_lifting on B(C^g, C^h) over the full algebra is scalar") {
  VNAlgebra b = full_matrix_algebra(2);
  SeededRng rng(21);
  std::vector<CMatrix> spanning = {rng.gaussian_matrix(3, 2), rng.gaussian_matrix(3, 2)};
  ConcreteModule e = make_module(b, 3, spanning);
  CHECK(e.dim() == 6);
  Representation rho = commutant_lifting(e);
  CHECK(rho.algebra.dim() == 1);
  CHECK(max_abs(rho.apply(CMatrix::Identity(2, 2)) - CMatrix::Identity(3, 3)) < 1e-9);
  CHECK(validate_representation(rho).pass());
}

TEST_CASE("commutant_lifting of B over itself is the defining action of B'") {
  VNAlgebra b = diagonal_algebra_2();
  ConcreteModule e = algebra_as_module(b);
  Representation rho = commutant_lifting(e);
  for (size_t j = 0; j < rho.images.size(); ++j)
    CHECK(max_abs(rho.images[j] - rho.algebra.basis[j]) < 1e-9);
}

TEST_CASE("intertwiner_module: trivial commutant gives all of B(C^g, C^h)") {
  VNAlgebra b = full_matrix_algebra(2);
  VNAlgebra bp = commutant(b);
  Representation rho{bp, 3, {}};
  for (const auto& c : bp.basis)
    rho.images.push_back(c(0, 0) * CMatrix::Identity(3, 3));
  ConcreteModule e = intertwiner_module(b, rho);
  CHECK(e.dim() == 6);
  CHECK(validate_module(e).pass());
}

TEST_CASE("intertwiner_module of diag(a,b) -> diag(a,b,b) has dimension 3") {
  VNAlgebra b = diagonal_algebra_2();
  VNAlgebra bp = commutant(b);  // the diagonal algebra again
  Representation rho{bp, 3, {}};
  for (const auto& c : bp.basis) {
    CMatrix img = CMatrix::Zero(3, 3);
    img(0, 0) = c(0, 0);
    img(1, 1) = c(1, 1);
    img(2, 2) = c(1, 1);
    rho.images.push_back(img);
  }
  ConcreteModule e = intertwiner_module(b, rho);
  CHECK(e.dim() == 3);
  CHECK(validate_module(e).pass());
}

TEST_CASE("roundtrips are the identity on simple and random instances") {
  CHECK(roundtrip_module_residual(algebra_as_module(diagonal_algebra_2())) < 1e-10);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    VNAlgebra b = random_algebra(seed, 6);
    ConcreteModule e = random_module(seed + 100, b, 8);
    CHECK(validate_module(e).pass());
    CHECK(roundtrip_module_residual(e) < 1e-8);

    VNAlgebra bp = commutant(b);
    Representation rho = random_representation(seed + 200, bp, 8);
    CHECK(validate_representation(rho).pass());
    CHECK(roundtrip_representation_residual(rho) < 1e-8);
  }
}

TEST_CASE("adjointable_algebra of B(C^g, C^h) over M_g is M_h") {
  VNAlgebra b = full_matrix_algebra(2);
  SeededRng rng(22);
  ConcreteModule e = make_module(b, 3, {rng.gaussian_matrix(3, 2), rng.gaussian_matrix(3, 2)});
  VNAlgebra ba = adjointable_algebra(e);
  CHECK(ba.ambient_dim == 3);
  CHECK(ba.dim() == 9);
}

TEST_CASE("adjointable_algebra of B over itself acts by left multiplication") {
  VNAlgebra b = diagonal_algebra_2();
  VNAlgebra ba = adjointable_algebra(algebra_as_module(b));
  CHECK(ba.dim() == b.dim());
  CHECK(algebra_equal(ba, b));
}

TEST_CASE("range_ideal: full for B over B, proper for a corner module") {
  VNAlgebra b = diagonal_algebra_2();
  RangeIdeal full = range_ideal(algebra_as_module(b));
  CHECK(full.full);
  CHECK(full.ideal_residual < 1e-9);

  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1;
  ConcreteModule corner = make_module(b, 2, {p});
  CHECK(corner.carrier_shrunk);
  RangeIdeal proper = range_ideal(corner);
  CHECK_FALSE(proper.full);
  CHECK(proper.basis.size() == 1);
}

TEST_CASE("linking algebra of B over B") {
  VNAlgebra b = diagonal_algebra_2();
  LinkingReport rep = linking_algebra(algebra_as_module(b));
  CHECK(rep.commutant_match < 1e-8);
  CHECK(rep.corner_module_match < 1e-8);
  CHECK(rep.corner_algebra_match < 1e-8);
  CHECK(rep.corner_adjointable_match < 1e-8);
  CHECK(rep.linking_commutant.dim() == commutant(b).dim());
}

TEST_CASE("linking algebra of B(C^g, C^h) has scalar commutant") {
  VNAlgebra b = full_matrix_algebra(2);
  SeededRng rng(23);
  ConcreteModule e = make_module(b, 2, {rng.gaussian_matrix(2, 2)});
  LinkingReport rep = linking_algebra(e);
  CHECK(rep.linking_commutant.dim() == 1);
  CHECK(rep.worst() < 1e-8);
}

TEST_CASE("linking algebra shape on random modules") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    VNAlgebra b = random_algebra(seed * 7 + 3, 5);
    ConcreteModule e = random_module(seed, b, 6);
    LinkingReport rep = linking_algebra(e);
    CHECK(rep.worst() < 1e-8);
  }
}

TEST_CASE("dual_module: (B over B)* is B again") {
  VNAlgebra b = diagonal_algebra_2();
  ConcreteModule dual = dual_module(algebra_as_module(b));
  CHECK(dual.dim() == b.dim());
  CHECK(dual.carrier_dim == b.ambient_dim);
  for (const auto& x : dual.basis) CHECK(in_span(x, b.basis));
}

TEST_CASE("dual_module: B(C^g, C^h)* is B(C^h, C^g) over M_h") {
  VNAlgebra b = full_matrix_algebra(2);
  SeededRng rng(24);
  ConcreteModule e = make_module(b, 3, {rng.gaussian_matrix(3, 2), rng.gaussian_matrix(3, 2)});
  ConcreteModule dual = dual_module(e);
  CHECK(dual.algebra.dim() == 9);
  CHECK(dual.carrier_dim == 2);
  CHECK(dual.dim() == 6);
}

TEST_CASE("dual_module: double dual returns the original module") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    VNAlgebra b = random_algebra(seed * 13 + 5, 5);
    ConcreteModule e = random_module(seed, b, 6);
    if (!range_ideal(e).full) continue;  // double dual recovers E on full modules
    ConcreteModule dd = dual_module(dual_module(e));
    CHECK(module_distance(dd, e) < 1e-8);
  }
}

TEST_CASE("morphism_space: endomorphisms of B over B have dimension dim B") {
  VNAlgebra b = diagonal_algebra_2();
  ConcreteModule e = algebra_as_module(b);
  auto basis = morphism_space(e, e);
  CHECK(basis.size() == static_cast<size_t>(b.dim()));
  // the identity morphism is always present
  bool identity_in_span = in_span(CMatrix::Identity(2, 2), basis);
  CHECK(identity_in_span);
}

TEST_CASE("morphism_space between disjointly supported modules is zero") {
  // over B = C + C, modules supported on different central summands
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 2;
  VNAlgebra b = generate_algebra(2, {d});
  CMatrix p = CMatrix::Zero(2, 2), q = CMatrix::Zero(2, 2);
  p(0, 0) = 1;
  q(1, 1) = 1;
  ConcreteModule e1 = make_module(b, 2, {p});
  ConcreteModule e2 = make_module(b, 2, {q});
  CHECK(morphism_space(e1, e2).empty());
}

TEST_CASE("morphism correspondence matches the direct adjointability count") {
  // dimension of B^a(E1, E2) equals the intertwiner-space dimension
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    VNAlgebra b = random_algebra(seed + 40, 4);
    ConcreteModule e1 = random_module(seed, b, 5);
    ConcreteModule e2 = random_module(seed + 17, b, 5);
    if (e1.carrier_dim * e2.carrier_dim > 36) continue;
    auto morphisms = morphism_space(e1, e2);
    // direct solve: maps a sending E1 into E2 with x*(a y) = (a* x)* y for
    // all x in E2, y in E1, i.e. a E1 inside E2 and a* E2 inside E1.
    std::vector<CMatrix> constraints;
    const Index h1 = e1.carrier_dim, h2 = e2.carrier_dim;
    std::vector<CMatrix> p1 = e1.basis, p2 = e2.basis;
    Index count = 0;
    {
      // brute force over a basis of B(H1, H2)
      std::vector<CMatrix> candidates;
      for (Index r = 0; r < h2; ++r)
        for (Index c = 0; c < h1; ++c) {
          CMatrix u = CMatrix::Zero(h2, h1);
          u(r, c) = 1;
          candidates.push_back(u);
        }
      // build the linear conditions: a maps span(E1) into span(E2) and a*
      // maps span(E2) into span(E1); collect the solution dimension
      const Index n = h1 * h2;
      Index rows = 0;
      for (const auto& x : e1.basis) rows += h2 * e1.ambient_dim();
      for (const auto& x : e2.basis) rows += h1 * e2.ambient_dim();
      CMatrix sys = CMatrix::Zero(rows, n);
      Index at = 0;
      CMatrix proj2 = span_projector(e2.basis);
      CMatrix proj1 = span_projector(e1.basis);
      for (Index k = 0; k < n; ++k) {
        const CMatrix& a = candidates[static_cast<size_t>(k)];
        Index row = 0;
        for (const auto& y : e1.basis) {
          CMatrix image = a * y;
          CVector residual = vec(image) - proj2 * vec(image);
          sys.block(row, k, residual.size(), 1) = residual;
          row += residual.size();
        }
        for (const auto& x : e2.basis) {
          // a* is conjugate-linear in the coefficients of a, so the
          // constraint enters conjugated
          CMatrix image = a.adjoint() * x;
          CVector residual = vec(image) - proj1 * vec(image);
          sys.block(row, k, residual.size(), 1) = residual.conjugate();
          row += residual.size();
        }
        at = row;
      }
      count = static_cast<Index>(nullspace(sys.topRows(at)).size());
    }
    CHECK(static_cast<Index>(morphisms.size()) == count);
  }
}
