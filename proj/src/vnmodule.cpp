#include "vncorr/vnmodule.hpp"

#include "vncorr/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace vncorr {

CMatrix Representation::apply(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(carrier_dim, carrier_dim);
  for (size_t i = 0; i < images.size(); ++i)
    out += hs_inner(algebra.basis[i], x) * images[i];
  return out;
}

RepresentationValidation validate_representation(const Representation& rep,
                                                 const Tolerance& tol) {
  (void)tol;
  RepresentationValidation v;
  const Index h = rep.carrier_dim;
  v.unital = max_abs(rep.apply(rep.algebra.identity()) - CMatrix::Identity(h, h));
  for (size_t i = 0; i < rep.images.size(); ++i) {
    v.star = std::max(v.star, max_abs(rep.apply(rep.algebra.basis[i].adjoint()) -
                                      rep.images[i].adjoint()));
    for (size_t j = 0; j < rep.images.size(); ++j) {
      CMatrix prod = rep.algebra.basis[i] * rep.algebra.basis[j];
      v.multiplicative = std::max(
          v.multiplicative, max_abs(rep.apply(prod) - rep.images[i] * rep.images[j]));
    }
  }
  return v;
}

ModuleValidation validate_module(const ConcreteModule& e, const Tolerance& tol) {
  ModuleValidation v;
  const Index d = e.dim();
  CMatrix gram(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) gram(i, j) = hs_inner(e.basis[i], e.basis[j]);
  v.gram = max_abs(gram - CMatrix::Identity(d, d));
  for (const auto& x : e.basis) {
    for (const auto& b : e.algebra.basis)
      v.right_action = std::max(v.right_action, span_residual(x * b, e.basis));
    for (const auto& y : e.basis)
      v.inner_products =
          std::max(v.inner_products, span_residual(x.adjoint() * y, e.algebra.basis));
  }
  // rank of the column family {x e_c}
  CMatrix cols(e.carrier_dim, d * e.ambient_dim());
  for (Index i = 0; i < d; ++i)
    cols.middleCols(i * e.ambient_dim(), e.ambient_dim()) = e.basis[i];
  Index rank = 0;
  if (cols.size() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cols * cols.adjoint(),
                                              Eigen::EigenvaluesOnly);
    double smax = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::sqrt(std::max(0.0, es.eigenvalues()(i))) > tol.rank_cutoff_normal(smax))
        ++rank;
  }
  v.nondegeneracy_defect = e.carrier_dim - rank;
  return v;
}

ConcreteModule make_module(const VNAlgebra& b, Index h,
                           const std::vector<CMatrix>& spanning,
                           const Tolerance& tol) {
  const Index g = b.ambient_dim;
  for (const auto& x : spanning)
    if (x.rows() != h || x.cols() != g)
      throw DimensionMismatchError("make_module: spanning shape");

  // One right-action round closes the span: (x b) b' = x (b b') stays inside.
  std::vector<CMatrix> family = spanning;
  for (const auto& x : spanning)
    for (const auto& bb : b.basis) family.push_back(x * bb);
  std::vector<CMatrix> basis = orthonormal_span(family, tol);

  for (const auto& x : basis)
    for (const auto& y : basis) {
      double r = span_residual(x.adjoint() * y, b.basis);
      if (r > 1000 * tol.cutoff(std::max(1.0, max_abs(x.adjoint() * y))))
        throw InnerProductEscapesBError("make_module: inner product escapes B");
    }

  ConcreteModule e{b, h, basis, false};
  ModuleValidation v = validate_module(e, tol);
  if (v.nondegeneracy_defect > 0) {
    // shrink H to span(E C^g), as the generated module is canonical
    const Index d = e.dim();
    CMatrix cols(h, d * g);
    for (Index i = 0; i < d; ++i) cols.middleCols(i * g, g) = e.basis[i];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cols * cols.adjoint());
    double smax = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    std::vector<CVector> kept;
    std::vector<double> values;
    for (Index i = 0; i < h; ++i) {
      double s = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
      if (s > tol.rank_cutoff_normal(smax)) {
        kept.push_back(es.eigenvectors().col(i));
        values.push_back(s);
      }
    }
    canonical_order(kept, values);
    CMatrix w(h, static_cast<Index>(kept.size()));
    for (size_t i = 0; i < kept.size(); ++i) w.col(static_cast<Index>(i)) = kept[i];
    std::vector<CMatrix> shrunk;
    shrunk.reserve(basis.size());
    for (const auto& x : basis) shrunk.push_back(w.adjoint() * x);
    e.basis = orthonormal_span(shrunk, tol);
    e.carrier_dim = w.cols();
    e.carrier_shrunk = true;
    e.carrier_embedding = w;
  }
  return e;
}

Representation commutant_lifting(const ConcreteModule& e, const Tolerance& tol) {
  return commutant_lifting(e, commutant(e.algebra, tol), tol);
}

Representation commutant_lifting(const ConcreteModule& e, const VNAlgebra& b_prime,
                                 const Tolerance& tol) {
  const Index h = e.carrier_dim, g = e.ambient_dim(), d = e.dim();
  CMatrix s(h, d * g);
  for (Index i = 0; i < d; ++i) s.middleCols(i * g, g) = e.basis[i];
  Eigen::LDLT<CMatrix> normal(s * s.adjoint());

  std::vector<CMatrix> images;
  images.reserve(b_prime.basis.size());
  double worst = 0.0;
  for (const auto& bp : b_prime.basis) {
    CMatrix sp(h, d * g);
    for (Index i = 0; i < d; ++i) sp.middleCols(i * g, g) = e.basis[i] * bp;
    // least squares for rho with rho * s = sp
    CMatrix rho = normal.solve(s * sp.adjoint()).adjoint();
    for (Index i = 0; i < d; ++i)
      worst = std::max(worst, max_abs(rho * e.basis[i] - e.basis[i] * bp));
    images.push_back(std::move(rho));
  }
  if (worst > 1000 * tol.cutoff(1.0))
    throw InconsistentSystemError("commutant_lifting: intertwining residual too large");
  return Representation{b_prime, h, images};
}

ConcreteModule intertwiner_module(const VNAlgebra& b, const Representation& rho_prime,
                                  const Tolerance& tol) {
  const Index h = rho_prime.carrier_dim, g = b.ambient_dim;
  if (rho_prime.algebra.ambient_dim != g)
    throw DimensionMismatchError("intertwiner_module: ambient mismatch");
  std::vector<CMatrix> basis = sylvester_nullspace(
      rho_prime.images, rho_prime.algebra.basis, h, g, tol);
  ConcreteModule e{b, h, basis, false};
  ModuleValidation v = validate_module(e, tol);
  if (v.nondegeneracy_defect > 0)
    throw Lemma38ViolationError("intertwiner_module: span(E C^g) is a proper subspace");
  return e;
}

double roundtrip_module_residual(const ConcreteModule& e, const Tolerance& tol) {
  Representation rho = commutant_lifting(e, tol);
  ConcreteModule back = intertwiner_module(e.algebra, rho, tol);
  return module_distance(e, back);
}

double roundtrip_representation_residual(const Representation& rho_prime,
                                         const Tolerance& tol) {
  VNAlgebra b = commutant(rho_prime.algebra, tol);
  ConcreteModule e = intertwiner_module(b, rho_prime, tol);
  // evaluate the recovered lifting on the original basis of B'
  Representation back = commutant_lifting(e, rho_prime.algebra, tol);
  double worst = 0.0;
  for (size_t i = 0; i < rho_prime.images.size(); ++i)
    worst = std::max(worst, max_abs(back.images[i] - rho_prime.images[i]));
  return worst;
}

VNAlgebra adjointable_algebra(const ConcreteModule& e, const Tolerance& tol) {
  Representation rho = commutant_lifting(e, tol);
  VNAlgebra image_algebra{e.carrier_dim, orthonormal_span(rho.images, tol)};
  VNAlgebra ba = commutant(image_algebra, tol);

  std::vector<CMatrix> rank_one;
  rank_one.reserve(e.basis.size() * e.basis.size());
  for (const auto& x : e.basis)
    for (const auto& y : e.basis) rank_one.push_back(x * y.adjoint());
  std::vector<CMatrix> k = orthonormal_span(rank_one, tol);
  if (subspace_distance(ba.basis, k) > 1000 * tol.cutoff(1.0))
    throw std::logic_error("adjointable_algebra: rho'(B')' differs from span{x y*}");
  return ba;
}

RangeIdeal range_ideal(const ConcreteModule& e, const Tolerance& tol) {
  std::vector<CMatrix> products;
  products.reserve(e.basis.size() * e.basis.size());
  for (const auto& x : e.basis)
    for (const auto& y : e.basis) products.push_back(x.adjoint() * y);
  RangeIdeal ideal;
  ideal.basis = orthonormal_span(products, tol);
  for (const auto& s : ideal.basis)
    for (const auto& b : e.algebra.basis) {
      ideal.ideal_residual = std::max(ideal.ideal_residual, span_residual(b * s, ideal.basis));
      ideal.ideal_residual = std::max(ideal.ideal_residual, span_residual(s * b, ideal.basis));
    }
  ideal.full = ideal.basis.size() == e.algebra.basis.size() &&
               subspace_distance(ideal.basis, e.algebra.basis) <= 100 * tol.cutoff(1.0);
  return ideal;
}

namespace {

CMatrix embed_block(const CMatrix& m, Index n, Index row, Index col) {
  CMatrix out = CMatrix::Zero(n, n);
  out.block(row, col, m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

LinkingReport linking_algebra(const ConcreteModule& e, const Tolerance& tol) {
  const Index g = e.ambient_dim(), h = e.carrier_dim, n = g + h;
  VNAlgebra ba = adjointable_algebra(e, tol);

  std::vector<CMatrix> family;
  for (const auto& b : e.algebra.basis) family.push_back(embed_block(b, n, 0, 0));
  for (const auto& x : e.basis) {
    family.push_back(embed_block(x, n, g, 0));
    family.push_back(embed_block(x.adjoint(), n, 0, g));
  }
  for (const auto& a : ba.basis) family.push_back(embed_block(a, n, g, g));

  LinkingReport report;
  report.linking = VNAlgebra{n, orthonormal_span(family, tol)};
  report.linking_commutant = commutant(report.linking, tol);
  report.linking_bicommutant = commutant(report.linking_commutant, tol);

  VNAlgebra bp = commutant(e.algebra, tol);
  Representation rho = commutant_lifting(e, bp, tol);
  std::vector<CMatrix> diag_family;
  for (size_t j = 0; j < bp.basis.size(); ++j) {
    CMatrix d = CMatrix::Zero(n, n);
    d.topLeftCorner(g, g) = bp.basis[j];
    d.bottomRightCorner(h, h) = rho.images[j];
    diag_family.push_back(d);
  }
  report.commutant_match = subspace_distance(report.linking_commutant.basis,
                                             orthonormal_span(diag_family, tol));

  std::vector<CMatrix> corner21, corner11, corner22;
  for (const auto& m : report.linking_bicommutant.basis) {
    CMatrix c21 = m.block(g, 0, h, g);
    CMatrix c11 = m.block(0, 0, g, g);
    CMatrix c22 = m.block(g, g, h, h);
    if (max_abs(c21) > tol.cutoff(1.0)) corner21.push_back(c21);
    if (max_abs(c11) > tol.cutoff(1.0)) corner11.push_back(c11);
    if (max_abs(c22) > tol.cutoff(1.0)) corner22.push_back(c22);
  }
  report.corner_module_match =
      subspace_distance(orthonormal_span(corner21, tol), e.basis);
  report.corner_algebra_match =
      subspace_distance(orthonormal_span(corner11, tol), e.algebra.basis);
  report.corner_adjointable_match =
      subspace_distance(orthonormal_span(corner22, tol), ba.basis);
  return report;
}

ConcreteModule dual_module(const ConcreteModule& e, const Tolerance& tol) {
  VNAlgebra k = adjointable_algebra(e, tol);
  std::vector<CMatrix> spanning;
  spanning.reserve(e.basis.size());
  for (const auto& x : e.basis) spanning.push_back(x.adjoint());
  return make_module(k, e.ambient_dim(), spanning, tol);
}

std::vector<CMatrix> morphism_space(const ConcreteModule& e1, const ConcreteModule& e2,
                                    const Tolerance& tol) {
  if (!algebra_equal(e1.algebra, e2.algebra, tol))
    throw DimensionMismatchError("morphism_space: modules over different algebras");
  VNAlgebra bp = commutant(e1.algebra, tol);
  Representation rho1 = commutant_lifting(e1, bp, tol);
  Representation rho2 = commutant_lifting(e2, bp, tol);
  std::vector<CMatrix> morphisms = sylvester_nullspace(
      rho2.images, rho1.images, e2.carrier_dim, e1.carrier_dim, tol);
  for (const auto& a : morphisms)
    for (const auto& x : e1.basis)
      if (span_residual(a * x, e2.basis) > 1000 * tol.cutoff(1.0))
        throw std::logic_error("morphism_space: composition escapes the target module");
  return morphisms;
}

double module_distance(const ConcreteModule& e1, const ConcreteModule& e2) {
  if (e1.carrier_dim != e2.carrier_dim || e1.ambient_dim() != e2.ambient_dim())
    return 2.0;
  return subspace_distance(e1.basis, e2.basis);
}

Representation random_representation(std::uint64_t seed, const VNAlgebra& d,
                                     Index max_carrier, const Tolerance& tol) {
  BlockStructure bs = block_structure(d, tol);
  const size_t nblocks = bs.blocks.size();
  SeededRng rng(seed);

  std::vector<Index> mult(nblocks, 0);
  Index available = max_carrier;
  for (size_t k = 0; k < nblocks; ++k) {
    Index cap = available / bs.blocks[k].block_dim;
    if (cap <= 0) continue;
    mult[k] = rng.integer(0, cap);
    available -= mult[k] * bs.blocks[k].block_dim;
  }
  bool all_zero = true;
  for (Index m : mult) all_zero = all_zero && (m == 0);
  if (all_zero) {
    size_t pick = static_cast<size_t>(rng.integer(0, static_cast<Index>(nblocks) - 1));
    if (bs.blocks[pick].block_dim > max_carrier) pick = 0;
    mult[pick] = 1;
  }
  Index h = 0;
  for (size_t k = 0; k < nblocks; ++k) h += mult[k] * bs.blocks[k].block_dim;
  CMatrix u = rng.haar_unitary(h);

  std::vector<CMatrix> images;
  images.reserve(d.basis.size());
  for (const auto& b : d.basis) {
    CMatrix pi = CMatrix::Zero(h, h);
    Index offset = 0;
    for (size_t k = 0; k < nblocks; ++k) {
      if (mult[k] == 0) continue;
      const Block& blk = bs.blocks[k];
      CMatrix t = blk.isometry.adjoint() * b * blk.isometry;
      CMatrix c = CMatrix::Zero(blk.block_dim, blk.block_dim);
      for (Index i = 0; i < blk.block_dim; ++i)
        for (Index j = 0; j < blk.block_dim; ++j) {
          Complex acc = 0;
          for (Index s = 0; s < blk.multiplicity; ++s)
            acc += t(i * blk.multiplicity + s, j * blk.multiplicity + s);
          c(i, j) = acc / static_cast<double>(blk.multiplicity);
        }
      for (Index i = 0; i < blk.block_dim; ++i)
        for (Index j = 0; j < blk.block_dim; ++j)
          for (Index s = 0; s < mult[k]; ++s)
            pi(offset + i * mult[k] + s, offset + j * mult[k] + s) = c(i, j);
      offset += blk.block_dim * mult[k];
    }
    images.push_back(u * pi * u.adjoint());
  }
  return Representation{d, h, images};
}

ConcreteModule random_module(std::uint64_t seed, const VNAlgebra& b,
                             Index max_carrier, const Tolerance& tol) {
  VNAlgebra bp = commutant(b, tol);
  Representation rho = random_representation(seed ^ 0x9E3779B97F4A7C15ull, bp,
                                             max_carrier, tol);
  return intertwiner_module(b, rho, tol);
}

}  // namespace vncorr
