#include "vncorr/corr.hpp"

#include "vncorr/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace vncorr {

CorrespondenceValidation validate_correspondence(const Correspondence& c,
                                                 const Tolerance& tol) {
  CorrespondenceValidation v;
  v.left_action = validate_representation(c.left_action, tol);
  v.module = validate_module(c.module, tol);
  Representation lift = commutant_lifting(c.module, tol);
  for (const auto& rho_a : c.left_action.images) {
    for (const auto& rho_b : lift.images)
      v.commutation = std::max(v.commutation, max_abs(rho_a * rho_b - rho_b * rho_a));
    for (const auto& x : c.module.basis)
      v.module_action = std::max(v.module_action, span_residual(rho_a * x, c.module.basis));
  }
  return v;
}

Correspondence make_correspondence(const VNAlgebra& a, const ConcreteModule& e,
                                   const Representation& rho, const Tolerance& tol) {
  if (rho.carrier_dim != e.carrier_dim || a.ambient_dim != rho.algebra.ambient_dim)
    throw DimensionMismatchError("make_correspondence: shapes inconsistent");
  Correspondence c{a, rho, e};
  CorrespondenceValidation v = validate_correspondence(c, tol);
  if (v.commutation > 100 * tol.cutoff(1.0))
    throw ActionsDoNotCommuteError("make_correspondence: left action does not commute with the lifting");
  if (v.module_action > 100 * tol.cutoff(1.0))
    throw LeftActionEscapesModuleError("make_correspondence: left action does not preserve the module");
  return c;
}

Correspondence identity_correspondence(const VNAlgebra& b, const Tolerance& tol) {
  ConcreteModule e = make_module(b, b.ambient_dim, b.basis, tol);
  Representation rho{b, b.ambient_dim, b.basis};
  return Correspondence{b, rho, e};
}

Correspondence module_as_correspondence(const ConcreteModule& e, const Tolerance& tol) {
  (void)tol;
  VNAlgebra scalars{1, {CMatrix::Identity(1, 1)}};
  Representation rho{scalars, e.carrier_dim,
                     {CMatrix::Identity(e.carrier_dim, e.carrier_dim)}};
  return Correspondence{scalars, rho, e};
}

Correspondence representation_as_correspondence(const Representation& rho,
                                                const Tolerance& tol) {
  VNAlgebra scalars{1, {CMatrix::Identity(1, 1)}};
  std::vector<CMatrix> columns;
  columns.reserve(static_cast<size_t>(rho.carrier_dim));
  for (Index i = 0; i < rho.carrier_dim; ++i) {
    CMatrix col = CMatrix::Zero(rho.carrier_dim, 1);
    col(i, 0) = 1;
    columns.push_back(col);
  }
  ConcreteModule e = make_module(scalars, rho.carrier_dim, columns, tol);
  return Correspondence{rho.algebra, rho, e};
}

Correspondence commutant_functor(const Correspondence& c, const Tolerance& tol) {
  VNAlgebra bp = commutant(c.module.algebra, tol);
  VNAlgebra ap = commutant(c.left_algebra, tol);
  Representation lift = commutant_lifting(c.module, bp, tol);
  // module part over A': intertwiners of the Stinespring representation
  ConcreteModule eprime = intertwiner_module(ap, c.left_action, tol);
  return Correspondence{bp, lift, eprime};
}

DoubleCommutantReport double_commutant_check(const Correspondence& c,
                                             const Tolerance& tol) {
  Correspondence once = commutant_functor(c, tol);
  Correspondence twice = commutant_functor(once, tol);
  DoubleCommutantReport report;
  report.module_distance = module_distance(twice.module, c.module);
  for (size_t i = 0; i < c.left_algebra.basis.size(); ++i)
    report.left_action_residual = std::max(
        report.left_action_residual,
        max_abs(twice.left_action.apply(c.left_algebra.basis[i]) - c.left_action.images[i]));
  report.left_algebra_distance = algebra_distance(twice.left_algebra, c.left_algebra);
  report.right_algebra_distance = algebra_distance(twice.right_algebra(), c.right_algebra());
  return report;
}

TensorResult tensor(const Correspondence& c1, const Correspondence& c2,
                    const Tolerance& tol) {
  if (!algebra_equal(c1.right_algebra(), c2.left_algebra, tol))
    throw MiddleAlgebraMismatchError("tensor: middle algebras differ");
  const Index d1 = c1.module.dim();
  const Index h2 = c2.carrier_dim();
  const Index m = d1 * h2;

  CMatrix gram(m, m);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) {
      CMatrix inner = c1.module.basis[i].adjoint() * c1.module.basis[j];
      gram.block(i * h2, j * h2, h2, h2) = c2.left_action.apply(inner);
    }
  GramQuotient q = gram_quotient((gram + gram.adjoint()) / 2.0, tol);

  // module spanning maps v -> class(x_i (x) (y_j v))
  const Index l = c2.right_algebra().ambient_dim;
  std::vector<CMatrix> spanning;
  spanning.reserve(static_cast<size_t>(d1) * c2.module.basis.size());
  for (Index i = 0; i < d1; ++i)
    for (const auto& y : c2.module.basis) {
      CMatrix t = CMatrix::Zero(m, l);
      t.middleRows(i * h2, h2) = y;
      spanning.push_back(q.coords * t);
    }
  ConcreteModule mod = make_module(c2.right_algebra(), q.rank, spanning, tol);
  if (mod.carrier_shrunk)
    throw std::logic_error("tensor: quotient carrier unexpectedly shrank");

  // left action of A on the first leg
  CMatrix qpinv = q.coords.adjoint() *
                  (q.coords * q.coords.adjoint()).ldlt().solve(
                      CMatrix::Identity(q.rank, q.rank));
  std::vector<CMatrix> images;
  images.reserve(c1.left_algebra.basis.size());
  for (size_t ai = 0; ai < c1.left_algebra.basis.size(); ++ai) {
    CMatrix gamma(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        gamma(i, j) = hs_inner(c1.module.basis[i],
                               c1.left_action.images[ai] * c1.module.basis[j]);
    images.push_back(q.coords * kron(gamma, CMatrix::Identity(h2, h2)) * qpinv);
  }
  Representation rho{c1.left_algebra, q.rank, images};

  TensorResult result;
  result.corr = Correspondence{c1.left_algebra, rho, mod};
  result.coords = q.coords;
  result.left_module_dim = d1;
  result.right_carrier_dim = h2;
  return result;
}

namespace {

CMatrix coords_pinv(const CMatrix& coords) {
  const Index r = coords.rows();
  return coords.adjoint() *
         (coords * coords.adjoint()).ldlt().solve(CMatrix::Identity(r, r));
}

}  // namespace

CMatrix tensor_descend(const TensorResult& t, const CMatrix& gamma,
                       const Tolerance& tol) {
  (void)tol;
  return t.coords *
         kron(gamma, CMatrix::Identity(t.right_carrier_dim, t.right_carrier_dim)) *
         coords_pinv(t.coords);
}

CMatrix tensor_descend_right(const TensorResult& target, const TensorResult& source,
                             const CMatrix& gamma_left, const CMatrix& action_right,
                             const Tolerance& tol) {
  (void)tol;
  return target.coords * kron(gamma_left, action_right) * coords_pinv(source.coords);
}

DualityReport duality_unitary(const Correspondence& e, const Correspondence& f,
                              const Tolerance& tol) {
  TensorResult t_ef = tensor(e, f, tol);
  Correspondence lhs = commutant_functor(t_ef.corr, tol);
  Correspondence fp = commutant_functor(f, tol);
  Correspondence ep = commutant_functor(e, tol);
  TensorResult t_fe = tensor(fp, ep, tol);

  const Index d_e = e.module.dim();
  const Index d_fp = fp.module.dim();
  const Index g = e.right_algebra().ambient_dim;
  const Index h_f = f.carrier_dim();
  const Index h_e = e.carrier_dim();
  const Index n = d_e * d_fp * g;
  const Index r1 = t_ef.corr.carrier_dim();
  const Index r2 = t_fe.corr.carrier_dim();

  // spanning pairs for the swap x (x) y' (x) g  ->  y' (x) x (x) g
  CMatrix u(r1, n), v(r2, n);
  Index col = 0;
  for (Index i = 0; i < d_e; ++i)
    for (Index j = 0; j < d_fp; ++j)
      for (Index c = 0; c < g; ++c) {
        CVector lhs_formal = CVector::Zero(d_e * h_f);
        lhs_formal.segment(i * h_f, h_f) = fp.module.basis[j].col(c);
        u.col(col) = t_ef.coords * lhs_formal;
        CVector rhs_formal = CVector::Zero(d_fp * h_e);
        rhs_formal.segment(j * h_e, h_e) = e.module.basis[i].col(c);
        v.col(col) = t_fe.coords * rhs_formal;
        ++col;
      }

  DualityReport report;
  {
    CMatrix uu = u * u.adjoint(), vv = v * v.adjoint(), vu = v * u.adjoint();
    double frob2 = uu.squaredNorm() + vv.squaredNorm() - 2.0 * vu.squaredNorm();
    report.gram_match = std::sqrt(std::max(0.0, frob2));
  }
  if (r1 != r2) {
    report.unitarity = 2.0;
    report.mapping = 2.0;
    return report;
  }

  CMatrix w = (v * u.adjoint()) *
              (u * u.adjoint()).ldlt().solve(CMatrix::Identity(r1, r1));
  report.unitary = w;
  report.unitarity =
      std::max(max_abs(w.adjoint() * w - CMatrix::Identity(r1, r1)),
               max_abs(w * w.adjoint() - CMatrix::Identity(r1, r1)));
  {
    double frob2 = (w * (u * u.adjoint()) * w.adjoint()).trace().real() -
                   2.0 * (w * (u * v.adjoint())).trace().real() +
                   (v * v.adjoint()).trace().real();
    report.mapping = std::sqrt(std::max(0.0, frob2));
  }

  // C'-side intertwining: evaluate both actions on the basis of F' 's left algebra
  for (size_t j = 0; j < t_fe.corr.left_algebra.basis.size(); ++j) {
    CMatrix left = lhs.left_action.apply(t_fe.corr.left_algebra.basis[j]);
    const CMatrix& right = t_fe.corr.left_action.images[j];
    report.intertwine_cprime =
        std::max(report.intertwine_cprime, max_abs(w * left - right * w));
  }
  // A-side intertwining: the lifting of F' (x) E' must match the tensor action
  Representation rhs_a = commutant_lifting(t_fe.corr.module, e.left_algebra, tol);
  for (size_t i = 0; i < e.left_algebra.basis.size(); ++i) {
    const CMatrix& left = t_ef.corr.left_action.images[i];
    const CMatrix& right = rhs_a.images[i];
    report.intertwine_a = std::max(report.intertwine_a, max_abs(w * left - right * w));
  }
  return report;
}

IsomorphismResult are_isomorphic(const Correspondence& c1, const Correspondence& c2,
                                 std::uint64_t seed, const Tolerance& tol) {
  if (!algebra_equal(c1.left_algebra, c2.left_algebra, tol) ||
      !algebra_equal(c1.right_algebra(), c2.right_algebra(), tol))
    throw DimensionMismatchError("are_isomorphic: correspondences over different algebras");

  IsomorphismResult result;
  if (c1.carrier_dim() != c2.carrier_dim()) return result;  // definite negative

  VNAlgebra bp = commutant(c1.right_algebra(), tol);
  Representation l1 = commutant_lifting(c1.module, bp, tol);
  Representation l2 = commutant_lifting(c2.module, bp, tol);

  std::vector<CMatrix> lefts, rights;
  for (size_t i = 0; i < c1.left_algebra.basis.size(); ++i) {
    lefts.push_back(c2.left_action.apply(c1.left_algebra.basis[i]));
    rights.push_back(c1.left_action.images[i]);
  }
  for (size_t i = 0; i < bp.basis.size(); ++i) {
    lefts.push_back(l2.images[i]);
    rights.push_back(l1.images[i]);
  }
  const Index h = c1.carrier_dim();
  std::vector<CMatrix> intertwiners = sylvester_nullspace(lefts, rights, h, h, tol);
  if (intertwiners.empty()) return result;  // definite negative

  double last = 2.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    SeededRng rng(seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B9ull);
    CMatrix x = CMatrix::Zero(h, h);
    for (const auto& t : intertwiners) x += rng.complex_gaussian() * t;
    CMatrix w = polar(x, tol).unitary;
    double residual = 0.0;
    for (size_t i = 0; i < lefts.size(); ++i)
      residual = std::max(residual, max_abs(lefts[i] * w - w * rights[i]));
    last = residual;
    if (residual <= 1000 * tol.cutoff(1.0)) {
      result.unitary = w;
      result.residual = residual;
      return result;
    }
  }
  result.residual = last;
  result.probabilistic_negative = true;
  return result;
}

MoritaReport morita_check(const Correspondence& c, const Tolerance& tol) {
  MoritaReport report;
  RangeIdeal ideal = range_ideal(c.module, tol);
  report.full = ideal.full;
  report.fullness_distance =
      ideal.basis.size() == c.right_algebra().basis.size()
          ? subspace_distance(ideal.basis, c.right_algebra().basis)
          : 2.0;

  // injectivity: the linear map a -> rho(a) has trivial kernel
  const Index h = c.carrier_dim();
  const Index dim_a = c.left_algebra.dim();
  CMatrix stacked(h * h, dim_a);
  for (Index i = 0; i < dim_a; ++i)
    stacked.col(i) = vec(c.left_action.images[static_cast<size_t>(i)]);
  report.kernel_dim = static_cast<Index>(nullspace(stacked, tol).size());
  report.injective = report.kernel_dim == 0;

  VNAlgebra ba = adjointable_algebra(c.module, tol);
  std::vector<CMatrix> image_span = orthonormal_span(c.left_action.images, tol);
  report.surjectivity_distance = image_span.size() == ba.basis.size()
                                     ? subspace_distance(image_span, ba.basis)
                                     : 2.0;
  report.surjective = report.surjectivity_distance <= 100 * tol.cutoff(1.0);
  report.equivalence = report.full && report.injective && report.surjective;
  return report;
}

}  // namespace vncorr
