#ifndef VNCORR_VNMODULE_HPP
#define VNCORR_VNMODULE_HPP

#include "vncorr/algebra.hpp"
#include "vncorr/numkit.hpp"

#include <cstdint>
#include <vector>

namespace vncorr {

struct InnerProductEscapesBError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Lemma38ViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Normal unital representation of a finite-dimensional algebra, stored as
/// the images of its basis elements on C^carrier_dim.
struct Representation {
  VNAlgebra algebra;
  Index carrier_dim = 0;
  std::vector<CMatrix> images;

  /// Linear extension to an arbitrary element of span(algebra).
  CMatrix apply(const CMatrix& x) const;
};

struct RepresentationValidation {
  double unital = 0.0;
  double multiplicative = 0.0;
  double star = 0.0;
  double worst() const { return std::max(unital, std::max(multiplicative, star)); }
  bool pass(const Tolerance& tol = {}) const { return worst() <= 100 * tol.cutoff(1.0); }
};

RepresentationValidation validate_representation(const Representation& rep,
                                                 const Tolerance& tol = {});

/// Concrete von Neumann B-module (E, H): a Hilbert-Schmidt-orthonormal basis
/// of operators C^g -> C^h, closed under the right B-action, with inner
/// products x*y inside B and span(E C^g) = C^h.
struct ConcreteModule {
  VNAlgebra algebra;  // B on C^g
  Index carrier_dim = 0;
  std::vector<CMatrix> basis;  // h x g each
  bool carrier_shrunk = false;
  CMatrix carrier_embedding;  // original-carrier x carrier_dim isometry when shrunk

  Index dim() const { return static_cast<Index>(basis.size()); }
  Index ambient_dim() const { return algebra.ambient_dim; }

  /// Isometry from the (possibly shrunk) carrier into the carrier the module
  /// was requested on; the identity when nothing was shrunk.
  CMatrix embedding() const {
    return carrier_embedding.size() > 0
               ? carrier_embedding
               : CMatrix(CMatrix::Identity(carrier_dim, carrier_dim));
  }
};

struct ModuleValidation {
  double gram = 0.0;
  double right_action = 0.0;
  double inner_products = 0.0;
  Index nondegeneracy_defect = 0;  // carrier_dim - rank(span E C^g)
  double worst() const { return std::max(gram, std::max(right_action, inner_products)); }
  bool pass(const Tolerance& tol = {}) const {
    return worst() <= 100 * tol.cutoff(1.0) && nondegeneracy_defect == 0;
  }
};

ModuleValidation validate_module(const ConcreteModule& e, const Tolerance& tol = {});

/// Closes a spanning family under the right B-action and linear span. When
/// the span of E C^g is a proper subspace of C^h the carrier is shrunk to it
/// and the module is flagged. Throws InnerProductEscapesBError when x*y
/// cannot lie in B.
ConcreteModule make_module(const VNAlgebra& b, Index h,
                           const std::vector<CMatrix>& spanning,
                           const Tolerance& tol = {});

/// The unique representation rho' of B' with rho'(b')(x v) = x (b' v).
Representation commutant_lifting(const ConcreteModule& e, const Tolerance& tol = {});

/// Same, evaluated on the basis of a caller-supplied subalgebra of B'.
Representation commutant_lifting(const ConcreteModule& e, const VNAlgebra& b_prime,
                                 const Tolerance& tol = {});

/// Intertwiner module of a representation of B': all X with
/// rho'(b') X = X b'. Throws Lemma38ViolationError if the result fails to
/// act nondegenerately (the lemma forbids it; failure signals numerics).
ConcreteModule intertwiner_module(const VNAlgebra& b, const Representation& rho_prime,
                                  const Tolerance& tol = {});

/// Subspace-projection distance after the module -> representation -> module
/// roundtrip (the bijectivity of the functor, module side).
double roundtrip_module_residual(const ConcreteModule& e, const Tolerance& tol = {});

/// Image-wise residual after representation -> module -> representation.
double roundtrip_representation_residual(const Representation& rho_prime,
                                         const Tolerance& tol = {});

/// B^a(E) as rho'(B')', cross-checked against span{x y*}.
VNAlgebra adjointable_algebra(const ConcreteModule& e, const Tolerance& tol = {});

struct RangeIdeal {
  std::vector<CMatrix> basis;  // HS-orthonormal, inside span(B)
  bool full = false;
  double ideal_residual = 0.0;  // escape of b s, s b from the span
};

RangeIdeal range_ideal(const ConcreteModule& e, const Tolerance& tol = {});

struct LinkingReport {
  VNAlgebra linking;
  VNAlgebra linking_commutant;
  VNAlgebra linking_bicommutant;
  double commutant_match = 0.0;          // M' vs {diag(b', rho'(b'))}
  double corner_module_match = 0.0;      // (2,1) corner of M'' vs E
  double corner_algebra_match = 0.0;     // (1,1) corner vs B
  double corner_adjointable_match = 0.0; // (2,2) corner vs B^a(E)
  double worst() const {
    return std::max(std::max(commutant_match, corner_module_match),
                    std::max(corner_algebra_match, corner_adjointable_match));
  }
};

LinkingReport linking_algebra(const ConcreteModule& e, const Tolerance& tol = {});

/// Dual module E* over K(E) = B^a(E), with basis the adjoints of the basis
/// of E and carrier span(E* C^h).
ConcreteModule dual_module(const ConcreteModule& e, const Tolerance& tol = {});

/// Orthonormal basis of the intertwiners between the two commutant liftings;
/// these act on E1 by composition and land in E2.
std::vector<CMatrix> morphism_space(const ConcreteModule& e1, const ConcreteModule& e2,
                                    const Tolerance& tol = {});

double module_distance(const ConcreteModule& e1, const ConcreteModule& e2);

/// Seed-deterministic representation of an algebra: random multiplicities per
/// Wedderburn block, conjugated by a Haar unitary; carrier <= max_carrier.
Representation random_representation(std::uint64_t seed, const VNAlgebra& d,
                                     Index max_carrier, const Tolerance& tol = {});

/// Seed-deterministic module over B, realized as the intertwiner module of a
/// random representation of B'.
ConcreteModule random_module(std::uint64_t seed, const VNAlgebra& b,
                             Index max_carrier, const Tolerance& tol = {});

}  // namespace vncorr

#endif
