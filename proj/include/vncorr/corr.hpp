#ifndef VNCORR_CORR_HPP
#define VNCORR_CORR_HPP

#include "vncorr/vnmodule.hpp"

#include <cstdint>
#include <optional>

namespace vncorr {

struct ActionsDoNotCommuteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LeftActionEscapesModuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MiddleAlgebraMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Concrete von Neumann correspondence from A to B: a concrete module over B
/// together with a commuting unital left action of A on the carrier. The
/// triple picture (rho', rho, H) is recovered via commutant_lifting.
struct Correspondence {
  VNAlgebra left_algebra;      // A on C^k
  Representation left_action;  // rho: A -> B(C^h), the Stinespring representation
  ConcreteModule module;       // E over B, carrier C^h

  const VNAlgebra& right_algebra() const { return module.algebra; }
  Index carrier_dim() const { return module.carrier_dim; }
};

struct CorrespondenceValidation {
  RepresentationValidation left_action;
  ModuleValidation module;
  double commutation = 0.0;    // [rho(A), rho'(B')]
  double module_action = 0.0;  // rho(a) E escaping E
  double worst() const {
    return std::max(std::max(left_action.worst(), module.worst()),
                    std::max(commutation, module_action));
  }
  bool pass(const Tolerance& tol = {}) const {
    return left_action.pass(tol) && module.pass(tol) &&
           commutation <= 100 * tol.cutoff(1.0) && module_action <= 100 * tol.cutoff(1.0);
  }
};

CorrespondenceValidation validate_correspondence(const Correspondence& c,
                                                 const Tolerance& tol = {});

/// Packages and verifies the invariants; throws ActionsDoNotCommuteError or
/// LeftActionEscapesModuleError.
Correspondence make_correspondence(const VNAlgebra& a, const ConcreteModule& e,
                                   const Representation& rho, const Tolerance& tol = {});

/// B as the identity correspondence from B to B (left multiplication).
Correspondence identity_correspondence(const VNAlgebra& b, const Tolerance& tol = {});

/// A module over B viewed as a correspondence from the scalars to B.
Correspondence module_as_correspondence(const ConcreteModule& e, const Tolerance& tol = {});

/// A representation of D on C^h viewed as a correspondence from D to the
/// scalars (the Hilbert space picture).
Correspondence representation_as_correspondence(const Representation& rho,
                                                const Tolerance& tol = {});

/// The commutant functor: swaps the two representations of the triple,
/// producing a correspondence from B' to A' on the same carrier.
Correspondence commutant_functor(const Correspondence& c, const Tolerance& tol = {});

struct DoubleCommutantReport {
  double module_distance = 0.0;
  double left_action_residual = 0.0;
  double left_algebra_distance = 0.0;
  double right_algebra_distance = 0.0;
  double worst() const {
    return std::max(std::max(module_distance, left_action_residual),
                    std::max(left_algebra_distance, right_algebra_distance));
  }
};

/// (E')' = E on the literally identical carrier.
DoubleCommutantReport double_commutant_check(const Correspondence& c,
                                             const Tolerance& tol = {});

/// Interior tensor product over the middle algebra, realized as the Gram
/// quotient of the formal family {x_i (x) w_a} with
/// G[(i,a),(j,b)] = <w_a, sigma(x_i* x_j) w_b>. coords maps formal
/// coefficient vectors to carrier coordinates.
struct TensorResult {
  Correspondence corr;
  CMatrix coords;            // r x (left_module_dim * right_carrier_dim)
  Index left_module_dim = 0;
  Index right_carrier_dim = 0;
};

TensorResult tensor(const Correspondence& c1, const Correspondence& c2,
                    const Tolerance& tol = {});

/// Descend a formal first-leg action through the tensor coordinates:
/// returns the carrier matrix of kron(gamma, I) in the quotient.
CMatrix tensor_descend(const TensorResult& t, const CMatrix& gamma,
                       const Tolerance& tol = {});

/// Descend a map acting on the second leg (carrier of the right factor).
CMatrix tensor_descend_right(const TensorResult& target, const TensorResult& source,
                             const CMatrix& gamma_left, const CMatrix& action_right,
                             const Tolerance& tol = {});

struct DualityReport {
  CMatrix unitary;           // from the carrier of (E (x) F) to that of F' (x) E'
  double gram_match = 0.0;   // Frobenius mismatch of the two spanning Grams
  double unitarity = 0.0;
  double mapping = 0.0;      // residual of W U = V on spanning vectors
  double intertwine_cprime = 0.0;
  double intertwine_a = 0.0;
  double worst() const {
    return std::max(std::max(gram_match, unitarity),
                    std::max(mapping, std::max(intertwine_cprime, intertwine_a)));
  }
};

/// The duality (E (x) F)' ~ F' (x) E' with the unitary built from the
/// tensor-swap x (x) y' (x) g -> y' (x) x (x) g on spanning vectors.
DualityReport duality_unitary(const Correspondence& e, const Correspondence& f,
                              const Tolerance& tol = {});

struct IsomorphismResult {
  std::optional<CMatrix> unitary;
  double residual = 0.0;
  bool probabilistic_negative = false;
};

/// Searches the joint intertwiner space for a unitary intertwining both
/// representations; a negative after random draws is flagged probabilistic.
IsomorphismResult are_isomorphic(const Correspondence& c1, const Correspondence& c2,
                                 std::uint64_t seed, const Tolerance& tol = {});

struct MoritaReport {
  bool equivalence = false;
  bool full = false;
  bool injective = false;
  bool surjective = false;
  double fullness_distance = 0.0;
  double surjectivity_distance = 0.0;
  Index kernel_dim = 0;
};

/// E is a Morita equivalence iff it is full and the left action is a
/// bijection of A onto K(E).
MoritaReport morita_check(const Correspondence& c, const Tolerance& tol = {});

}  // namespace vncorr

#endif
