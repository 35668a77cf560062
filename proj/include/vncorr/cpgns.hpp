#ifndef VNCORR_CPGNS_HPP
#define VNCORR_CPGNS_HPP

#include "vncorr/corr.hpp"

#include <cstdint>

namespace vncorr {

struct NotCompletelyPositiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotHomomorphismError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAnIsomorphismInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear *-preserving map between two algebras, as images of the source
/// basis elements (matrices in the target's ambient space).
struct CPMap {
  VNAlgebra source;  // A
  VNAlgebra target;  // B on C^g
  std::vector<CMatrix> images;

  CMatrix apply(const CMatrix& x) const;
};

struct CPMapValidation {
  double star = 0.0;       // T(a*) vs T(a)*
  double in_target = 0.0;  // images escaping span(B)
  double worst() const { return std::max(star, in_target); }
  bool pass(const Tolerance& tol = {}) const { return worst() <= 100 * tol.cutoff(1.0); }
};

CPMapValidation validate_cpmap(const CPMap& t, const Tolerance& tol = {});

/// The block matrix [T(a_i* a_j)] over an orthonormal source basis; this is
/// literally the Gram matrix of the GNS construction.
CMatrix cp_block_gram(const CPMap& t);

/// Complete positivity: the block Gram is PSD.
bool cp_check(const CPMap& t, const Tolerance& tol = {});

struct GNSResult {
  Correspondence corr;      // from A to B, carrier C^r
  CMatrix cyclic_vector;    // xi-hat: C^g -> C^r, also the module element xi
  double dilation_residual = 0.0;  // max |T(a_i) - xi* rho(a_i) xi|
  Index cyclicity_rank = 0;        // rank of span{rho(a) xi v}; r when cyclic
};

/// Paschke GNS: quotient of the formal family {a_i (x) 1 (x) e_c} by the
/// length-zero vectors of the block Gram, with rho acting on the first leg
/// and xi the class of 1 (x) 1.
GNSResult gns(const CPMap& t, const Tolerance& tol = {});

struct StinespringResult {
  Representation rho;
  CMatrix isometry;  // xi-hat with T(a) = isometry* rho(a) isometry
  double residual = 0.0;
};

StinespringResult stinespring(const CPMap& t, const Tolerance& tol = {});

struct ArvesonReport {
  Representation lifting;  // of B' on the GNS carrier
  double commutation = 0.0;   // [lifting, rho]
  double intertwining = 0.0;  // lifting(b') xi - xi b'
  double worst() const { return std::max(commutation, intertwining); }
};

/// The commutant lifting of the GNS module; commutes with the Stinespring
/// representation and intertwines along the cyclic vector.
ArvesonReport arveson_lifting(const CPMap& t, const Tolerance& tol = {});

/// Unital *-homomorphism between two adjointable-operator algebras.
struct Homomorphism {
  VNAlgebra source;  // B^a(E1)
  VNAlgebra target;  // B^a(E2)
  std::vector<CMatrix> images;

  CMatrix apply(const CMatrix& x) const;
};

struct HomomorphismValidation {
  double unital = 0.0;
  double multiplicative = 0.0;
  double star = 0.0;
  double in_target = 0.0;
  double worst() const {
    return std::max(std::max(unital, multiplicative), std::max(star, in_target));
  }
  bool pass(const Tolerance& tol = {}) const { return worst() <= 100 * tol.cutoff(1.0); }
};

HomomorphismValidation validate_homomorphism(const Homomorphism& theta,
                                             const Tolerance& tol = {});

struct RepTheoremResult {
  Correspondence f_theta;  // from B to C
  TensorResult e1_tensor_f;
  CMatrix unitary;         // u: carrier(E1 (x) F_theta) -> carrier(E2)
  double gram_match = 0.0;
  double unitarity = 0.0;
  double conjugation = 0.0;  // max |theta(a) - u (a (x) id) u*|
  double worst() const {
    return std::max(std::max(gram_match, unitarity), conjugation);
  }
};

/// F_theta = E1* (x) E2-via-theta together with the unitary
/// u(x1 (x) (x2* (x) y)) = theta(x1 x2*) y and the conjugation identity
/// theta(a) = u (a (x) id) u*.
RepTheoremResult rep_theorem(const ConcreteModule& e1, const ConcreteModule& e2,
                             const Homomorphism& theta, const Tolerance& tol = {});

struct UniquenessResult {
  CMatrix map;  // from span(B_E F-tilde) inside the F-tilde carrier to F_theta
  double gram_match = 0.0;  // well-definedness on Gram-null directions
  double isometry = 0.0;
  double surjectivity = 0.0;
  double worst() const { return std::max(gram_match, std::max(isometry, surjectivity)); }
};

/// Theorem-2.2 uniqueness: <x1, x2> y -> x1* (x) u-tilde(x2 (x) y) is an
/// inner-product-preserving bijection from B_E (x) F-tilde onto F_theta.
UniquenessResult rep_uniqueness(const ConcreteModule& e1, const ConcreteModule& e2,
                                const Homomorphism& theta, const Correspondence& f_tilde,
                                const CMatrix& u_tilde, const Tolerance& tol = {});

/// Compose two homomorphisms (images of theta2 after theta1).
Homomorphism compose(const Homomorphism& theta2, const Homomorphism& theta1,
                     const Tolerance& tol = {});

struct CompositionReport {
  double isomorphism_residual = 0.0;
  bool found = false;
};

/// F_{theta2 . theta1} is isomorphic to F_{theta1} (x) F_{theta2}.
CompositionReport composition_check(const ConcreteModule& e1, const ConcreteModule& e2,
                                    const ConcreteModule& e3, const Homomorphism& theta1,
                                    const Homomorphism& theta2, std::uint64_t seed,
                                    const Tolerance& tol = {});

}  // namespace vncorr

#endif
