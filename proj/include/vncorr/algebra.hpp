#ifndef VNCORR_ALGEBRA_HPP
#define VNCORR_ALGEBRA_HPP

#include "vncorr/numkit.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vncorr {

struct DecompositionFailedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finite-dimensional von Neumann algebra B inside B(C^n), stored as a
/// Hilbert-Schmidt-orthonormal basis of n x n matrices. Unital, *-closed and
/// multiplicatively closed as spans; see validate_algebra.
struct VNAlgebra {
  Index ambient_dim = 0;
  std::vector<CMatrix> basis;

  Index dim() const { return static_cast<Index>(basis.size()); }
  CMatrix identity() const { return CMatrix::Identity(ambient_dim, ambient_dim); }
};

/// Residuals for the VNAlgebra invariants; pass() applies the tolerance.
struct AlgebraValidation {
  double gram = 0.0;        // basis Gram vs identity
  double star_closed = 0.0; // adjoints escaping the span
  double mult_closed = 0.0; // pairwise products escaping the span
  double unital = 0.0;      // ambient identity escaping the span

  double worst() const;
  bool pass(const Tolerance& tol = {}) const;
};

AlgebraValidation validate_algebra(const VNAlgebra& a, const Tolerance& tol = {});

/// Smallest unital *-closed algebra containing the generators.
VNAlgebra generate_algebra(Index ambient_dim, const std::vector<CMatrix>& generators,
                           const Tolerance& tol = {});

/// {X : X A_i = A_i X for every basis element}.
VNAlgebra commutant(const VNAlgebra& a, const Tolerance& tol = {});

/// A intersected with its commutant, as an intersection of spans.
VNAlgebra center(const VNAlgebra& a, const Tolerance& tol = {});

/// Pairwise-orthogonal projections summing to the identity, each minimal in
/// the center. Sorted by descending trace, then lexicographically.
std::vector<CMatrix> minimal_central_projections(const VNAlgebra& a,
                                                 const Tolerance& tol = {});

/// One Wedderburn block: the algebra compressed to the block is carried onto
/// M_{block_dim} tensor 1_{multiplicity} by the isometry.
struct Block {
  Index block_dim = 0;     // n_k
  Index multiplicity = 0;  // m_k
  CMatrix isometry;        // ambient_dim x (n_k * m_k)
};

struct BlockStructure {
  std::vector<Block> blocks;
  Index algebra_dim() const;   // sum n_k^2
  Index ambient_dim() const;   // sum n_k * m_k
};

/// Decompose A into blocks M_{n_k} tensor 1_{m_k} along its minimal central
/// projections. Throws DecompositionFailedError if residuals exceed tolerance.
BlockStructure block_structure(const VNAlgebra& a, const Tolerance& tol = {});

/// Seed-deterministic random algebra: random blocks with
/// sum n_k m_k <= ambient_budget, conjugated by a Haar unitary.
VNAlgebra random_algebra(std::uint64_t seed, Index ambient_budget);

/// Span equality of two algebras (operator-norm distance of HS projectors).
double algebra_distance(const VNAlgebra& a, const VNAlgebra& b);
bool algebra_equal(const VNAlgebra& a, const VNAlgebra& b, const Tolerance& tol = {});

}  // namespace vncorr

#endif
