#ifndef VNCORR_NUMKIT_HPP
#define VNCORR_NUMKIT_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace vncorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotHermitianError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPSDError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonFiniteEntryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Single tolerance policy for the whole library. A singular value sigma is
/// treated as zero iff sigma <= eps * max(1, sigma_max); every comparison of
/// matrices, ranks and residuals routes through this record.
struct Tolerance {
  double eps = 1e-9;

  double cutoff(double scale) const { return eps * std::max(1.0, scale); }
  bool is_zero(double value, double scale) const { return value <= cutoff(scale); }

  /// Rank cutoff for singular values recovered as sqrt of eigenvalues of a
  /// normal/Gram matrix: such values carry a sqrt(machine eps) relative noise
  /// floor, so the cutoff cannot be taken below it.
  double rank_cutoff_normal(double sigma_max) const {
    const double floor_rel = 32 * 1.4901161193847656e-08;  // 32 sqrt(2^-52)
    return std::max(cutoff(sigma_max), floor_rel * std::max(1.0, sigma_max));
  }
};

double max_abs(const CMatrix& m);
bool is_finite(const CMatrix& m);

/// Matrix equality in the sense of the library: max-entry absolute difference.
bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

/// Hilbert-Schmidt inner product tr(a* b).
Complex hs_inner(const CMatrix& a, const CMatrix& b);
double hs_norm(const CMatrix& m);

/// Largest singular value.
double op_norm(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-major vectorization, so vec(A X B) = kron(B^T, A) vec(X).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Index rows, Index cols);

/// Orthonormal basis of {v : M v = 0} under the rank cutoff, in the canonical
/// order (phase-normalized, lexicographic on rounded coordinates).
std::vector<CVector> nullspace(const CMatrix& m, const Tolerance& tol = {});

/// Nullspace from the normal matrix H = M* M (PSD); shares the rank policy
/// with nullspace() via sigma = sqrt(lambda).
std::vector<CVector> nullspace_of_normal(const CMatrix& h, const Tolerance& tol = {});

struct PolarDecomposition {
  CMatrix unitary;
  CMatrix positive;
};

/// M = U P with U unitary (from the singular factors) and P >= 0. M square.
PolarDecomposition polar(const CMatrix& m, const Tolerance& tol = {});

/// True iff all eigenvalues of the symmetrized input are >= -cutoff.
/// Throws NotHermitianError when the asymmetry exceeds the tolerance.
bool psd_check(const CMatrix& m, const Tolerance& tol = {});

/// Quotient of a formal spanning family with Gram matrix G by its length-zero
/// vectors. coords is rank x m and maps formal coefficient vectors to
/// coordinates in an orthonormal basis of the quotient; coords* coords
/// reproduces G up to tolerance.
struct GramQuotient {
  Index rank = 0;
  CMatrix coords;
};

GramQuotient gram_quotient(const CMatrix& gram, const Tolerance& tol = {});

/// Orthonormal (Hilbert-Schmidt) basis of {X : L_i X = X R_i for all i},
/// X of shape rows x cols, via stacked Kronecker forms kron(I, L) - kron(R^T, I).
std::vector<CMatrix> sylvester_nullspace(const std::vector<CMatrix>& lefts,
                                         const std::vector<CMatrix>& rights,
                                         Index rows, Index cols,
                                         const Tolerance& tol = {});

// --- span utilities over matrix families in Hilbert-Schmidt geometry ---

/// Orthonormal basis of the span of a family of equally shaped matrices,
/// ordered by descending singular value of the coefficient Gram, then
/// lexicographically on rounded coordinates.
std::vector<CMatrix> orthonormal_span(const std::vector<CMatrix>& family,
                                      const Tolerance& tol = {});

/// Orthogonal projector onto the span, as a matrix on vectorized space.
CMatrix span_projector(const std::vector<CMatrix>& on_basis);

/// Operator-norm distance between the orthogonal projectors onto two spans
/// (families must be orthonormal and equally shaped).
double subspace_distance(const std::vector<CMatrix>& on_basis_a,
                         const std::vector<CMatrix>& on_basis_b);

/// Component vector of X in an orthonormal family.
CVector span_coords(const CMatrix& x, const std::vector<CMatrix>& on_basis);
CMatrix project_onto_span(const CMatrix& x, const std::vector<CMatrix>& on_basis);

/// Residual max_abs(X - P_span X).
double span_residual(const CMatrix& x, const std::vector<CMatrix>& on_basis);
bool in_span(const CMatrix& x, const std::vector<CMatrix>& on_basis,
             const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse with the shared rank cutoff.
CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol = {});

/// Phase-normalize a column (largest-magnitude entry made real positive).
CVector phase_normalize(const CVector& v);

/// Canonical deterministic ordering of an orthonormal family: stable sort by
/// descending defining value, then lexicographic on rounded coordinates.
void canonical_order(std::vector<CVector>& vectors, std::vector<double>& values);

}  // namespace vncorr

#endif
