// Brute-force linear-algebra oracles for cross-checking the library: plain
// Gaussian elimination with partial pivoting and hand-rolled Gram-Schmidt,
// independent of the SVD/eigendecomposition routes used by the implementation.
#ifndef VNCORR_TESTS_ORACLES_HPP
#define VNCORR_TESTS_ORACLES_HPP

#include "vncorr/numkit.hpp"

#include <cmath>
#include <vector>

namespace oracles {

using vncorr::CMatrix;
using vncorr::Complex;
using vncorr::CVector;
using vncorr::Index;

// Nullspace basis via reduced row echelon form. Not orthonormal.
inline std::vector<CVector> rref_nullspace(CMatrix a, double pivot_tol = 1e-10) {
  const Index rows = a.rows(), cols = a.cols();
  double scale = 0.0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double cut = pivot_tol * std::max(1.0, scale);

  std::vector<Index> pivot_col;
  Index row = 0;
  for (Index col = 0; col < cols && row < rows; ++col) {
    Index best = row;
    for (Index i = row + 1; i < rows; ++i)
      if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
    if (std::abs(a(best, col)) <= cut) continue;
    a.row(row).swap(a.row(best));
    a.row(row) /= a(row, col);
    for (Index i = 0; i < rows; ++i)
      if (i != row && std::abs(a(i, col)) > 0) a.row(i) -= a(i, col) * a.row(row);
    pivot_col.push_back(col);
    ++row;
  }

  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (Index c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<CVector> basis;
  for (Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    CVector v = CVector::Zero(cols);
    v(free) = 1.0;
    for (size_t r = 0; r < pivot_col.size(); ++r)
      v(pivot_col[r]) = -a(static_cast<Index>(r), free);
    basis.push_back(v);
  }
  return basis;
}

// Modified Gram-Schmidt.
inline std::vector<CVector> gram_schmidt(const std::vector<CVector>& family,
                                         double drop_tol = 1e-10) {
  std::vector<CVector> out;
  for (CVector v : family) {
    for (const auto& u : out) v -= u.dot(v) * u;
    for (const auto& u : out) v -= u.dot(v) * u;  // second pass for stability
    double n = v.norm();
    if (n > drop_tol) out.push_back(v / n);
  }
  return out;
}

// Max-entry distance between the projectors onto two spans of C^n vectors.
inline double projector_distance(const std::vector<CVector>& fam_a,
                                 const std::vector<CVector>& fam_b, Index n) {
  CMatrix pa = CMatrix::Zero(n, n), pb = CMatrix::Zero(n, n);
  for (const auto& v : gram_schmidt(fam_a)) pa += v * v.adjoint();
  for (const auto& v : gram_schmidt(fam_b)) pb += v * v.adjoint();
  return vncorr::max_abs(pa - pb);
}

// Entrywise brute-force solve of { L_i X = X R_i }: the linear system is
// written out equation by equation, without Kronecker machinery, and reduced
// by rref_nullspace. Flattening matches vec() (column-major).
inline std::vector<CVector> sylvester_bruteforce(const std::vector<CMatrix>& lefts,
                                                 const std::vector<CMatrix>& rights,
                                                 Index rows, Index cols) {
  const Index vars = rows * cols;
  const Index eqs = static_cast<Index>(lefts.size()) * vars;
  CMatrix system = CMatrix::Zero(eqs, vars);
  Index eq = 0;
  for (size_t i = 0; i < lefts.size(); ++i) {
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) {
        for (Index s = 0; s < rows; ++s) system(eq, c * rows + s) += lefts[i](r, s);
        for (Index t = 0; t < cols; ++t) system(eq, t * rows + r) -= rights[i](t, c);
        ++eq;
      }
  }
  return rref_nullspace(system);
}

}  // namespace oracles

#endif
