#include "vncorr/numkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace vncorr {

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol.cutoff(std::max(max_abs(a), max_abs(b)));
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace();
}

double hs_norm(const CMatrix& m) { return m.norm(); }

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    throw DimensionMismatchError("unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CVector phase_normalize(const CVector& v) {
  double best = 0.0;
  Index at = 0;
  for (Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best * (1.0 + 1e-12)) {
      best = a;
      at = i;
    }
  }
  if (best == 0.0) return v;
  Complex phase = std::conj(v(at)) / best;
  return phase * v;
}

namespace {

// Lexicographic comparison of rounded coordinates (re, then im, entrywise).
bool lex_less(const CVector& a, const CVector& b) {
  const double grid = 1e6;
  for (Index i = 0; i < a.size(); ++i) {
    double ar = std::round(a(i).real() * grid), br = std::round(b(i).real() * grid);
    if (ar != br) return ar < br;
    double ai = std::round(a(i).imag() * grid), bi = std::round(b(i).imag() * grid);
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace

void canonical_order(std::vector<CVector>& vectors, std::vector<double>& values) {
  for (auto& v : vectors) v = phase_normalize(v);
  std::vector<size_t> idx(vectors.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  const double grid = std::max(1.0, vmax) * 1e-9;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
    double vi = std::round(values[i] / grid), vj = std::round(values[j] / grid);
    if (vi != vj) return vi > vj;
    return lex_less(vectors[i], vectors[j]);
  });
  std::vector<CVector> sv(vectors.size());
  std::vector<double> sw(values.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    sv[i] = vectors[idx[i]];
    sw[i] = values[idx[i]];
  }
  vectors.swap(sv);
  values.swap(sw);
}

std::vector<CVector> nullspace_of_normal(const CMatrix& h, const Tolerance& tol) {
  if (h.rows() != h.cols()) throw DimensionMismatchError("nullspace_of_normal: not square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  const auto& lam = es.eigenvalues();
  double sigma_max = std::sqrt(std::max(0.0, lam(lam.size() - 1)));
  double cut = tol.rank_cutoff_normal(sigma_max);
  std::vector<CVector> out;
  std::vector<double> values;
  for (Index i = 0; i < lam.size(); ++i) {
    double sigma = std::sqrt(std::max(0.0, lam(i)));
    if (sigma <= cut) {
      out.push_back(es.eigenvectors().col(i));
      values.push_back(sigma);
    }
  }
  canonical_order(out, values);
  return out;
}

std::vector<CVector> nullspace(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) throw DimensionMismatchError("nullspace: empty matrix");
  return nullspace_of_normal(m.adjoint() * m, tol);
}

PolarDecomposition polar(const CMatrix& m, const Tolerance& tol) {
  (void)tol;
  if (m.rows() != m.cols()) throw DimensionMismatchError("polar: not square");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
  CMatrix p = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
  return {u, p};
}

bool psd_check(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw DimensionMismatchError("psd_check: not square");
  double asym = max_abs(m - m.adjoint());
  if (asym > tol.cutoff(max_abs(m)))
    throw NotHermitianError("psd_check: asymmetry exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) / 2.0,
                                            Eigen::EigenvaluesOnly);
  const auto& lam = es.eigenvalues();
  if (lam.size() == 0) return true;
  double scale = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  return lam(0) >= -tol.cutoff(scale);
}

GramQuotient gram_quotient(const CMatrix& gram, const Tolerance& tol) {
  if (gram.rows() != gram.cols()) throw DimensionMismatchError("gram_quotient: not square");
  double asym = max_abs(gram - gram.adjoint());
  if (asym > tol.cutoff(max_abs(gram)))
    throw NotPSDError("gram_quotient: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((gram + gram.adjoint()) / 2.0);
  const auto& lam = es.eigenvalues();
  const Index m = gram.rows();
  double lam_max = (lam.size() > 0) ? std::max(0.0, lam(lam.size() - 1)) : 0.0;
  double sigma_max = std::sqrt(lam_max);
  if (lam.size() > 0 && lam(0) < -tol.cutoff(std::max(std::abs(lam(0)), lam_max)))
    throw NotPSDError("gram_quotient: negative eigenvalue beyond tolerance");

  std::vector<CVector> kept;
  std::vector<double> values;
  for (Index i = 0; i < lam.size(); ++i) {
    double sigma = std::sqrt(std::max(0.0, lam(i)));
    if (sigma > tol.rank_cutoff_normal(sigma_max)) {
      kept.push_back(es.eigenvectors().col(i));
      values.push_back(lam(i));
    }
  }
  canonical_order(kept, values);

  GramQuotient q;
  q.rank = static_cast<Index>(kept.size());
  q.coords = CMatrix::Zero(q.rank, m);
  for (Index k = 0; k < q.rank; ++k)
    q.coords.row(k) = std::sqrt(values[k]) * kept[k].adjoint();
  return q;
}

std::vector<CMatrix> sylvester_nullspace(const std::vector<CMatrix>& lefts,
                                         const std::vector<CMatrix>& rights,
                                         Index rows, Index cols,
                                         const Tolerance& tol) {
  if (lefts.size() != rights.size())
    throw DimensionMismatchError("sylvester_nullspace: list length mismatch");
  for (const auto& l : lefts)
    if (l.rows() != rows || l.cols() != rows)
      throw DimensionMismatchError("sylvester_nullspace: left factor shape");
  for (const auto& r : rights)
    if (r.rows() != cols || r.cols() != cols)
      throw DimensionMismatchError("sylvester_nullspace: right factor shape");

  const Index n = rows * cols;
  const CMatrix id_r = CMatrix::Identity(rows, rows);
  const CMatrix id_c = CMatrix::Identity(cols, cols);
  // Accumulate the normal matrix of the stacked system instead of the stack.
  CMatrix h = CMatrix::Zero(n, n);
  for (size_t i = 0; i < lefts.size(); ++i) {
    CMatrix k = kron(id_c, lefts[i]) - kron(rights[i].transpose(), id_r);
    h.noalias() += k.adjoint() * k;
  }
  std::vector<CVector> null;
  if (lefts.empty()) {
    null.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) null.push_back(CVector::Unit(n, i));
  } else {
    null = nullspace_of_normal(h, tol);
  }
  std::vector<CMatrix> out;
  out.reserve(null.size());
  for (const auto& v : null) out.push_back(unvec(v, rows, cols));
  return out;
}

std::vector<CMatrix> orthonormal_span(const std::vector<CMatrix>& family,
                                      const Tolerance& tol) {
  if (family.empty()) return {};
  const Index rows = family[0].rows(), cols = family[0].cols();
  const Index n = static_cast<Index>(family.size());
  CMatrix v(rows * cols, n);
  for (Index i = 0; i < n; ++i) {
    if (family[i].rows() != rows || family[i].cols() != cols)
      throw DimensionMismatchError("orthonormal_span: ragged family");
    v.col(i) = vec(family[i]);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(v.adjoint() * v);
  const auto& lam = es.eigenvalues();
  double sigma_max = std::sqrt(std::max(0.0, lam(lam.size() - 1)));
  double cut = tol.rank_cutoff_normal(sigma_max);
  std::vector<CVector> kept;
  std::vector<double> values;
  for (Index i = 0; i < lam.size(); ++i) {
    double sigma = std::sqrt(std::max(0.0, lam(i)));
    if (sigma > cut) {
      kept.push_back(v * es.eigenvectors().col(i) / sigma);
      values.push_back(sigma);
    }
  }
  canonical_order(kept, values);
  std::vector<CMatrix> out;
  out.reserve(kept.size());
  for (const auto& w : kept) out.push_back(unvec(w, rows, cols));
  return out;
}

CMatrix span_projector(const std::vector<CMatrix>& on_basis) {
  if (on_basis.empty()) return CMatrix::Zero(0, 0);
  const Index n = on_basis[0].size();
  CMatrix p = CMatrix::Zero(n, n);
  for (const auto& b : on_basis) {
    CVector w = vec(b);
    p.noalias() += w * w.adjoint();
  }
  return p;
}

double subspace_distance(const std::vector<CMatrix>& a,
                         const std::vector<CMatrix>& b) {
  if (a.empty() && b.empty()) return 0.0;
  const std::vector<CMatrix>& probe = a.empty() ? b : a;
  const Index n = probe[0].size();
  CMatrix d = CMatrix::Zero(n, n);
  if (!a.empty()) d += span_projector(a);
  if (!b.empty()) d -= span_projector(b);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d, Eigen::EigenvaluesOnly);
  const auto& lam = es.eigenvalues();
  return std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
}

CVector span_coords(const CMatrix& x, const std::vector<CMatrix>& on_basis) {
  CVector c(static_cast<Index>(on_basis.size()));
  for (size_t i = 0; i < on_basis.size(); ++i)
    c(static_cast<Index>(i)) = hs_inner(on_basis[i], x);
  return c;
}

CMatrix project_onto_span(const CMatrix& x, const std::vector<CMatrix>& on_basis) {
  CMatrix p = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& b : on_basis) p += hs_inner(b, x) * b;
  return p;
}

double span_residual(const CMatrix& x, const std::vector<CMatrix>& on_basis) {
  return max_abs(x - project_onto_span(x, on_basis));
}

bool in_span(const CMatrix& x, const std::vector<CMatrix>& on_basis,
             const Tolerance& tol) {
  return span_residual(x, on_basis) <= tol.cutoff(max_abs(x));
}

CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = tol.cutoff(s.size() > 0 ? s(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace vncorr
