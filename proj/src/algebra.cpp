#include "vncorr/algebra.hpp"

#include "vncorr/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace vncorr {

namespace {

// Eigenvalue clustering: ascending input, split at gaps above the threshold.
std::vector<std::pair<Index, Index>> cluster_ranges(const Eigen::VectorXd& lam,
                                                    double threshold) {
  std::vector<std::pair<Index, Index>> ranges;
  Index start = 0;
  for (Index i = 1; i <= lam.size(); ++i) {
    if (i == lam.size() || lam(i) - lam(i - 1) > threshold) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

CMatrix random_hermitian_in_span(SeededRng& rng, const std::vector<CMatrix>& basis) {
  const Index n = basis[0].rows();
  CMatrix z = CMatrix::Zero(n, n);
  for (const auto& b : basis) {
    z += rng.gaussian() * (b + b.adjoint());
    z += rng.gaussian() * Complex(0, 1) * (b - b.adjoint());
  }
  return (z + z.adjoint()) / 2.0;
}

CMatrix random_element_in_span(SeededRng& rng, const std::vector<CMatrix>& basis) {
  CMatrix z = CMatrix::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& b : basis) z += rng.complex_gaussian() * b;
  return z;
}

// Orthonormal basis of the range of a projection with integer trace d.
CMatrix range_isometry(const CMatrix& p, Index d) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  const Index n = p.rows();
  CMatrix w(n, d);
  Index k = 0;
  for (Index i = 0; i < n && k < d; ++i) {
    // ascending eigenvalues: range vectors sit at the top
    Index idx = n - 1 - i;
    if (es.eigenvalues()(idx) > 0.5) w.col(k++) = phase_normalize(es.eigenvectors().col(idx));
  }
  if (k != d) throw DecompositionFailedError("range_isometry: trace/rank mismatch");
  return w;
}

}  // namespace

double AlgebraValidation::worst() const {
  return std::max(std::max(gram, star_closed), std::max(mult_closed, unital));
}

bool AlgebraValidation::pass(const Tolerance& tol) const {
  // residuals scale with the basis entries, which are O(1) for ON bases
  return worst() <= 100 * tol.cutoff(1.0);
}

AlgebraValidation validate_algebra(const VNAlgebra& a, const Tolerance& tol) {
  (void)tol;
  AlgebraValidation v;
  const Index d = a.dim();
  CMatrix gram(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) gram(i, j) = hs_inner(a.basis[i], a.basis[j]);
  v.gram = max_abs(gram - CMatrix::Identity(d, d));
  for (const auto& b : a.basis) {
    v.star_closed = std::max(v.star_closed, span_residual(b.adjoint(), a.basis));
    for (const auto& c : a.basis)
      v.mult_closed = std::max(v.mult_closed, span_residual(b * c, a.basis));
  }
  v.unital = span_residual(a.identity(), a.basis);
  return v;
}

VNAlgebra generate_algebra(Index ambient_dim, const std::vector<CMatrix>& generators,
                           const Tolerance& tol) {
  for (const auto& g : generators)
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw DimensionMismatchError("generate_algebra: generator shape");

  std::vector<CMatrix> family = {CMatrix::Identity(ambient_dim, ambient_dim)};
  family.insert(family.end(), generators.begin(), generators.end());
  std::vector<CMatrix> basis = orthonormal_span(family, tol);

  // Alternate adjoining adjoints and pairwise products until the dimension
  // stabilizes; it strictly increases per round, capped by ambient^2.
  while (true) {
    std::vector<CMatrix> augmented = basis;
    for (const auto& b : basis) augmented.push_back(b.adjoint());
    for (const auto& b : basis)
      for (const auto& c : basis) augmented.push_back(b * c);
    std::vector<CMatrix> next = orthonormal_span(augmented, tol);
    if (next.size() == basis.size()) break;
    if (static_cast<Index>(next.size()) > ambient_dim * ambient_dim)
      throw DecompositionFailedError("generate_algebra: closure exceeded ambient dimension");
    basis = std::move(next);
  }
  return VNAlgebra{ambient_dim, basis};
}

VNAlgebra commutant(const VNAlgebra& a, const Tolerance& tol) {
  const Index n = a.ambient_dim;
  return VNAlgebra{n, sylvester_nullspace(a.basis, a.basis, n, n, tol)};
}

VNAlgebra center(const VNAlgebra& a, const Tolerance& tol) {
  VNAlgebra ap = commutant(a, tol);
  const Index n2 = a.ambient_dim * a.ambient_dim;
  CMatrix h = 2.0 * CMatrix::Identity(n2, n2) - span_projector(a.basis) -
              span_projector(ap.basis);
  std::vector<CVector> null = nullspace_of_normal(h, tol);
  std::vector<CMatrix> basis;
  basis.reserve(null.size());
  for (const auto& v : null) basis.push_back(unvec(v, a.ambient_dim, a.ambient_dim));
  return VNAlgebra{a.ambient_dim, basis};
}

std::vector<CMatrix> minimal_central_projections(const VNAlgebra& a,
                                                 const Tolerance& tol) {
  VNAlgebra z = center(a, tol);
  const Index m = z.dim();
  const Index n = a.ambient_dim;

  for (int attempt = 0; attempt < 8; ++attempt) {
    SeededRng rng(0xC0FFEEull + static_cast<std::uint64_t>(attempt));
    CMatrix zel = random_hermitian_in_span(rng, z.basis);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(zel);
    const Eigen::VectorXd lam = es.eigenvalues();
    double scale = std::max(std::abs(lam(0)), std::abs(lam(n - 1)));
    auto ranges = cluster_ranges(lam, 1e-7 * std::max(1.0, scale));
    if (static_cast<Index>(ranges.size()) != m) continue;

    std::vector<CMatrix> projections;
    bool ok = true;
    for (auto [lo, hi] : ranges) {
      CMatrix p = CMatrix::Zero(n, n);
      for (Index i = lo; i < hi; ++i)
        p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      // p must be a minimal projection of the center
      if (span_residual(p, z.basis) > 100 * tol.cutoff(1.0)) ok = false;
      for (const auto& c : z.basis) {
        CMatrix q = p * c * p;
        Complex lambda = q.trace() / p.trace();
        if (max_abs(q - lambda * p) > 100 * tol.cutoff(max_abs(q))) ok = false;
      }
      projections.push_back(p);
    }
    if (!ok) continue;

    std::sort(projections.begin(), projections.end(),
              [](const CMatrix& x, const CMatrix& y) {
                double tx = x.trace().real(), ty = y.trace().real();
                if (std::abs(tx - ty) > 0.5) return tx > ty;
                CVector vx = vec(x), vy = vec(y);
                for (Index i = 0; i < vx.size(); ++i) {
                  double rx = std::round(vx(i).real() * 1e6), ry = std::round(vy(i).real() * 1e6);
                  if (rx != ry) return rx < ry;
                  double ix = std::round(vx(i).imag() * 1e6), iy = std::round(vy(i).imag() * 1e6);
                  if (ix != iy) return ix < iy;
                }
                return false;
              });
    return projections;
  }
  throw DecompositionFailedError("minimal_central_projections: no generic separation found");
}

Index BlockStructure::algebra_dim() const {
  Index d = 0;
  for (const auto& b : blocks) d += b.block_dim * b.block_dim;
  return d;
}

Index BlockStructure::ambient_dim() const {
  Index d = 0;
  for (const auto& b : blocks) d += b.block_dim * b.multiplicity;
  return d;
}

namespace {

// Decompose a factor (compressed to one central block) as M_nu tensor 1_mu:
// returns the d x d unitary carrying it onto the standard form.
CMatrix factor_frame(const std::vector<CMatrix>& factor_basis, Index nu, Index mu,
                     const Tolerance& tol) {
  const Index d = nu * mu;
  for (int attempt = 0; attempt < 8; ++attempt) {
    SeededRng rng(0x5EEDull + static_cast<std::uint64_t>(attempt));
    CMatrix zel = random_hermitian_in_span(rng, factor_basis);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(zel);
    const Eigen::VectorXd lam = es.eigenvalues();
    double scale = std::max(std::abs(lam(0)), std::abs(lam(d - 1)));
    auto ranges = cluster_ranges(lam, 1e-7 * std::max(1.0, scale));
    if (static_cast<Index>(ranges.size()) != nu) continue;

    std::vector<CMatrix> q;  // minimal projections, each of rank mu
    bool ok = true;
    for (auto [lo, hi] : ranges) {
      if (hi - lo != mu) ok = false;
      CMatrix p = CMatrix::Zero(d, d);
      for (Index i = lo; i < hi; ++i)
        p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      if (span_residual(p, factor_basis) > 100 * tol.cutoff(1.0)) ok = false;
      q.push_back(p);
    }
    if (!ok) continue;

    // Partial isometries u_i : q_0 -> q_i inside the factor, from a generic
    // element; q_i s q_0 has scalar "square" c q_0 in a factor.
    CMatrix s = random_element_in_span(rng, factor_basis);
    std::vector<CMatrix> u(static_cast<size_t>(nu));
    u[0] = q[0];
    for (Index i = 1; i < nu; ++i) {
      CMatrix b = q[static_cast<size_t>(i)] * s * q[0];
      double c = (b.adjoint() * b).trace().real() / static_cast<double>(mu);
      if (c < 1e-12 || max_abs(b.adjoint() * b - c * q[0]) > 1e-8 * std::max(1.0, c)) {
        ok = false;
        break;
      }
      u[static_cast<size_t>(i)] = b / std::sqrt(c);
    }
    if (!ok) continue;

    CMatrix f = range_isometry(q[0], mu);
    CMatrix v(d, d);
    for (Index i = 0; i < nu; ++i)
      for (Index j = 0; j < mu; ++j) v.col(i * mu + j) = u[static_cast<size_t>(i)] * f.col(j);
    if (max_abs(v.adjoint() * v - CMatrix::Identity(d, d)) > 1e-8) continue;
    return v;
  }
  throw DecompositionFailedError("factor_frame: could not split the factor");
}

}  // namespace

BlockStructure block_structure(const VNAlgebra& a, const Tolerance& tol) {
  BlockStructure out;
  for (const CMatrix& p : minimal_central_projections(a, tol)) {
    const Index d = static_cast<Index>(std::llround(p.trace().real()));
    CMatrix w = range_isometry(p, d);
    std::vector<CMatrix> compressed;
    compressed.reserve(a.basis.size());
    for (const auto& b : a.basis) compressed.push_back(w.adjoint() * b * w);
    std::vector<CMatrix> factor_basis = orthonormal_span(compressed, tol);

    const Index dimf = static_cast<Index>(factor_basis.size());
    const Index nu = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dimf))));
    if (nu * nu != dimf || d % nu != 0)
      throw DecompositionFailedError("block_structure: central block is not a factor");
    const Index mu = d / nu;

    CMatrix v = factor_frame(factor_basis, nu, mu, tol);
    CMatrix iso = w * v;

    // the frame must carry every compressed element onto c tensor 1_mu
    for (const auto& b : factor_basis) {
      CMatrix t = v.adjoint() * b * v;
      CMatrix c = CMatrix::Zero(nu, nu);
      for (Index i = 0; i < nu; ++i)
        for (Index j = 0; j < nu; ++j) {
          Complex acc = 0;
          for (Index s = 0; s < mu; ++s) acc += t(i * mu + s, j * mu + s);
          c(i, j) = acc / static_cast<double>(mu);
        }
      CMatrix model = CMatrix::Zero(d, d);
      for (Index i = 0; i < nu; ++i)
        for (Index j = 0; j < nu; ++j)
          for (Index s = 0; s < mu; ++s) model(i * mu + s, j * mu + s) = c(i, j);
      if (max_abs(t - model) > 1000 * tol.cutoff(max_abs(t)))
        throw DecompositionFailedError("block_structure: residual exceeds tolerance");
    }
    out.blocks.push_back(Block{nu, mu, iso});
  }
  if (out.algebra_dim() != a.dim())
    throw DecompositionFailedError("block_structure: dimension law violated");
  return out;
}

VNAlgebra random_algebra(std::uint64_t seed, Index ambient_budget) {
  SeededRng rng(seed);
  std::vector<std::pair<Index, Index>> blocks;
  Index remaining = ambient_budget;
  while (remaining >= 1) {
    if (!blocks.empty() && rng.uniform01() < 0.4) break;
    Index n = rng.integer(1, std::min<Index>(3, remaining));
    Index m = rng.integer(1, std::min<Index>(3, remaining / n));
    blocks.emplace_back(n, m);
    remaining -= n * m;
  }
  Index ambient = 0;
  for (auto [n, m] : blocks) ambient += n * m;
  CMatrix u = rng.haar_unitary(ambient);

  std::vector<CMatrix> basis;
  Index offset = 0;
  for (auto [n, m] : blocks) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        CMatrix b = CMatrix::Zero(ambient, ambient);
        for (Index s = 0; s < m; ++s) b(offset + i * m + s, offset + j * m + s) = norm;
        basis.push_back(u * b * u.adjoint());
      }
    offset += n * m;
  }
  return VNAlgebra{ambient, basis};
}

double algebra_distance(const VNAlgebra& a, const VNAlgebra& b) {
  if (a.ambient_dim != b.ambient_dim) return 2.0;
  return subspace_distance(a.basis, b.basis);
}

bool algebra_equal(const VNAlgebra& a, const VNAlgebra& b, const Tolerance& tol) {
  return algebra_distance(a, b) <= 100 * tol.cutoff(1.0);
}

}  // namespace vncorr
