#ifndef VNCORR_RNG_HPP
#define VNCORR_RNG_HPP

#include "vncorr/numkit.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <random>

namespace vncorr {

/// Seed-deterministic random source. Draws are derived from raw engine words
/// only, so a fixed seed reproduces identical values on every run.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t word;
    do {
      word = engine_();
    } while (word >= limit);
    return lo + static_cast<std::int64_t>(word % span);
  }

  double gaussian() {
    // Box-Muller on engine words; deterministic across platforms.
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Complex complex_gaussian() {
    double re = gaussian(), im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
  }

  CMatrix gaussian_matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
    return m;
  }

  /// Haar-distributed unitary via QR of a complex Ginibre matrix with the
  /// usual phase fix on the diagonal of R.
  CMatrix haar_unitary(Index n) {
    CMatrix z = gaussian_matrix(n, n);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
      Complex d = r(i, i);
      double a = std::abs(d);
      q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vncorr

#endif
