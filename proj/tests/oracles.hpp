#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crofton/numerics.hpp"
#include "crofton/random.hpp"
#include "crofton/section_space.hpp"

namespace oracle {

using crofton::cplx;
using crofton::CMatrix;
using crofton::CVector;
using crofton::kPi;

inline CMatrix random_complex_matrix(crofton::RandomStream& rs, int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rs.complex_gaussian();
  return m;
}

inline crofton::HermitianMatrix random_hermitian(crofton::RandomStream& rs, int n) {
  const CMatrix m = random_complex_matrix(rs, n);
  return crofton::HermitianMatrix(0.5 * (m + m.adjoint()));
}

inline crofton::HermitianMatrix random_psd(crofton::RandomStream& rs, int n) {
  const CMatrix m = random_complex_matrix(rs, n);
  return crofton::HermitianMatrix(m * m.adjoint());
}

inline CMatrix random_unitary(crofton::RandomStream& rs, int n) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex_matrix(rs, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

/// Zeros of a + b e^{lambda z} in the open disk |z - c| < r, by listing the
/// lattice z_k = (log(-a/b) + 2 pi i k) / lambda. Sets *margin to the smallest
/// distance of a zero to the circle.
inline int two_term_zero_count(cplx a, cplx b, cplx lambda, cplx c, double r, double* margin = nullptr) {
  const cplx base = std::log(-a / b);
  const double reach = std::abs(lambda) * r;
  const cplx shifted = lambda * c - base;  // zeros: |2 pi i k - shifted| < reach
  const auto lo = static_cast<long>(std::floor((shifted.imag() - reach) / (2 * kPi))) - 1;
  const auto hi = static_cast<long>(std::ceil((shifted.imag() + reach) / (2 * kPi))) + 1;
  int count = 0;
  double m = std::numeric_limits<double>::infinity();
  for (long k = lo; k <= hi; ++k) {
    const cplx z = (base + cplx(0.0, 2 * kPi * static_cast<double>(k))) / lambda;
    const double d = std::abs(z - c);
    m = std::min(m, std::abs(d - r));
    if (d < r) ++count;
  }
  if (margin) *margin = m;
  return count;
}

/// Common zeros of two sections on C^2 inside the ball |z - c| < r by Newton's
/// method started from every node of a grid covering the ball, followed by
/// deduplication. Slow; meant for small systems.
struct BruteForceResult {
  std::vector<CVector> zeros;
  double margin = 0.0;   // smallest | |z - c| - r | over zeros found near the ball
};

inline BruteForceResult brute_force_zeros_2d(const crofton::Section& s1, const crofton::Section& s2,
                                             const CVector& center, double r, double spacing) {
  BruteForceResult out;
  out.margin = std::numeric_limits<double>::infinity();
  const double reach = r + spacing;
  const int steps = static_cast<int>(std::ceil(2 * reach / spacing));
  std::vector<CVector> found;
  auto newton = [&](CVector z) -> std::optional<CVector> {
    for (int it = 0; it < 60; ++it) {
      const crofton::ComplexPoint p(z);
      const cplx f1 = crofton::evaluate(s1, p).value(), f2 = crofton::evaluate(s2, p).value();
      const CVector g1 = crofton::evaluate_gradient(s1, p), g2 = crofton::evaluate_gradient(s2, p);
      Eigen::Matrix2cd j;
      j << g1[0], g1[1], g2[0], g2[1];
      const cplx det = j.determinant();
      if (std::abs(det) < 1e-300) return std::nullopt;
      const Eigen::Vector2cd step = j.inverse() * Eigen::Vector2cd(f1, f2);
      z -= step;
      if (!z.allFinite() || (z - center).norm() > 3 * r + 10) return std::nullopt;
      if (step.norm() < 1e-13 * (1 + z.norm())) break;
    }
    const crofton::ComplexPoint p(z);
    const auto e1 = crofton::evaluate(s1, p), e2 = crofton::evaluate(s2, p);
    if (std::abs(e1.mantissa) > 1e-10 * e1.term_magnitude || std::abs(e2.mantissa) > 1e-10 * e2.term_magnitude) {
      return std::nullopt;
    }
    return z;
  };
  std::vector<double> axis(static_cast<std::size_t>(steps + 1));
  for (int i = 0; i <= steps; ++i) axis[static_cast<std::size_t>(i)] = -reach + i * spacing;
  for (double x0 : axis)
    for (double y0 : axis)
      for (double x1 : axis)
        for (double y1 : axis) {
          if (x0 * x0 + y0 * y0 + x1 * x1 + y1 * y1 > reach * reach) continue;
          CVector z(2);
          z << center[0] + cplx(x0, y0), center[1] + cplx(x1, y1);
          const auto root = newton(z);
          if (!root) continue;
          const double d = (*root - center).norm();
          if (d > r + 1.0) continue;
          const bool dup = std::any_of(found.begin(), found.end(), [&](const CVector& q) { return (q - *root).norm() < 1e-6; });
          if (!dup) found.push_back(*root);
        }
  for (const auto& z : found) {
    const double d = (z - center).norm();
    out.margin = std::min(out.margin, std::abs(d - r));
    if (d < r) out.zeros.push_back(z);
  }
  return out;
}

/// A random integer support of the given size drawn from {0..2} x {0..2},
/// always containing the origin.
inline std::vector<crofton::SpectrumPoint> random_small_support(crofton::RandomStream& rs, int size) {
  std::vector<std::pair<int, int>> grid;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      if (a + b > 0 && a + b <= 2) grid.push_back({a, b});
  for (std::size_t i = grid.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rs.next_u64() % (i + 1));
    std::swap(grid[i], grid[j]);
  }
  std::vector<crofton::SpectrumPoint> s{crofton::real_spectrum_point({0, 0})};
  for (int i = 0; i + 1 < size; ++i) {
    s.push_back(crofton::real_spectrum_point({double(grid[static_cast<std::size_t>(i)].first),
                                              double(grid[static_cast<std::size_t>(i)].second)}));
  }
  return s;
}

}  // namespace oracle
