#pragma once

// Dense univariate and bivariate complex polynomials: evaluation, companion
// matrix roots and the Sylvester resultant in the second variable.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "crofton/numerics.hpp"

namespace crofton::poly {

/// Coefficients in ascending order: p(x) = sum_k c[k] x^k.
using Univariate = std::vector<cplx>;

inline cplx evaluate(std::span<const cplx> c, cplx x) {
  cplx r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

inline double max_abs(std::span<const cplx> c) {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

/// Drops leading coefficients below rel_tol * max |c|. Returns the trimmed
/// copy; an all-zero input becomes empty.
inline Univariate trim_leading(Univariate c, double rel_tol) {
  const double m = max_abs(c);
  while (!c.empty() && std::abs(c.back()) <= rel_tol * m) c.pop_back();
  return c;
}

/// Number of lowest-order coefficients below rel_tol * max |c| (roots at 0).
inline std::size_t low_order_zeros(std::span<const cplx> c, double rel_tol) {
  const double m = max_abs(c);
  std::size_t k = 0;
  while (k < c.size() && std::abs(c[k]) <= rel_tol * m) ++k;
  return k;
}

/// All roots of a polynomial (leading coefficient must be nonzero), as the
/// eigenvalues of its companion matrix.
inline std::vector<cplx> roots(std::span<const cplx> c) {
  if (c.size() <= 1) return {};
  const auto deg = static_cast<Eigen::Index>(c.size() - 1);
  CMatrix comp = CMatrix::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return r;
}

/// Bivariate p(x, y) = sum coeff(i, j) x^i y^j with non-negative exponents.
struct Bivariate {
  CMatrix coeff;  // rows: powers of x, cols: powers of y

  int degree_x() const { return static_cast<int>(coeff.rows()) - 1; }
  int degree_y() const { return static_cast<int>(coeff.cols()) - 1; }

  cplx operator()(cplx x, cplx y) const {
    cplx r = 0.0;
    for (Eigen::Index i = coeff.rows() - 1; i >= 0; --i) {
      cplx row = 0.0;
      for (Eigen::Index j = coeff.cols() - 1; j >= 0; --j) row = row * y + coeff(i, j);
      r = r * x + row;
    }
    return r;
  }

  /// sum |coeff(i, j) x^i y^j|; the natural scale for relative residuals.
  double term_magnitude(cplx x, cplx y) const {
    double s = 0.0;
    const double ax = std::abs(x), ay = std::abs(y);
    for (Eigen::Index i = 0; i < coeff.rows(); ++i)
      for (Eigen::Index j = 0; j < coeff.cols(); ++j)
        s += std::abs(coeff(i, j)) * std::pow(ax, double(i)) * std::pow(ay, double(j));
    return s;
  }

  /// (dp/dx, dp/dy).
  std::pair<cplx, cplx> gradient(cplx x, cplx y) const {
    cplx dx = 0.0, dy = 0.0;
    for (Eigen::Index i = 0; i < coeff.rows(); ++i) {
      for (Eigen::Index j = 0; j < coeff.cols(); ++j) {
        const cplx c = coeff(i, j);
        if (i > 0) dx += c * double(i) * std::pow(x, double(i - 1)) * std::pow(y, double(j));
        if (j > 0) dy += c * double(j) * std::pow(x, double(i)) * std::pow(y, double(j - 1));
      }
    }
    return {dx, dy};
  }

  /// p(x0, y) as a polynomial in y.
  Univariate in_y(cplx x0) const {
    Univariate c(static_cast<std::size_t>(coeff.cols()), 0.0);
    for (Eigen::Index j = 0; j < coeff.cols(); ++j) {
      cplx v = 0.0;
      for (Eigen::Index i = coeff.rows() - 1; i >= 0; --i) v = v * x0 + coeff(i, j);
      c[static_cast<std::size_t>(j)] = v;
    }
    return c;
  }
};

/// Effective degree in y: highest column with a nonzero entry.
inline int effective_degree_y(const Bivariate& p) {
  for (Eigen::Index j = p.coeff.cols() - 1; j >= 0; --j)
    if (!p.coeff.col(j).isZero(0.0)) return static_cast<int>(j);
  return -1;
}

inline int effective_degree_x(const Bivariate& p) {
  for (Eigen::Index i = p.coeff.rows() - 1; i >= 0; --i)
    if (!p.coeff.row(i).isZero(0.0)) return static_cast<int>(i);
  return -1;
}

/// Sylvester matrix of two univariate polynomials with formal degrees m, k.
inline CMatrix sylvester(std::span<const cplx> a, int m, std::span<const cplx> b, int k) {
  const int size = m + k;
  CMatrix s = CMatrix::Zero(size, size);
  for (int r = 0; r < k; ++r)
    for (int j = 0; j <= m; ++j) s(r, r + j) = a[static_cast<std::size_t>(m - j)];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= k; ++j) s(k + r, r + j) = b[static_cast<std::size_t>(k - j)];
  return s;
}

struct Resultant {
  Univariate coeff;        // ascending powers of x
  bool identically_zero = false;
};

/// Res_y(p, q) as a polynomial in x, by evaluating the Sylvester determinant
/// at roots of unity and inverting the discrete Fourier transform.
inline Resultant resultant_in_y(const Bivariate& p, const Bivariate& q) {
  const int m = std::max(effective_degree_y(p), 0);
  const int k = std::max(effective_degree_y(q), 0);
  const int dp = std::max(effective_degree_x(p), 0);
  const int dq = std::max(effective_degree_x(q), 0);
  const int bound = k * dp + m * dq;
  const int count = bound + 1;
  std::vector<cplx> values(static_cast<std::size_t>(count));
  double worst_ratio = 0.0;
  for (int s = 0; s < count; ++s) {
    const cplx x = std::polar(1.0, 2.0 * kPi * s / count);
    Univariate a = p.in_y(x), b = q.in_y(x);
    a.resize(static_cast<std::size_t>(m) + 1, 0.0);
    b.resize(static_cast<std::size_t>(k) + 1, 0.0);
    if (m + k == 0) {
      values[static_cast<std::size_t>(s)] = 1.0;
      worst_ratio = 1.0;
      continue;
    }
    const CMatrix syl = sylvester(a, m, b, k);
    const cplx det = syl.determinant();
    double hadamard = 1.0;
    for (Eigen::Index r = 0; r < syl.rows(); ++r) hadamard *= syl.row(r).norm();
    values[static_cast<std::size_t>(s)] = det;
    if (hadamard > 0.0) worst_ratio = std::max(worst_ratio, std::abs(det) / hadamard);
  }
  Resultant res;
  res.coeff.assign(static_cast<std::size_t>(count), 0.0);
  for (int j = 0; j < count; ++j) {
    cplx acc = 0.0;
    for (int s = 0; s < count; ++s) acc += values[static_cast<std::size_t>(s)] * std::polar(1.0, -2.0 * kPi * double((j * s) % count) / count);
    res.coeff[static_cast<std::size_t>(j)] = acc / double(count);
  }
  res.identically_zero = worst_ratio < 1e-12;
  return res;
}

}  // namespace crofton::poly
