#pragma once

// Complex linear algebra shared by every module: points of C^n, Hermitian
// matrices and the mixed discriminant.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace crofton {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Bad argument shapes, non-finite inputs, malformed configuration.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every basis function of a section space vanishes at the probed point.
class BasePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature hit a non-finite density value.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerances used across the library.
namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsdRelative = 1e-9;
inline constexpr double kImagPart = 1e-10;
inline constexpr double kBasePoint = 1e-30;
}  // namespace tol

/// A point z = (z_1, ..., z_n) of C^n. Real coordinates are interleaved as
/// (Re z_1, Im z_1, Re z_2, Im z_2, ...).
class ComplexPoint {
 public:
  ComplexPoint() = default;
  explicit ComplexPoint(CVector coords) : coords_(std::move(coords)) {
    for (Eigen::Index j = 0; j < coords_.size(); ++j) {
      if (!std::isfinite(coords_[j].real()) || !std::isfinite(coords_[j].imag())) {
        throw InputError("ComplexPoint: non-finite coordinate " + std::to_string(j));
      }
    }
  }
  ComplexPoint(std::initializer_list<cplx> coords)
      : ComplexPoint(CVector(Eigen::Map<const CVector>(coords.begin(),
                                                        static_cast<Eigen::Index>(coords.size())))) {}

  static ComplexPoint from_real(std::span<const double> xy) {
    if (xy.size() % 2 != 0) throw InputError("ComplexPoint: odd number of real coordinates");
    CVector c(static_cast<Eigen::Index>(xy.size() / 2));
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = cplx(xy[2 * j], xy[2 * j + 1]);
    return ComplexPoint(std::move(c));
  }

  std::vector<double> to_real() const {
    std::vector<double> xy(2 * static_cast<std::size_t>(coords_.size()));
    for (Eigen::Index j = 0; j < coords_.size(); ++j) {
      xy[2 * j] = coords_[j].real();
      xy[2 * j + 1] = coords_[j].imag();
    }
    return xy;
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  const CVector& coords() const { return coords_; }
  cplx operator[](int j) const { return coords_[j]; }

 private:
  CVector coords_;
};

/// n x n complex Hermitian matrix. Construction checks conjugate symmetry to
/// 1e-12 (relative to the largest entry) and then symmetrizes exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m) {
    if (m.rows() != m.cols()) throw InputError("HermitianMatrix: matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= tol::kHermitian * scale)) {
      throw InputError("HermitianMatrix: conjugate-symmetry violated by " + std::to_string(asym));
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix zero(int n) { return HermitianMatrix(CMatrix::Zero(n, n)); }
  static HermitianMatrix identity(int n) { return HermitianMatrix(CMatrix::Identity(n, n)); }
  static HermitianMatrix diagonal(std::span<const double> d) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return HermitianMatrix(m);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int j, int k) const { return m_(j, k); }

  Eigen::VectorXd eigenvalues() const {
    if (m_.size() == 0) return {};
    return Eigen::SelfAdjointEigenSolver<CMatrix>(m_, Eigen::EigenvaluesOnly).eigenvalues();
  }

  /// Smallest eigenvalue >= -1e-9 * ||H||.
  bool is_psd() const {
    if (m_.size() == 0) return true;
    const double norm = m_.norm();
    return eigenvalues().minCoeff() >= -tol::kPsdRelative * norm;
  }

  double determinant() const { return m_.determinant().real(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw InputError("HermitianMatrix: dimension mismatch in sum");
    HermitianMatrix r;
    r.m_ = a.m_ + b.m_;
    return r;
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    HermitianMatrix r;
    r.m_ = s * a.m_;
    return r;
  }

 private:
  CMatrix m_;
};

/// Mixed discriminant D(H_1, ..., H_n), the symmetric multilinear
/// polarization of det with D(H, ..., H) = det H. Computed by inclusion-exclusion
/// over the 2^n - 1 nonempty subsets, so the cost is O(2^n n^3); fine for n <= 4.
inline double mixed_discriminant(std::span<const HermitianMatrix> hs) {
  const std::size_t n = hs.size();
  if (n == 0) throw InputError("mixed_discriminant: empty argument list");
  if (n > 20) throw InputError("mixed_discriminant: too many arguments");
  for (const auto& h : hs) {
    if (static_cast<std::size_t>(h.dim()) != n) {
      throw InputError("mixed_discriminant: expected " + std::to_string(n) + "x" + std::to_string(n) +
                       " matrices, got " + std::to_string(h.dim()));
    }
  }
  cplx acc = 0.0;
  double scale = 0.0;
  const auto en = static_cast<Eigen::Index>(n);
  CMatrix sum(en, en);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    sum.setZero();
    int size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum += hs[i].matrix();
        ++size;
      }
    }
    const cplx det = n == 1 ? sum(0, 0) : n == 2 ? sum(0, 0) * sum(1, 1) - sum(0, 1) * sum(1, 0) : sum.determinant();
    acc += ((n - size) % 2 == 0 ? 1.0 : -1.0) * det;
    scale = std::max(scale, std::abs(det));
  }
  double factorial = 1.0;
  for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<double>(k);
  if (std::abs(acc.imag()) > tol::kImagPart * std::max(1.0, scale)) {
    throw InputError("mixed_discriminant: imaginary part " + std::to_string(acc.imag()) +
                     " exceeds tolerance; inputs are not Hermitian");
  }
  return acc.real() / factorial;
}

inline double mixed_discriminant(std::initializer_list<HermitianMatrix> hs) {
  return mixed_discriminant(std::span<const HermitianMatrix>(hs.begin(), hs.size()));
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Volume of the unit ball in R^m.
inline double unit_ball_volume(int m) {
  return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

}  // namespace crofton
