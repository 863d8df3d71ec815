#pragma once

// Finite-dimensional Hermitian spaces of holomorphic functions on C^n, given
// by a basis that is declared orthonormal, and the pullback metric they induce:
// the Kähler potential P(z) = log sum_a |f_a(z)|^2 and its complex Hessian.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crofton/numerics.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/random.hpp"

namespace crofton {

/// An element lambda of the dual space (C^n)*, paired with z as
/// <z, lambda> = sum_j z_j lambda_j.
using SpectrumPoint = CVector;

inline SpectrumPoint real_spectrum_point(std::initializer_list<double> coords) {
  SpectrumPoint p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index j = 0;
  for (double c : coords) p[j++] = c;
  return p;
}

/// Basis values and gradients at a point, all multiplied by exp(-log_scale).
struct BasisJet {
  double log_scale = 0.0;
  CVector values;       // N
  CMatrix gradients;    // N x n, gradients(a, j) = d f_a / d z_j
};

class SectionSpace {
 public:
  enum class Kind { kExponentialSum, kKostlan, kExplicitBasis };

  struct BasisFunction {
    std::string label;
    std::function<cplx(const ComplexPoint&)> value;
    std::function<CVector(const ComplexPoint&)> gradient;
  };

  /// Exponential sums with the given support; basis e^{<z, lambda>}.
  static SectionSpace exponential_sum(std::vector<SpectrumPoint> support) {
    if (support.empty()) throw InputError("SectionSpace: support must be nonempty");
    const auto n = support.front().size();
    if (n < 1) throw InputError("SectionSpace: support points must have at least one coordinate");
    for (std::size_t a = 0; a < support.size(); ++a) {
      if (support[a].size() != n) throw InputError("SectionSpace: support points have mixed dimensions");
      if (!support[a].allFinite()) throw InputError("SectionSpace: non-finite support point");
      for (std::size_t b = 0; b < a; ++b) {
        if (support[a] == support[b]) {
          throw InputError("SectionSpace: duplicate support point " + std::to_string(a));
        }
      }
    }
    SectionSpace s;
    s.kind_ = Kind::kExponentialSum;
    s.n_ = static_cast<int>(n);
    s.support_ = std::move(support);
    return s;
  }

  /// Degree-d polynomials on C^1 with basis sqrt(C(d, k)) z^k, so that
  /// sum_k |f_k|^2 = (1 + |z|^2)^d.
  static SectionSpace kostlan(int degree) {
    if (degree < 0) throw InputError("SectionSpace: kostlan degree must be >= 0");
    SectionSpace s;
    s.kind_ = Kind::kKostlan;
    s.n_ = 1;
    s.degree_ = degree;
    return s;
  }

  /// User-supplied holomorphic basis with analytic gradients.
  static SectionSpace explicit_basis(int n, std::vector<BasisFunction> basis) {
    if (n < 1) throw InputError("SectionSpace: dimension must be >= 1");
    if (basis.empty()) throw InputError("SectionSpace: basis must be nonempty");
    for (const auto& f : basis) {
      if (!f.value || !f.gradient) throw InputError("SectionSpace: basis function '" + f.label + "' lacks value or gradient");
    }
    SectionSpace s;
    s.kind_ = Kind::kExplicitBasis;
    s.n_ = n;
    s.basis_ = std::make_shared<const std::vector<BasisFunction>>(std::move(basis));
    return s;
  }

  /// The same space with basis g_b = sum_a u(b, a) f_a. u must be unitary so
  /// the new basis is again orthonormal.
  SectionSpace with_basis_change(const CMatrix& u) const {
    if (u.rows() != size() || u.cols() != size()) throw InputError("SectionSpace: basis change has wrong shape");
    const double err = (u * u.adjoint() - CMatrix::Identity(size(), size())).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw InputError("SectionSpace: basis change is not unitary");
    SectionSpace s = *this;
    s.mixing_ = mixing_ ? CMatrix(u * *mixing_) : u;
    return s;
  }

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int size() const {
    switch (kind_) {
      case Kind::kExponentialSum: return static_cast<int>(support_.size());
      case Kind::kKostlan: return degree_ + 1;
      case Kind::kExplicitBasis: return static_cast<int>(basis_->size());
    }
    return 0;
  }
  int degree() const { return degree_; }
  const std::vector<SpectrumPoint>& support() const { return support_; }
  bool has_basis_change() const { return mixing_.has_value(); }

  /// Coefficients of a section with respect to the underlying basis (before
  /// any basis change), e.g. the monomial coefficients of an exponential sum.
  CVector raw_coefficients(const CVector& c) const { return mixing_ ? CVector(mixing_->transpose() * c) : c; }

  bool has_real_support() const {
    return kind_ == Kind::kExponentialSum &&
           std::all_of(support_.begin(), support_.end(), [](const auto& p) { return p.imag().isZero(0.0); });
  }

  bool has_integer_support() const {
    return has_real_support() && std::all_of(support_.begin(), support_.end(), [](const auto& p) {
             return (p.real().array() == p.real().array().round()).all();
           });
  }

  BasisJet jet(const ComplexPoint& z) const {
    if (z.dim() != n_) {
      throw InputError("SectionSpace: point has dimension " + std::to_string(z.dim()) + ", space has " +
                       std::to_string(n_));
    }
    BasisJet j = raw_jet(z);
    if (mixing_) {
      j.values = (*mixing_ * j.values).eval();
      j.gradients = (*mixing_ * j.gradients).eval();
    }
    return j;
  }

 private:
  BasisJet raw_jet(const ComplexPoint& z) const {
    const int count = size();
    BasisJet j;
    j.values.resize(count);
    j.gradients.resize(count, n_);
    switch (kind_) {
      case Kind::kExponentialSum: {
        std::vector<cplx> exponents(count);
        double top = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < count; ++a) {
          exponents[a] = (z.coords().array() * support_[a].array()).sum();
          top = std::max(top, exponents[a].real());
        }
        j.log_scale = top;
        for (int a = 0; a < count; ++a) {
          j.values[a] = std::exp(exponents[a] - top);
          j.gradients.row(a) = (support_[a] * j.values[a]).transpose();
        }
        break;
      }
      case Kind::kKostlan: {
        const cplx w = z[0];
        const double s = std::max(1.0, std::abs(w));
        j.log_scale = degree_ * std::log(s);
        const cplx ws = w / s;
        for (int k = 0; k <= degree_; ++k) {
          const double weight = std::sqrt(binomial(degree_, k));
          j.values[k] = weight * std::pow(ws, k) / std::pow(s, degree_ - k);
          j.gradients(k, 0) = k == 0 ? cplx(0.0) : weight * double(k) * std::pow(ws, k - 1) / std::pow(s, degree_ - k + 1);
        }
        break;
      }
      case Kind::kExplicitBasis: {
        for (int a = 0; a < count; ++a) {
          j.values[a] = (*basis_)[a].value(z);
          const CVector g = (*basis_)[a].gradient(z);
          if (g.size() != n_) throw InputError("SectionSpace: gradient of '" + (*basis_)[a].label + "' has wrong size");
          j.gradients.row(a) = g.transpose();
        }
        break;
      }
    }
    return j;
  }

  static double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

  Kind kind_ = Kind::kExponentialSum;
  int n_ = 0;
  int degree_ = 0;
  std::vector<SpectrumPoint> support_;
  std::shared_ptr<const std::vector<BasisFunction>> basis_;
  std::optional<CMatrix> mixing_;
};

inline const char* to_string(SectionSpace::Kind k) {
  switch (k) {
    case SectionSpace::Kind::kExponentialSum: return "exponential-sum";
    case SectionSpace::Kind::kKostlan: return "kostlan";
    case SectionSpace::Kind::kExplicitBasis: return "explicit-basis";
  }
  return "?";
}

/// f = sum_a c_a f_a. Only the projective class of the coefficients matters
/// for zero counting.
class Section {
 public:
  Section(SectionSpace space, CVector coefficients) : space_(std::move(space)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != space_.size()) throw InputError("Section: coefficient count does not match the space");
    if (!coeffs_.allFinite()) throw InputError("Section: non-finite coefficient");
    if (coeffs_.isZero(0.0)) throw InputError("Section: coefficients are all zero");
  }

  const SectionSpace& space() const { return space_; }
  const CVector& coefficients() const { return coeffs_; }

 private:
  SectionSpace space_;
  CVector coeffs_;
};

/// A complex number stored as mantissa * exp(log_scale) so that large
/// exponential sums never overflow.
struct ScaledComplex {
  cplx mantissa;
  double log_scale = 0.0;
  /// sum_a |c_a f_a| in the same scale; |mantissa| / term_magnitude measures cancellation.
  double term_magnitude = 0.0;

  cplx value() const { return mantissa * std::exp(log_scale); }
};

inline ScaledComplex evaluate(const Section& s, const ComplexPoint& z) {
  const BasisJet j = s.space().jet(z);
  ScaledComplex r;
  r.log_scale = j.log_scale;
  r.mantissa = (s.coefficients().array() * j.values.array()).sum();
  r.term_magnitude = (s.coefficients().array() * j.values.array()).abs().sum();
  return r;
}

/// Partial derivatives d f / d z_j.
inline CVector evaluate_gradient(const Section& s, const ComplexPoint& z) {
  const BasisJet j = s.space().jet(z);
  return (j.gradients.transpose() * s.coefficients()) * std::exp(j.log_scale);
}

/// Q(z) = sum_a |f_a(z)|^2 relative to the basis scale exp(2 log_scale).
inline double basis_norm_squared(const SectionSpace& space, const ComplexPoint& z) {
  return space.jet(z).values.squaredNorm();
}

inline void require_base_point_free(const BasisJet& j, const ComplexPoint& z) {
  const double q = j.values.squaredNorm();
  if (!(q > tol::kBasePoint)) {
    std::string where;
    for (int k = 0; k < z.dim(); ++k) {
      where += (k ? ", " : "") + std::to_string(z[k].real()) + (z[k].imag() < 0 ? "" : "+") + std::to_string(z[k].imag()) + "i";
    }
    throw BasePointError("all basis functions vanish at z = (" + where + ")");
  }
}

/// P(z) = log sum_a |f_a(z)|^2.
inline double potential(const SectionSpace& space, const ComplexPoint& z) {
  const BasisJet j = space.jet(z);
  require_base_point_free(j, z);
  return 2.0 * j.log_scale + std::log(j.values.squaredNorm());
}

/// H_{jk} = d^2 P / dz_j dzbar_k = (A_{jk} Q - B_j conj(B_k)) / Q^2 with
/// Q = sum |f_a|^2, B_j = sum conj(f_a) d_j f_a, A_{jk} = sum d_j f_a conj(d_k f_a).
/// Homogeneous of degree 0 in the basis scale, so the max-factored jet is used as is.
inline HermitianMatrix metric_hessian(const SectionSpace& space, const ComplexPoint& z) {
  const BasisJet j = space.jet(z);
  require_base_point_free(j, z);
  const double q = j.values.squaredNorm();
  const CMatrix a = j.gradients.transpose() * j.gradients.conjugate();
  const CVector b = j.gradients.transpose() * j.values.conjugate();
  CMatrix h = (a * q - b * b.adjoint()) / (q * q);
  return HermitianMatrix(0.5 * (h + h.adjoint()));
}

/// Central finite differences of the potential; cross-check only.
inline HermitianMatrix metric_hessian_finite_difference(const SectionSpace& space, const ComplexPoint& z,
                                                        double step = 1e-4) {
  const int n = space.dim();
  const std::vector<double> base = z.to_real();
  auto p = [&](int i, double di, int k, double dk) {
    std::vector<double> x = base;
    x[i] += di;
    x[k] += dk;
    return potential(space, ComplexPoint::from_real(x));
  };
  auto second = [&](int i, int k) {
    if (i == k) {
      return (p(i, step, i, 0.0) - 2.0 * p(i, 0.0, i, 0.0) + p(i, -step, i, 0.0)) / (step * step);
    }
    return (p(i, step, k, step) - p(i, step, k, -step) - p(i, -step, k, step) + p(i, -step, k, -step)) /
           (4.0 * step * step);
  };
  CMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
      h(j, k) = 0.25 * cplx(second(xj, xk) + second(yj, yk), second(xj, yk) - second(yj, xk));
    }
  }
  return HermitianMatrix(0.5 * (h + h.adjoint()));
}

/// Random section distributed by the normalized Fubini-Study measure on P(V):
/// i.i.d. standard complex Gaussian coefficients in the orthonormal basis,
/// whose projectivization is unitarily invariant.
inline Section sample_section(const SectionSpace& space, RandomStream& stream) {
  return Section(space, sample_complex_gaussian(stream, space.size()));
}

struct BasePointVerdict {
  bool pass = false;
  double min_norm_squared = 0.0;
  ComplexPoint argmin;
};

/// Probes Q(z) (relative to the basis scale) at the domain center, at
/// Halton points of the domain and along a pattern search from the best
/// probe. Fails if the minimum is <= 1e-30.
inline BasePointVerdict check_base_point_free(const SectionSpace& space, const Domain& domain, int probe_count) {
  if (domain.complex_dim() != space.dim()) throw InputError("check_base_point_free: domain dimension mismatch");
  const int m = domain.real_dim();
  const auto bb = domain.bounding_box();
  auto q_at = [&](const std::vector<double>& x) { return basis_norm_squared(space, ComplexPoint::from_real(x)); };

  std::vector<double> best = domain.is_ball() ? domain.center() : std::vector<double>(m);
  if (!domain.is_ball())
    for (int k = 0; k < m; ++k) best[k] = 0.5 * (bb[k].first + bb[k].second);
  double best_q = q_at(best);
  std::vector<double> x(m);
  for (int i = 1; i <= probe_count; ++i) {
    for (int k = 0; k < m; ++k) {
      x[k] = bb[k].first + (bb[k].second - bb[k].first) * detail::radical_inverse(static_cast<std::uint64_t>(i), detail::kPrimes[k]);
    }
    if (!domain.contains(x)) continue;
    const double q = q_at(x);
    if (q < best_q) {
      best_q = q;
      best = x;
    }
  }
  double step = 0.25 * (bb[0].second - bb[0].first);
  for (int iter = 0; iter < 200 && best_q > tol::kBasePoint && step > 1e-18; ++iter) {
    bool improved = false;
    for (int k = 0; k < m && !improved; ++k) {
      for (double dir : {1.0, -1.0}) {
        x = best;
        x[k] += dir * step;
        if (!domain.contains(x)) continue;
        const double q = q_at(x);
        if (q < best_q) {
          best_q = q;
          best = x;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best_q > tol::kBasePoint, best_q, ComplexPoint::from_real(best)};
}

}  // namespace crofton
