#pragma once

// The integral side of the zero-count identity: the Crofton density
// omega_1 ^ ... ^ omega_n against Lebesgue measure, the Hermitian mixed volume,
// and checks that the volume functional is a homogeneous polynomial.
//
// Normalization: with omega = (i / 2 pi) d dbar P and P = log sum |f_a|^2,
//   omega_1 ^ ... ^ omega_n = (n! / pi^n) D(H_1, ..., H_n) dLeb(R^{2n}),
// where H_i is the complex Hessian of P_i and D the mixed discriminant. For
// n = 1 and the degree-d polynomial space this integrates over the disk of
// radius r to d r^2 / (1 + r^2), the expected number of zeros there. The
// prefactor n! / (2 pi)^n that sometimes appears in front of
// integral (dd^c log ...)^n corresponds to a dd^c convention with an extra
// factor 2 per dimension; the constant here is fixed by the oracle, not by
// that convention.

#include <span>
#include <vector>

#include "crofton/numerics.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/section_space.hpp"

namespace crofton {

/// kappa_n = n! / pi^n.
inline double crofton_constant(int n) { return factorial(n) / std::pow(kPi, n); }

namespace detail {

inline void validate_tuple(std::span<const SectionSpace> spaces) {
  const auto n = spaces.size();
  if (n == 0) throw InputError("crofton: need at least one section space");
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(spaces[i].dim()) != n) {
      throw InputError("crofton: space " + std::to_string(i) + " lives on C^" + std::to_string(spaces[i].dim()) +
                       " but the tuple has " + std::to_string(n) + " spaces");
    }
  }
}

inline void validate_domain(std::span<const SectionSpace> spaces, const Domain& domain) {
  if (domain.real_dim() != 2 * static_cast<int>(spaces.size())) {
    throw InputError("crofton: domain has real dimension " + std::to_string(domain.real_dim()) + ", expected " +
                     std::to_string(2 * spaces.size()));
  }
}

}  // namespace detail

/// (n!/pi^n) D(H_1(z), ..., H_n(z)); the coefficient of omega_1 ^ ... ^ omega_n
/// against Lebesgue measure on R^{2n}. Non-negative.
inline double crofton_density(std::span<const SectionSpace> spaces, const ComplexPoint& z) {
  detail::validate_tuple(spaces);
  std::vector<HermitianMatrix> hs;
  hs.reserve(spaces.size());
  for (const auto& s : spaces) hs.push_back(metric_hessian(s, z));
  const int n = static_cast<int>(spaces.size());
  return crofton_constant(n) * mixed_discriminant(hs);
}

/// Integral of the Crofton density over U: the predicted average number of
/// common zeros in U of n independent random sections.
inline QuadratureResult expected_zero_count_integral(std::span<const SectionSpace> spaces, const Domain& domain,
                                                     const QuadratureSpec& q) {
  detail::validate_tuple(spaces);
  detail::validate_domain(spaces, domain);
  return integrate([&](std::span<const double> x) { return crofton_density(spaces, ComplexPoint::from_real(x)); },
                   domain, q);
}

/// vol^H_{g_1..g_n}(U) = (1/n!) integral_U omega_1 ^ ... ^ omega_n.
inline QuadratureResult hermitian_mixed_volume(std::span<const SectionSpace> spaces, const Domain& domain,
                                               const QuadratureSpec& q) {
  QuadratureResult r = expected_zero_count_integral(spaces, domain, q);
  const double nf = factorial(static_cast<int>(spaces.size()));
  r.estimate /= nf;
  r.standard_error /= nf;
  return r;
}

struct PolynomialityReport {
  struct GridValue {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double volume = 0.0;
  };
  std::vector<GridValue> grid;
  // Least-squares fit volume ~ a l1^2 + b l1 l2 + c l2^2.
  double a = 0.0, b = 0.0, c = 0.0;
  double fit_residual = 0.0;          // ||F - fit|| / ||F||
  double polarization = 0.0;          // (F(1,1) - F(1,0) - F(0,1)) / 2
  double mixed_volume = 0.0;          // hermitian_mixed_volume(g1, g2)
  double polarization_error = 0.0;    // relative
  double homogeneity_error = 0.0;     // |F(2,0) - 4 F(1,0)| / |4 F(1,0)|
  bool pass = false;
};

inline constexpr double kPolynomialityResidualTol = 1e-3;
inline constexpr double kPolarizationTol = 1e-6;

/// Volume of U in the metric l1 g1 + l2 g2 on C^2: (1/2) integral (omega)^2 with
/// omega the form of l1 H1 + l2 H2, i.e. integral det(l1 H1 + l2 H2) / pi^2.
inline QuadratureResult combined_volume(const SectionSpace& g1, const SectionSpace& g2, double l1, double l2,
                                        const Domain& domain, const QuadratureSpec& q) {
  const int n = g1.dim();
  return integrate(
      [&](std::span<const double> x) {
        const ComplexPoint z = ComplexPoint::from_real(x);
        const HermitianMatrix h = l1 * metric_hessian(g1, z) + l2 * metric_hessian(g2, z);
        const HermitianMatrix hs[] = {h, h};
        return crofton_constant(n) * mixed_discriminant(std::span<const HermitianMatrix>(hs, 2)) / factorial(n);
      },
      domain, q);
}

/// Evaluates vol_U(l1 g1 + l2 g2) on `lambdas` x `lambdas`, fits a homogeneous
/// quadratic and checks polarization against the Hermitian mixed volume. All
/// integrals share the quadrature nodes of `q`.
inline PolynomialityReport check_volume_polynomiality(const SectionSpace& g1, const SectionSpace& g2,
                                                      const Domain& domain, std::span<const double> lambdas,
                                                      const QuadratureSpec& q) {
  if (g1.dim() != 2 || g2.dim() != 2) throw InputError("check_volume_polynomiality: spaces must live on C^2");
  if (domain.real_dim() != 4) throw InputError("check_volume_polynomiality: domain must be in C^2");
  if (lambdas.size() < 2) throw InputError("check_volume_polynomiality: need at least two grid values");
  for (double l : lambdas)
    if (!(l > 0.0)) throw InputError("check_volume_polynomiality: grid values must be positive");

  PolynomialityReport rep;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(lambdas.size() * lambdas.size()), 3);
  Eigen::VectorXd values(design.rows());
  Eigen::Index row = 0;
  for (double l1 : lambdas) {
    for (double l2 : lambdas) {
      const double v = combined_volume(g1, g2, l1, l2, domain, q).estimate;
      rep.grid.push_back({l1, l2, v});
      design.row(row) << l1 * l1, l1 * l2, l2 * l2;
      values[row] = v;
      ++row;
    }
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(values);
  rep.a = coef[0];
  rep.b = coef[1];
  rep.c = coef[2];
  const double norm = values.norm();
  rep.fit_residual = norm > 0.0 ? (design * coef - values).norm() / norm : 0.0;

  const double f11 = combined_volume(g1, g2, 1.0, 1.0, domain, q).estimate;
  const double f10 = combined_volume(g1, g2, 1.0, 0.0, domain, q).estimate;
  const double f01 = combined_volume(g1, g2, 0.0, 1.0, domain, q).estimate;
  const double f20 = combined_volume(g1, g2, 2.0, 0.0, domain, q).estimate;
  rep.polarization = 0.5 * (f11 - f10 - f01);
  const SectionSpace pair[] = {g1, g2};
  rep.mixed_volume = hermitian_mixed_volume(pair, domain, q).estimate;
  const double scale = std::max(std::abs(rep.mixed_volume), std::abs(rep.polarization));
  rep.polarization_error = scale > 0.0 ? std::abs(rep.polarization - rep.mixed_volume) / scale : 0.0;
  rep.homogeneity_error = f10 != 0.0 ? std::abs(f20 - 4.0 * f10) / std::abs(4.0 * f10) : std::abs(f20);
  rep.pass = rep.fit_residual < kPolynomialityResidualTol && rep.polarization_error < kPolarizationTol;
  return rep;
}

}  // namespace crofton
