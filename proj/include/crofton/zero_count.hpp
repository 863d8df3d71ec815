#pragma once

// Counting isolated common zeros of sampled sections in a domain, and the
// Monte Carlo average of that count.
//
// n = 1: winding number of s along the boundary circle (argument principle).
// n = 2: exponential sums with integer spectra are Laurent polynomials in
//        w = (e^{z_1}, e^{z_2}); their common roots in the torus are found by a
//        resultant and each one lifts to the lattice log w + 2 pi i Z^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crofton/numerics.hpp"
#include "crofton/polynomial.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/random.hpp"
#include "crofton/section_space.hpp"

namespace crofton {

struct ZeroCountSample {
  int count = 0;
  /// Smallest observed distance to trouble: |s| / sum|c_a f_a| on the
  /// contour for n = 1, distance of a lifted root to the sphere for n = 2.
  double boundary_margin = 0.0;
  bool rejected = false;
  std::string reason;
};

struct AverageZeroEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t sample_count = 0;    // accepted samples
  std::uint64_t rejected_count = 0;
  bool valid = true;                 // rejected / attempted < 1%
};

inline constexpr double kBoundaryMarginEps = 1e-8;
inline constexpr double kRejectionBudget = 0.01;

// ---------------------------------------------------------------------------
// n = 1

namespace detail {

/// Rough number of oscillations of a section along a circle of radius r; sets
/// the initial contour resolution.
inline double contour_bandwidth(const SectionSpace& space, double r) {
  switch (space.kind()) {
    case SectionSpace::Kind::kExponentialSum: {
      double top = 0.0;
      for (const auto& l : space.support()) top = std::max(top, std::abs(l[0]));
      return r * top;
    }
    case SectionSpace::Kind::kKostlan: return space.degree();
    case SectionSpace::Kind::kExplicitBasis: return 16.0;
  }
  return 16.0;
}

}  // namespace detail

/// Winding number of s around the boundary of a disk, by adaptive phase
/// tracking: each arc is bisected until the phase step between its endpoints
/// is below pi/2. Counts zeros with multiplicity. Rejects when
/// |s| <= eps * sum_a |c_a f_a| at a boundary node (a zero too close to the
/// circle) or when the recursion cannot resolve the phase.
inline ZeroCountSample count_zeros_argument_principle(const Section& s, const Domain& disk,
                                                      double eps = kBoundaryMarginEps) {
  if (s.space().dim() != 1) throw InputError("count_zeros_argument_principle: section must live on C^1");
  if (!disk.is_ball() || disk.real_dim() != 2) throw InputError("count_zeros_argument_principle: domain must be a disk");

  const cplx center(disk.center()[0], disk.center()[1]);
  const double r = disk.radius();
  ZeroCountSample out;
  out.boundary_margin = std::numeric_limits<double>::infinity();

  auto eval = [&](double theta) -> std::optional<cplx> {
    const ScaledComplex v = evaluate(s, ComplexPoint{center + std::polar(r, theta)});
    const double margin = v.term_magnitude > 0.0 ? std::abs(v.mantissa) / v.term_magnitude : 0.0;
    out.boundary_margin = std::min(out.boundary_margin, margin);
    if (!(margin > eps)) return std::nullopt;
    return v.mantissa / std::abs(v.mantissa);
  };

  const int initial = 64 + 16 * static_cast<int>(std::ceil(detail::contour_bandwidth(s.space(), r)));
  constexpr int kMaxDepth = 40;
  struct Arc {
    double a, b;
    cplx fa, fb;
    int depth;
  };

  double total_phase = 0.0;
  std::optional<cplx> first = eval(0.0);
  if (!first) {
    out.rejected = true;
    out.reason = "zero on boundary";
    return out;
  }
  cplx prev = *first;
  std::vector<Arc> stack;
  for (int k = 0; k < initial; ++k) {
    const double a = 2.0 * kPi * k / initial;
    const double b = 2.0 * kPi * (k + 1) / initial;
    std::optional<cplx> fb = k + 1 == initial ? first : eval(b);
    if (!fb) {
      out.rejected = true;
      out.reason = "zero on boundary";
      return out;
    }
    stack.push_back({a, b, prev, *fb, 0});
    while (!stack.empty()) {
      Arc arc = stack.back();
      stack.pop_back();
      const double step = std::arg(arc.fb * std::conj(arc.fa));
      if (std::abs(step) < 0.5 * kPi) {
        total_phase += step;
        continue;
      }
      if (arc.depth >= kMaxDepth) {
        out.rejected = true;
        out.reason = "phase not resolved";
        return out;
      }
      const double mid = 0.5 * (arc.a + arc.b);
      std::optional<cplx> fm = eval(mid);
      if (!fm) {
        out.rejected = true;
        out.reason = "zero on boundary";
        return out;
      }
      // Right half pushed first so the left half is processed first.
      stack.push_back({mid, arc.b, *fm, arc.fb, arc.depth + 1});
      stack.push_back({arc.a, mid, arc.fa, *fm, arc.depth + 1});
    }
    prev = *fb;
  }
  const double winding = total_phase / (2.0 * kPi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 1e-6) {
    out.rejected = true;
    out.reason = "non-integer winding";
    return out;
  }
  out.count = static_cast<int>(rounded);
  return out;
}

// ---------------------------------------------------------------------------
// n = 2

struct TorusRoot {
  cplx w1, w2;
  double residual = 0.0;  // max relative residual of the two equations
};

struct LaurentSolution {
  std::vector<TorusRoot> roots;
  bool rejected = false;
  std::string reason;
};

inline constexpr int kMaxLaurentSupport = 12;

namespace detail {

/// Clears monomial denominators: p(w) = w^{-min} f(w), scaled to unit max
/// coefficient. Exponents come from the integer support.
inline poly::Bivariate laurent_to_polynomial(const Section& s) {
  const SectionSpace& space = s.space();
  if (!space.has_integer_support() || space.dim() != 2) {
    throw InputError("Laurent solver: sections must be exponential sums on C^2 with integer spectra");
  }
  if (space.size() > kMaxLaurentSupport) {
    throw InputError("Laurent solver: support size " + std::to_string(space.size()) + " exceeds the cap of " +
                     std::to_string(kMaxLaurentSupport));
  }
  const CVector c = space.raw_coefficients(s.coefficients());
  long min1 = std::numeric_limits<long>::max(), min2 = min1, max1 = std::numeric_limits<long>::min(), max2 = max1;
  for (const auto& l : space.support()) {
    const long e1 = std::lround(l[0].real()), e2 = std::lround(l[1].real());
    min1 = std::min(min1, e1);
    max1 = std::max(max1, e1);
    min2 = std::min(min2, e2);
    max2 = std::max(max2, e2);
  }
  poly::Bivariate p;
  p.coeff = CMatrix::Zero(max1 - min1 + 1, max2 - min2 + 1);
  for (std::size_t a = 0; a < space.support().size(); ++a) {
    const auto& l = space.support()[a];
    p.coeff(std::lround(l[0].real()) - min1, std::lround(l[1].real()) - min2) += c[static_cast<Eigen::Index>(a)];
  }
  const double top = p.coeff.cwiseAbs().maxCoeff();
  if (top > 0.0) p.coeff /= top;
  return p;
}

inline double relative_residual(const poly::Bivariate& p, cplx w1, cplx w2) {
  const double mag = p.term_magnitude(w1, w2);
  return mag > 0.0 ? std::abs(p(w1, w2)) / mag : std::abs(p(w1, w2));
}

/// Newton steps on (p, q) in the torus coordinates.
inline void newton_polish(const poly::Bivariate& p, const poly::Bivariate& q, cplx& w1, cplx& w2, int iters) {
  for (int it = 0; it < iters; ++it) {
    const cplx f1 = p(w1, w2), f2 = q(w1, w2);
    const auto [p1, p2] = p.gradient(w1, w2);
    const auto [q1, q2] = q.gradient(w1, w2);
    const cplx det = p1 * q2 - p2 * q1;
    if (std::abs(det) == 0.0) return;
    const cplx d1 = (f1 * q2 - f2 * p2) / det;
    const cplx d2 = (p1 * f2 - q1 * f1) / det;
    w1 -= d1;
    w2 -= d2;
    if (std::abs(d1) + std::abs(d2) < 1e-15 * (std::abs(w1) + std::abs(w2))) return;
  }
}

}  // namespace detail

inline constexpr double kTorusBound = 1e12;
inline constexpr double kRootResidualTol = 1e-8;

/// All common roots in (C*)^2 of two Laurent polynomials given as exponential
/// sums with integer spectra on C^2.
///  1. clear denominators;
///  2. resultant in w2, its roots w1 from a companion matrix;
///  3. for each distinct w1 the w2 roots of one equation, filtered against
///     the other and polished by Newton; kept if the residual is < 1e-8.
/// Rejects degenerate systems (identically vanishing resultant, non-isolated
/// solutions) and roots with |w| outside [1e-12, 1e12].
inline LaurentSolution solve_laurent_2d(const Section& s1, const Section& s2) {
  const poly::Bivariate p = detail::laurent_to_polynomial(s1);
  const poly::Bivariate q = detail::laurent_to_polynomial(s2);
  LaurentSolution sol;
  auto reject = [&](std::string why) {
    sol.rejected = true;
    sol.reason = std::move(why);
    sol.roots.clear();
    return sol;
  };

  const poly::Resultant res = poly::resultant_in_y(p, q);
  if (res.identically_zero) return reject("degenerate system: resultant vanishes identically");

  constexpr double kTrim = 1e-11;
  poly::Univariate r = poly::trim_leading(res.coeff, kTrim);
  const std::size_t zeros_at_origin = poly::low_order_zeros(r, kTrim);
  r.erase(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin));
  const std::vector<cplx> w1_roots = poly::roots(r);

  // Distinct w1 values.
  std::vector<cplx> distinct;
  for (const cplx& w : w1_roots) {
    if (!(std::abs(w) >= 1.0 / kTorusBound && std::abs(w) <= kTorusBound)) {
      return reject("ill-conditioned lift: |w1| out of range");
    }
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const cplx& d) {
      return std::abs(d - w) <= 1e-6 * std::max(1.0, std::abs(w));
    });
    if (!seen) distinct.push_back(w);
  }

  for (const cplx& w1 : distinct) {
    poly::Univariate a = p.in_y(w1), b = q.in_y(w1);
    const double amax = poly::max_abs(a) / std::max(1e-300, p.term_magnitude(std::abs(w1), 1.0));
    const double bmax = poly::max_abs(b) / std::max(1e-300, q.term_magnitude(std::abs(w1), 1.0));
    constexpr double kVanish = 1e-9;
    if (amax < kVanish && bmax < kVanish) return reject("non-isolated solutions");
    const poly::Univariate& primary = amax >= bmax ? a : b;
    poly::Univariate trimmed = poly::trim_leading(primary, kTrim);
    const std::size_t z0 = poly::low_order_zeros(trimmed, kTrim);
    trimmed.erase(trimmed.begin(), trimmed.begin() + static_cast<std::ptrdiff_t>(z0));
    for (cplx w2 : poly::roots(trimmed)) {
      cplx x1 = w1;
      if (detail::relative_residual(p, x1, w2) > 1e-4 || detail::relative_residual(q, x1, w2) > 1e-4) continue;
      detail::newton_polish(p, q, x1, w2, 8);
      const double resid = std::max(detail::relative_residual(p, x1, w2), detail::relative_residual(q, x1, w2));
      if (resid > kRootResidualTol) continue;
      if (!(std::abs(w2) >= 1.0 / kTorusBound && std::abs(w2) <= kTorusBound)) {
        return reject("ill-conditioned lift: |w2| out of range");
      }
      const bool dup = std::any_of(sol.roots.begin(), sol.roots.end(), [&](const TorusRoot& t) {
        return std::abs(t.w1 - x1) <= 1e-8 * std::max(1.0, std::abs(x1)) &&
               std::abs(t.w2 - w2) <= 1e-8 * std::max(1.0, std::abs(w2));
      });
      if (!dup) sol.roots.push_back({x1, w2, resid});
    }
  }
  return sol;
}

/// Points z = (log w1 + 2 pi i a, log w2 + 2 pi i b), (a, b) in Z^2, lying in
/// the ball. Also reports the smallest distance of any lift to the sphere.
inline std::vector<ComplexPoint> lift_to_ball(const TorusRoot& root, const Domain& ball, double* margin = nullptr) {
  const cplx c1(ball.center()[0], ball.center()[1]);
  const cplx c2(ball.center()[2], ball.center()[3]);
  const double r = ball.radius();
  const cplx l1 = std::log(root.w1) - c1;
  const cplx l2 = std::log(root.w2) - c2;
  const double two_pi = 2.0 * kPi;
  std::vector<ComplexPoint> inside;
  // Scan one lattice period beyond the radius to also measure the margin.
  const double reach = r + two_pi;
  const double u1 = l1.real(), u2 = l2.real();
  if (u1 * u1 + u2 * u2 > reach * reach) return inside;
  const long a_lo = static_cast<long>(std::floor((-reach - l1.imag()) / two_pi));
  const long a_hi = static_cast<long>(std::ceil((reach - l1.imag()) / two_pi));
  const long b_lo = static_cast<long>(std::floor((-reach - l2.imag()) / two_pi));
  const long b_hi = static_cast<long>(std::ceil((reach - l2.imag()) / two_pi));
  for (long a = a_lo; a <= a_hi; ++a) {
    for (long b = b_lo; b <= b_hi; ++b) {
      const cplx z1 = l1 + cplx(0.0, two_pi * double(a));
      const cplx z2 = l2 + cplx(0.0, two_pi * double(b));
      const double dist = std::sqrt(std::norm(z1) + std::norm(z2));
      if (margin) *margin = std::min(*margin, std::abs(dist - r));
      if (dist < r) inside.push_back(ComplexPoint{z1 + c1, z2 + c2});
    }
  }
  return inside;
}

/// Number of common zeros in a ball of C^2 of two exponential sums with
/// integer spectra.
inline ZeroCountSample count_zeros_laurent_2d(const Section& s1, const Section& s2, const Domain& ball) {
  if (!ball.is_ball() || ball.real_dim() != 4) throw InputError("count_zeros_laurent_2d: domain must be a ball in C^2");
  ZeroCountSample out;
  const LaurentSolution sol = solve_laurent_2d(s1, s2);
  if (sol.rejected) {
    out.rejected = true;
    out.reason = sol.reason;
    return out;
  }
  double margin = std::numeric_limits<double>::infinity();
  for (const TorusRoot& root : sol.roots) out.count += static_cast<int>(lift_to_ball(root, ball, &margin).size());
  out.boundary_margin = margin;
  if (margin <= kBoundaryMarginEps * ball.radius()) {
    out.rejected = true;
    out.reason = "zero on boundary";
    out.count = 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo average

/// Draws one independent section per space from `stream` and counts their
/// common zeros in U.
inline ZeroCountSample count_common_zeros(std::span<const SectionSpace> spaces, const Domain& domain,
                                          RandomStream& stream) {
  if (spaces.size() == 1) {
    return count_zeros_argument_principle(sample_section(spaces[0], stream), domain);
  }
  const Section s1 = sample_section(spaces[0], stream);
  const Section s2 = sample_section(spaces[1], stream);
  return count_zeros_laurent_2d(s1, s2, domain);
}

/// Mean number of common zeros in U over `sample_count` accepted draws from
/// the product of Fubini-Study measures. Draw i uses stream.derive(i);
/// rejected draws are tallied and replaced by further indices. The estimate
/// is flagged invalid when rejections reach 1% of attempts.
inline AverageZeroEstimate estimate_average_zeros(std::span<const SectionSpace> spaces, const Domain& domain,
                                                  std::uint64_t sample_count, const RandomStream& stream) {
  const auto n = spaces.size();
  if (n != 1 && n != 2) throw InputError("estimate_average_zeros: only n = 1 and n = 2 are supported");
  if (sample_count < 1) throw InputError("estimate_average_zeros: sample_count must be >= 1");
  for (const auto& s : spaces) {
    if (static_cast<std::size_t>(s.dim()) != n) throw InputError("estimate_average_zeros: space dimension mismatch");
    if (n == 2 && !s.has_integer_support()) {
      throw InputError("estimate_average_zeros: n = 2 requires exponential sums with integer spectra");
    }
  }
  if (domain.real_dim() != static_cast<int>(2 * n) || !domain.is_ball()) {
    throw InputError("estimate_average_zeros: domain must be a ball in C^" + std::to_string(n));
  }

  AverageZeroEstimate est;
  detail::Moments moments;
  std::uint64_t next = 0;
  const std::uint64_t give_up = 2 * sample_count + 100;
  while (est.sample_count < sample_count && next < give_up) {
    const std::uint64_t want = sample_count - est.sample_count;
    std::vector<ZeroCountSample> batch(static_cast<std::size_t>(want));
    detail::for_each_block(batch.size(), [&](std::size_t i) {
      RandomStream sub = stream.derive(next + i);
      batch[i] = count_common_zeros(spaces, domain, sub);
    });
    next += want;
    for (const auto& s : batch) {
      if (s.rejected) {
        ++est.rejected_count;
      } else {
        moments.add(static_cast<double>(s.count));
        ++est.sample_count;
      }
    }
  }
  est.mean = moments.mean;
  est.standard_error = moments.count > 1 ? std::sqrt(moments.m2 / (moments.count - 1.0) / moments.count) : 0.0;
  const double attempts = static_cast<double>(est.sample_count + est.rejected_count);
  est.valid = est.sample_count == sample_count && static_cast<double>(est.rejected_count) < kRejectionBudget * attempts;
  return est;
}

}  // namespace crofton
