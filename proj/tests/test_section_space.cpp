#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "crofton/section_space.hpp"
#include "crofton/zero_count.hpp"
#include "oracles.hpp"

using namespace crofton;

namespace {

ComplexPoint point1(cplx z) { return ComplexPoint(CVector::Constant(1, z)); }

SectionSpace random_exponential_space(RandomStream& rs, int n, int size) {
  std::vector<SpectrumPoint> support;
  while (static_cast<int>(support.size()) < size) {
    SpectrumPoint p(n);
    for (int j = 0; j < n; ++j) p[j] = cplx(rs.uniform(-1, 1), rs.uniform(-1, 1));
    support.push_back(p);
  }
  return SectionSpace::exponential_sum(support);
}

ComplexPoint random_point(RandomStream& rs, int n, double r) {
  CVector z(n);
  for (int j = 0; j < n; ++j) z[j] = cplx(rs.uniform(-r, r), rs.uniform(-r, r)) / std::sqrt(2.0 * n);
  return ComplexPoint(z);
}

SectionSpace monomial_z1() {
  SectionSpace::BasisFunction f{"z1", [](const ComplexPoint& z) { return z[0]; },
                                [](const ComplexPoint& z) { CVector g = CVector::Zero(z.dim()); g[0] = 1.0; return g; }};
  return SectionSpace::explicit_basis(1, {f});
}

}  // namespace

TEST(Evaluate, ConstantSection) {
  const auto space = SectionSpace::exponential_sum({real_spectrum_point({0.0, 0.0})});
  const Section s(space, CVector::Ones(1));
  CVector z(2);
  z << cplx(3, -1), cplx(-20, 7);
  EXPECT_EQ(evaluate(s, ComplexPoint(z)).value(), cplx(1.0));
  EXPECT_EQ(evaluate_gradient(s, ComplexPoint(z)).norm(), 0.0);
}

TEST(Evaluate, TwoTermVanishesAtOrigin) {
  const auto space = SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})});
  CVector c(2);
  c << -1.0, 1.0;
  EXPECT_EQ(evaluate(Section(space, c), point1(0.0)).value(), cplx(0.0));
}

TEST(Evaluate, KostlanQuadraticAtI) {
  CVector c(3);
  c << 1.0, 0.0, 1.0;
  EXPECT_NEAR(std::abs(evaluate(Section(SectionSpace::kostlan(2), c), point1(cplx(0, 1))).value()), 0.0, 1e-15);
}

TEST(Evaluate, NoOverflowForLargeExponents) {
  const auto space = SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})});
  const Section s(space, CVector::Ones(2));
  const auto v = evaluate(s, point1(cplx(900.0, 1.0)));
  EXPECT_TRUE(std::isfinite(v.mantissa.real()) && std::isfinite(v.log_scale));
  EXPECT_NEAR(v.log_scale, 900.0, 1e-9);
  EXPECT_TRUE(std::isfinite(potential(space, point1(900.0))));
}

TEST(Evaluate, GradientMatchesDifferenceQuotient) {
  RandomStream rs(3);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 2;
    const auto space = random_exponential_space(rs, n, 4);
    const Section s = sample_section(space, rs);
    const ComplexPoint z = random_point(rs, n, 1.0);
    const CVector g = evaluate_gradient(s, z);
    for (int j = 0; j < n; ++j) {
      CVector zp = z.coords(), zm = z.coords();
      const double h = 1e-6;
      zp[j] += h;
      zm[j] -= h;
      const cplx fd = (evaluate(s, ComplexPoint(zp)).value() - evaluate(s, ComplexPoint(zm)).value()) / (2 * h);
      EXPECT_NEAR(std::abs(fd - g[j]), 0.0, 1e-7 * (1 + std::abs(g[j])));
    }
  }
}

TEST(Potential, Examples) {
  const auto constant = SectionSpace::exponential_sum({real_spectrum_point({0.0})});
  EXPECT_EQ(potential(constant, point1(cplx(2, 3))), 0.0);
  const auto two = SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})});
  EXPECT_NEAR(potential(two, point1(cplx(0.0, 1.7))), std::log(2.0), 1e-15);
  EXPECT_NEAR(potential(two, point1(cplx(1.0, -0.3))), std::log(1 + std::exp(2.0)), 1e-14);
}

TEST(Potential, BasePointError) {
  EXPECT_THROW(potential(monomial_z1(), point1(0.0)), BasePointError);
  EXPECT_THROW(metric_hessian(monomial_z1(), point1(0.0)), BasePointError);
  EXPECT_NO_THROW(potential(monomial_z1(), point1(0.5)));
}

TEST(MetricHessian, ConstantSpaceIsZero) {
  const auto constant = SectionSpace::exponential_sum({real_spectrum_point({0.0, 0.0})});
  CVector z(2);
  z << 0.3, cplx(0, 1);
  EXPECT_EQ(metric_hessian(constant, ComplexPoint(z)).matrix().norm(), 0.0);
}

TEST(MetricHessian, TwoTermClosedForm) {
  const auto two = SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})});
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
    const double expected = std::exp(2 * x) / std::pow(1 + std::exp(2 * x), 2);
    EXPECT_NEAR(metric_hessian(two, point1(x))(0, 0).real(), expected, 1e-14);
    EXPECT_NEAR(metric_hessian_finite_difference(two, point1(x))(0, 0).real(), expected, 1e-7);
  }
}

TEST(MetricHessian, KostlanAtOriginIsDegree) {
  for (int d = 0; d <= 6; ++d) {
    EXPECT_NEAR(metric_hessian(SectionSpace::kostlan(d), point1(0.0))(0, 0).real(), double(d), 1e-14);
  }
}

TEST(MetricHessian, KostlanIsDegreeTimesChartMetric) {
  RandomStream rs(8);
  for (int rep = 0; rep < 50; ++rep) {
    const int d = 1 + rep % 7;
    const cplx z(rs.uniform(-3, 3), rs.uniform(-3, 3));
    const double chart = 1.0 / std::pow(1 + std::norm(z), 2);
    EXPECT_NEAR(metric_hessian(SectionSpace::kostlan(d), point1(z))(0, 0).real(), d * chart, 1e-10);
  }
}

TEST(MetricHessian, MatchesFiniteDifferences) {
  RandomStream rs(9);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + rep % 2;
    const SectionSpace space = rep % 10 == 0 ? SectionSpace::kostlan(1 + rep % 4)
                                             : random_exponential_space(rs, n, 2 + rep % 4);
    const ComplexPoint z = random_point(rs, space.dim(), 1.0);
    const CMatrix diff = metric_hessian(space, z).matrix() - metric_hessian_finite_difference(space, z).matrix();
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(MetricHessian, UnitaryInvariance) {
  RandomStream rs(10);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + rep % 2;
    const SectionSpace space = rep % 3 == 0 ? SectionSpace::kostlan(2 + rep % 3) : random_exponential_space(rs, n, 3 + rep % 3);
    const SectionSpace rotated = space.with_basis_change(oracle::random_unitary(rs, space.size()));
    const ComplexPoint z = random_point(rs, space.dim(), 1.5);
    const CMatrix diff = metric_hessian(space, z).matrix() - metric_hessian(rotated, z).matrix();
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(potential(space, z), potential(rotated, z), 1e-10);
  }
}

TEST(MetricHessian, EigenvaluesNonNegative) {
  RandomStream rs(15);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 2;
    const auto space = random_exponential_space(rs, n, 1 + rep % 5);
    const auto h = metric_hessian(space, random_point(rs, n, 4.0));
    EXPECT_GE(h.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(SampleSection, ReproducibleCoefficients) {
  const auto space = SectionSpace::kostlan(4);
  RandomStream a(31), b(31);
  EXPECT_EQ(sample_section(space, a).coefficients(), sample_section(space, b).coefficients());
}

TEST(SampleSection, TwoDimensionalPushforwardIsUniform) {
  const auto space = SectionSpace::kostlan(1);
  RandomStream rs(4242);
  std::vector<double> u;
  const int count = 10000;
  for (int i = 0; i < count; ++i) {
    const CVector c = sample_section(space, rs).coefficients();
    u.push_back(std::norm(c[0]) / c.squaredNorm());
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (int i = 0; i < count; ++i) {
    ks = std::max({ks, std::abs(u[i] - double(i) / count), std::abs(u[i] - double(i + 1) / count)});
  }
  EXPECT_LT(ks, 0.02);
}

TEST(SampleSection, ScalingCoefficientsKeepsZeroCount) {
  const auto space = SectionSpace::kostlan(5);
  const Domain disk = Domain::ball(point1(0.0), 1.3);
  RandomStream rs(16);
  for (int rep = 0; rep < 50; ++rep) {
    const Section s = sample_section(space, rs);
    const Section scaled(space, CVector(5.0 * s.coefficients()));
    const auto a = count_zeros_argument_principle(s, disk), b = count_zeros_argument_principle(scaled, disk);
    EXPECT_EQ(a.count, b.count);
    EXPECT_EQ(a.rejected, b.rejected);
  }
}

TEST(Section, RejectsZeroCoefficients) {
  EXPECT_THROW(Section(SectionSpace::kostlan(2), CVector::Zero(3)), InputError);
  EXPECT_THROW(Section(SectionSpace::kostlan(2), CVector::Zero(2)), InputError);
}

TEST(SectionSpace, RejectsDuplicateSupport) {
  EXPECT_THROW(SectionSpace::exponential_sum({real_spectrum_point({1.0}), real_spectrum_point({1.0})}), InputError);
  EXPECT_THROW(SectionSpace::exponential_sum({}), InputError);
}

TEST(BasePointFree, Examples) {
  RandomStream rs(17);
  const Domain ball2 = Domain::ball(ComplexPoint(CVector::Zero(2)), 3.0);
  EXPECT_TRUE(check_base_point_free(random_exponential_space(rs, 2, 4), ball2, 256).pass);
  const Domain disk = Domain::ball(point1(0.0), 2.0);
  EXPECT_TRUE(check_base_point_free(SectionSpace::kostlan(7), disk, 256).pass);
  const auto verdict = check_base_point_free(monomial_z1(), disk, 256);
  EXPECT_FALSE(verdict.pass);
  EXPECT_LE(verdict.min_norm_squared, 1e-30);
  EXPECT_LT(std::abs(verdict.argmin[0]), 1e-12);
}
