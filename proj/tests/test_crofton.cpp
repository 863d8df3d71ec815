#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "crofton/crofton.hpp"
#include "oracles.hpp"

using namespace crofton;

namespace {

ComplexPoint point1(cplx z) { return ComplexPoint(CVector::Constant(1, z)); }
Domain disk(double r) { return Domain::ball(point1(0.0), r); }
Domain ball2(double r) { return Domain::ball(ComplexPoint(CVector::Zero(2)), r); }

SectionSpace simplex2() {
  return SectionSpace::exponential_sum(
      {real_spectrum_point({0, 0}), real_spectrum_point({1, 0}), real_spectrum_point({0, 1})});
}

SectionSpace random_space2(RandomStream& rs, int size) {
  std::vector<SpectrumPoint> support;
  for (int i = 0; i < size; ++i) {
    SpectrumPoint p(2);
    p << cplx(rs.uniform(-1, 1), rs.uniform(-1, 1)), cplx(rs.uniform(-1, 1), rs.uniform(-1, 1));
    support.push_back(p);
  }
  return SectionSpace::exponential_sum(support);
}

// (d / pi) int_{|z| < r} (1 + |z|^2)^{-2} by the midpoint rule in the radius.
double kostlan_disk_oracle(int d, double r) {
  const int steps = 200000;
  double s = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double rho = (i + 0.5) * r / steps;
    s += 2 * kPi * rho / std::pow(1 + rho * rho, 2);
  }
  return d / kPi * s * r / steps;
}

}  // namespace

TEST(CroftonConstant, Pinned) {
  EXPECT_DOUBLE_EQ(crofton_constant(1), 1 / kPi);
  EXPECT_DOUBLE_EQ(crofton_constant(2), 2 / (kPi * kPi));
}

TEST(CroftonDensity, ConstantSpaceAnnihilates) {
  const std::vector<SectionSpace> spaces{SectionSpace::exponential_sum({real_spectrum_point({0, 0})}), simplex2()};
  CVector z(2);
  z << 0.4, cplx(0, -1);
  EXPECT_EQ(crofton_density(spaces, ComplexPoint(z)), 0.0);
}

TEST(CroftonDensity, KostlanAtOrigin) {
  for (int d = 1; d <= 5; ++d) {
    const std::vector<SectionSpace> spaces{SectionSpace::kostlan(d)};
    EXPECT_NEAR(crofton_density(spaces, point1(0.0)), d / kPi, 1e-14);
  }
}

TEST(CroftonDensity, TwoTermClosedForm) {
  const std::vector<SectionSpace> spaces{
      SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})})};
  for (double x : {-2.0, 0.0, 0.3, 1.5}) {
    EXPECT_NEAR(crofton_density(spaces, point1(cplx(x, 0.9))), std::exp(2 * x) / std::pow(1 + std::exp(2 * x), 2) / kPi,
                1e-15);
  }
}

TEST(CroftonDensity, NonNegative) {
  RandomStream rs(21);
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<SectionSpace> spaces{random_space2(rs, 2 + rep % 4), random_space2(rs, 2 + rep % 3)};
    CVector z(2);
    z << cplx(rs.uniform(-2, 2), rs.uniform(-2, 2)), cplx(rs.uniform(-2, 2), rs.uniform(-2, 2));
    EXPECT_GE(crofton_density(spaces, ComplexPoint(z)), -1e-14);
  }
}

TEST(CroftonDensity, WrongTupleIsInputError) {
  const std::vector<SectionSpace> spaces{SectionSpace::kostlan(2), SectionSpace::kostlan(2)};
  EXPECT_THROW(crofton_density(spaces, point1(0.0)), InputError);
}

TEST(HermitianMixedVolume, KostlanLinearDisk) {
  const std::vector<SectionSpace> spaces{SectionSpace::kostlan(1)};
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const auto v = hermitian_mixed_volume(spaces, disk(r), QuadratureSpec::product_gauss(64));
    EXPECT_NEAR(v.estimate, r * r / (1 + r * r), 1e-8) << r;
    EXPECT_LE(std::abs(v.estimate - r * r / (1 + r * r)), v.standard_error + 1e-14) << r;
  }
}

TEST(HermitianMixedVolume, ConstantSpaceGivesZero) {
  const std::vector<SectionSpace> spaces{SectionSpace::exponential_sum({real_spectrum_point({0.0})})};
  EXPECT_EQ(hermitian_mixed_volume(spaces, disk(2.0), QuadratureSpec::monte_carlo(1000, 1)).estimate, 0.0);
  const std::vector<SectionSpace> pair{SectionSpace::exponential_sum({real_spectrum_point({0, 0})}),
                                       SectionSpace::exponential_sum({real_spectrum_point({0, 0})})};
  EXPECT_EQ(expected_zero_count_integral(pair, ball2(1.0), QuadratureSpec::monte_carlo(1000, 1)).estimate, 0.0);
}

TEST(HermitianMixedVolume, SwapIsBitwiseIdentical) {
  RandomStream rs(22);
  const SectionSpace a = random_space2(rs, 3), b = random_space2(rs, 4);
  const std::vector<SectionSpace> ab{a, b}, ba{b, a};
  const auto q = QuadratureSpec::monte_carlo(20000, 99);
  const auto vab = hermitian_mixed_volume(ab, ball2(1.0), q), vba = hermitian_mixed_volume(ba, ball2(1.0), q);
  EXPECT_EQ(vab.estimate, vba.estimate);
  EXPECT_EQ(vab.standard_error, vba.standard_error);
}

TEST(HermitianMixedVolume, MonotoneInDomain) {
  const std::vector<SectionSpace> spaces{simplex2(), simplex2()};
  double previous = 0.0;
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    const auto v = hermitian_mixed_volume(spaces, ball2(r), QuadratureSpec::monte_carlo(40000, 7));
    EXPECT_GE(v.estimate + 3 * v.standard_error, previous);
    previous = v.estimate;
  }
}

TEST(HermitianMixedVolume, PhaseRescalingChangesNothing) {
  RandomStream rs(23);
  const SectionSpace a = random_space2(rs, 3), b = random_space2(rs, 3);
  const SectionSpace a_phase = a.with_basis_change(std::polar(1.0, 0.7) * CMatrix::Identity(3, 3));
  const std::vector<SectionSpace> plain{a, b}, phased{a_phase, b};
  const auto q = QuadratureSpec::quasi_monte_carlo(20000, 3);
  EXPECT_NEAR(hermitian_mixed_volume(plain, ball2(1.0), q).estimate,
              hermitian_mixed_volume(phased, ball2(1.0), q).estimate, 1e-12);
}

TEST(ExpectedZeroCount, KostlanDisk) {
  for (int d : {1, 3, 6}) {
    for (double r : {0.5, 1.0, 2.5}) {
      const std::vector<SectionSpace> spaces{SectionSpace::kostlan(d)};
      const auto v = expected_zero_count_integral(spaces, disk(r), QuadratureSpec::product_gauss(64));
      EXPECT_NEAR(v.estimate, d * r * r / (1 + r * r), 1e-9);
      EXPECT_NEAR(v.estimate, kostlan_disk_oracle(d, r), 1e-8);
    }
  }
}

TEST(ExpectedZeroCount, KostlanOffCenterDisk) {
  // Chart area of the disk |z - c| < r under the Fubini-Study form (d/pi)(1+|z|^2)^{-2},
  // cross-checked by Monte Carlo.
  const std::vector<SectionSpace> spaces{SectionSpace::kostlan(2)};
  const Domain off = Domain::ball(point1(cplx(1.0, -0.5)), 0.8);
  const auto gauss = expected_zero_count_integral(spaces, off, QuadratureSpec::product_gauss(64));
  const auto mc = expected_zero_count_integral(spaces, off, QuadratureSpec::monte_carlo(400000, 8));
  EXPECT_NEAR(gauss.estimate, mc.estimate, 4 * mc.standard_error);
}

TEST(ExpectedZeroCount, TwoTermLargeDisk) {
  const std::vector<SectionSpace> spaces{
      SectionSpace::exponential_sum({real_spectrum_point({0.0}), real_spectrum_point({1.0})})};
  const double t = 20.0;
  const auto v = expected_zero_count_integral(spaces, disk(t), QuadratureSpec::product_gauss(256));
  EXPECT_NEAR(v.estimate / t, 1 / kPi, 0.01 / kPi);
}

TEST(Polynomiality, EqualSpacesHaveNoResidual) {
  const SectionSpace g = simplex2();
  const double lambdas[] = {0.5, 1.0, 2.0};
  const auto rep = check_volume_polynomiality(g, g, ball2(1.0), lambdas, QuadratureSpec::quasi_monte_carlo(20000, 4));
  EXPECT_LT(rep.fit_residual, 1e-12);
  // F(l1, l2) = (l1 + l2)^2 F(1, 0)
  EXPECT_NEAR(rep.a, rep.c, 1e-12 * std::abs(rep.a));
  EXPECT_NEAR(rep.b, 2 * rep.a, 1e-12 * std::abs(rep.a));
  EXPECT_TRUE(rep.pass);
}

TEST(Polynomiality, RandomPair) {
  RandomStream rs(24);
  const SectionSpace g1 = random_space2(rs, 3), g2 = random_space2(rs, 4);
  const double lambdas[] = {0.25, 1.0, 3.0};
  const auto rep = check_volume_polynomiality(g1, g2, ball2(1.2), lambdas, QuadratureSpec::monte_carlo(20000, 4));
  EXPECT_LT(rep.fit_residual, kPolynomialityResidualTol);
  EXPECT_LT(rep.polarization_error, kPolarizationTol);
  EXPECT_LT(rep.homogeneity_error, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(Polynomiality, Homogeneity) {
  RandomStream rs(25);
  const SectionSpace g1 = random_space2(rs, 3), g2 = random_space2(rs, 3);
  const auto q = QuadratureSpec::quasi_monte_carlo(10000, 2);
  const double f20 = combined_volume(g1, g2, 2.0, 0.0, ball2(1.0), q).estimate;
  const double f10 = combined_volume(g1, g2, 1.0, 0.0, ball2(1.0), q).estimate;
  EXPECT_NEAR(f20, 4 * f10, 1e-12 * std::abs(f20));
}

TEST(Polynomiality, MultilinearViaPolarization) {
  // vol(g1 + g1', g2) built from the Hessian sum equals the sum of the mixed volumes.
  RandomStream rs(26);
  const SectionSpace g1 = random_space2(rs, 3), g2 = random_space2(rs, 3);
  const auto q = QuadratureSpec::quasi_monte_carlo(10000, 2);
  const double f11 = combined_volume(g1, g2, 1.0, 1.0, ball2(1.0), q).estimate;
  const double f10 = combined_volume(g1, g2, 1.0, 0.0, ball2(1.0), q).estimate;
  const double f01 = combined_volume(g1, g2, 0.0, 1.0, ball2(1.0), q).estimate;
  const std::vector<SectionSpace> pair{g1, g2}, pair11{g1, g1}, pair22{g2, g2};
  const double m12 = hermitian_mixed_volume(pair, ball2(1.0), q).estimate;
  EXPECT_NEAR(f10, hermitian_mixed_volume(pair11, ball2(1.0), q).estimate, 1e-12);
  EXPECT_NEAR(f01, hermitian_mixed_volume(pair22, ball2(1.0), q).estimate, 1e-12);
  EXPECT_NEAR(0.5 * (f11 - f10 - f01), m12, 1e-9 * std::abs(m12));
}
