#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "crofton/numerics.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/random.hpp"
#include "oracles.hpp"

using namespace crofton;

TEST(MixedDiscriminant, IdentityGivesOne) {
  EXPECT_NEAR(mixed_discriminant({HermitianMatrix::identity(2), HermitianMatrix::identity(2)}), 1.0, 1e-15);
}

TEST(MixedDiscriminant, DiagonalEqualsDeterminant) {
  RandomStream rs(11);
  for (int n = 1; n <= 4; ++n) {
    const HermitianMatrix h = oracle::random_hermitian(rs, n);
    std::vector<HermitianMatrix> hs(static_cast<std::size_t>(n), h);
    EXPECT_NEAR(mixed_discriminant(hs), h.determinant(), 1e-10 * std::max(1.0, std::abs(h.determinant()))) << n;
  }
}

TEST(MixedDiscriminant, DiagonalMatricesByHand) {
  const double a[] = {2.0, 3.0}, b[] = {5.0, 7.0};
  const double d = mixed_discriminant({HermitianMatrix::diagonal(a), HermitianMatrix::diagonal(b)});
  EXPECT_NEAR(d, (2.0 * 7.0 + 3.0 * 5.0) / 2.0, 1e-13);
}

TEST(MixedDiscriminant, SymmetricUnderPermutation) {
  RandomStream rs(12);
  for (int n = 2; n <= 3; ++n) {
    std::vector<HermitianMatrix> hs;
    for (int i = 0; i < n; ++i) hs.push_back(oracle::random_hermitian(rs, n));
    const double base = mixed_discriminant(hs);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<HermitianMatrix> p;
      for (int i : perm) p.push_back(hs[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(mixed_discriminant(p), base, 1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST(MixedDiscriminant, MultilinearInFirstArgument) {
  RandomStream rs(13);
  for (int n = 2; n <= 3; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix h1 = oracle::random_hermitian(rs, n), h1p = oracle::random_hermitian(rs, n);
      std::vector<HermitianMatrix> rest;
      for (int i = 1; i < n; ++i) rest.push_back(oracle::random_hermitian(rs, n));
      const double alpha = rs.uniform(-2, 2), beta = rs.uniform(-2, 2);
      auto with = [&](const HermitianMatrix& first) {
        std::vector<HermitianMatrix> hs{first};
        hs.insert(hs.end(), rest.begin(), rest.end());
        return mixed_discriminant(hs);
      };
      const double lhs = with(alpha * h1 + beta * h1p);
      const double rhs = alpha * with(h1) + beta * with(h1p);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(MixedDiscriminant, NonNegativeOnPsd) {
  RandomStream rs(14);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 3;
    std::vector<HermitianMatrix> hs;
    for (int i = 0; i < n; ++i) hs.push_back(oracle::random_psd(rs, n));
    EXPECT_GE(mixed_discriminant(hs), -1e-12);
  }
}

TEST(MixedDiscriminant, DimensionMismatchIsInputError) {
  EXPECT_THROW(mixed_discriminant({HermitianMatrix::identity(2), HermitianMatrix::identity(3)}), InputError);
  EXPECT_THROW(mixed_discriminant({HermitianMatrix::identity(2)}), InputError);
}

TEST(HermitianMatrix, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(HermitianMatrix{m}, InputError);
}

TEST(Integrate, DiskAreaMonteCarlo) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  const auto r = integrate([](std::span<const double>) { return 1.0; }, disk, QuadratureSpec::monte_carlo(200000, 3));
  EXPECT_NEAR(r.estimate, kPi, 3.5 * r.standard_error);
  EXPECT_GT(r.standard_error, 0.0);
}

TEST(Integrate, ZeroIsExactlyZero) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  for (const auto& q : {QuadratureSpec::monte_carlo(1000, 1), QuadratureSpec::quasi_monte_carlo(1000, 1),
                        QuadratureSpec::product_gauss(16)}) {
    const auto r = integrate([](std::span<const double>) { return 0.0; }, disk, q);
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.standard_error, 0.0);
  }
}

TEST(Integrate, SecondMomentOfDisk) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const auto mc = integrate(f, disk, QuadratureSpec::monte_carlo(200000, 5));
  EXPECT_NEAR(mc.estimate, kPi / 2, 3.5 * mc.standard_error);
  const auto qmc = integrate(f, disk, QuadratureSpec::quasi_monte_carlo(100000, 5));
  EXPECT_NEAR(qmc.estimate, kPi / 2, 2e-3);
  const auto gauss = integrate(f, disk, QuadratureSpec::product_gauss(32));
  EXPECT_NEAR(gauss.estimate, kPi / 2, 1e-12);
}

TEST(Integrate, ProductGaussBallVolumes) {
  for (int m = 1; m <= 4; ++m) {
    const Domain ball = Domain::real_ball(std::vector<double>(static_cast<std::size_t>(m), 0.5), 1.5);
    const auto r = integrate([](std::span<const double>) { return 1.0; }, ball, QuadratureSpec::product_gauss(24));
    const double exact = unit_ball_volume(m) * std::pow(1.5, m);
    EXPECT_NEAR(r.estimate, exact, 1e-12 * exact) << m;
    EXPECT_LE(std::abs(r.estimate - exact), r.standard_error + 1e-13) << m;
  }
}

TEST(Integrate, BoxDomain) {
  const Domain box = Domain::box({{0.0, 1.0}, {0.0, 2.0}});
  auto f = [](std::span<const double> x) { return x[0] * x[1]; };
  EXPECT_NEAR(integrate(f, box, QuadratureSpec::product_gauss(8)).estimate, 1.0, 1e-13);
  const auto mc = integrate(f, box, QuadratureSpec::monte_carlo(100000, 9));
  EXPECT_NEAR(mc.estimate, 1.0, 3.5 * mc.standard_error);
}

TEST(Integrate, StandardErrorShrinksWithDoubledSamples) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  auto f = [](std::span<const double> x) { return std::exp(x[0]) + x[1] * x[1]; };
  double ratio_sum = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = integrate(f, disk, QuadratureSpec::monte_carlo(20000, 100 + rep));
    const auto b = integrate(f, disk, QuadratureSpec::monte_carlo(40000, 200 + rep));
    ratio_sum += b.standard_error / a.standard_error;
  }
  EXPECT_NEAR(ratio_sum / 10, 1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(Integrate, DeterministicGivenSeed) {
  const Domain ball = Domain::real_ball({0.0, 0.0, 0.0, 0.0}, 1.0);
  auto f = [](std::span<const double> x) { return std::cos(x[0] * x[3]) + x[2]; };
  const auto a = integrate(f, ball, QuadratureSpec::monte_carlo(50000, 77));
  const auto b = integrate(f, ball, QuadratureSpec::monte_carlo(50000, 77));
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(Integrate, NanNamesTheNode) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  try {
    integrate([](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : 1.0; }, disk,
              QuadratureSpec::monte_carlo(1000, 1));
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_NE(std::string(e.what()).find("("), std::string::npos) << e.what();
  }
}

TEST(Integrate, InvalidSpecIsInputError) {
  const Domain disk = Domain::real_ball({0.0, 0.0}, 1.0);
  EXPECT_THROW(integrate([](std::span<const double>) { return 1.0; }, disk, QuadratureSpec::monte_carlo(0, 1)),
               InputError);
  EXPECT_THROW(Domain::real_ball({0.0}, -1.0), InputError);
  EXPECT_THROW(Domain::box({{1.0, 1.0}}), InputError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto [x, w] = composite_gauss(24, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 7);
  EXPECT_NEAR(s, (std::pow(2.0, 8) - 1.0) / 8.0, 1e-12);
}

TEST(RandomStream, SameSeedSameVector) {
  RandomStream a(42), b(42);
  const CVector va = sample_complex_gaussian(a, 5), vb = sample_complex_gaussian(b, 5);
  EXPECT_EQ(va, vb);
}

TEST(RandomStream, ComplexGaussianMoments) {
  RandomStream rs(2024);
  cplx mean = 0.0;
  double second = 0.0, re2 = 0.0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    const cplx c = sample_complex_gaussian(rs, 1)[0];
    mean += c;
    second += std::norm(c);
    re2 += c.real() * c.real();
  }
  EXPECT_LT(std::abs(mean / double(count)), 0.02);
  EXPECT_LT(std::abs(second / count - 1.0), 0.02);
  EXPECT_NEAR(re2 / count, 0.5, 0.01);
}

TEST(RandomStream, RequestedLength) {
  RandomStream rs(1);
  EXPECT_EQ(sample_complex_gaussian(rs, 3).size(), 3);
}

TEST(RandomStream, DerivedStreamsDiffer) {
  const RandomStream root(5);
  RandomStream a = root.derive(0), b = root.derive(1), a2 = root.derive(0);
  EXPECT_NE(a.next_u64(), b.next_u64());
  RandomStream a3 = root.derive(0);
  EXPECT_EQ(a2.next_u64(), a3.next_u64());
}
