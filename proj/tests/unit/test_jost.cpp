#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "resonwave/jost.hpp"

using namespace resonwave;

TEST(Jost, FreeWronskian) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 50; ++k) {
    const cplx l{u(rng), u(rng)};
    EXPECT_LT(std::abs(jost_function(l, PotentialSpec::free()).w - 2.0 * l), 1e-12 * std::abs(l));
  }
}

TEST(Jost, DeltaWronskian) {
  const auto V = PotentialSpec::delta(-2.0);
  for (cplx l : {cplx(0.5, 0.2), cplx(-1.0, 2.0), cplx(3.0, -1.0)})
    EXPECT_LT(std::abs(jost_function(l, V).w - (2.0 * l - 2.0)), 1e-12);
}

TEST(Jost, WellPlusAtOrigin) {
  // e^{-lambda} (cos k + (lambda/k) sin k) with k = sqrt(alpha - lambda^2) = 2
  const auto V = PotentialSpec::square_well(5.0);
  const auto [u, du] = jost_plus(0.0, 1.0, V);
  const double expect = std::exp(-1.0) * (std::cos(2.0) + 0.5 * std::sin(2.0));
  EXPECT_NEAR(u(0, 0).real(), expect, 1e-14);
  EXPECT_NEAR(expect, 0.01416405, 1e-8);
  const auto [ru, rdu] = oracles::rk4_jost_plus(0.0, 1.0, oracles::well(5.0));
  EXPECT_LT(std::abs(u(0, 0) - ru), 1e-10);
  EXPECT_LT(std::abs(du(0, 0) - rdu), 1e-10);
}

class JostVsRk4 : public ::testing::TestWithParam<cplx> {};

TEST_P(JostVsRk4, ScalarWell) {
  const cplx l = GetParam();
  for (cplx a : {cplx(5.0), cplx(-3.0, 1.0), cplx(21.0)}) {
    const auto V = PotentialSpec::square_well(a);
    const cplx w = jost_function(l, V).w;
    const cplx ref = oracles::rk4_jost_function(l, oracles::well(a));
    EXPECT_LT(std::abs(w - ref), 1e-9 * std::max(1.0, std::abs(ref))) << "alpha=" << a;
    for (double x : {-2.0, -0.4, 0.7, 1.5}) {
      const auto [um, dum] = jost_minus(x, l, V);
      const auto [rm, rdm] = oracles::rk4_jost_minus(x, l, oracles::well(a));
      EXPECT_LT(std::abs(um(0, 0) - rm), 1e-9 * std::max(1.0, std::abs(rm)));
      EXPECT_LT(std::abs(dum(0, 0) - rdm), 1e-9 * std::max(1.0, std::abs(rdm)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Points, JostVsRk4,
                         ::testing::Values(cplx(1.0, 0.0), cplx(0.3, 2.0), cplx(-1.5, 1.0), cplx(2.0, -3.0)));

TEST(Jost, ClosedFormMatchesTransfer) {
  const auto V = PotentialSpec::square_well(cplx(5.0, 0.5), 1.3);
  for (cplx l : {cplx(0.7, 0.1), cplx(-2.0, 3.0), cplx(4.0, -0.5)}) {
    const cplx a = jost_function(l, V).w, b = jost_function_transfer(l, V).w;
    EXPECT_LT(std::abs(a - b), 1e-11 * std::abs(a));
  }
}

TEST(Jost, MatrixWellDiagonalFactors) {
  // diagonal V0 decouples: det W = W_1 W_2
  CMatrix v0 = CMatrix::Zero(2, 2);
  v0(0, 0) = 5.0;
  v0(1, 1) = cplx(-3.0, 1.0);
  const auto M = PotentialSpec::matrix_well(v0);
  for (cplx l : {cplx(0.9, 0.4), cplx(-1.2, 1.8)}) {
    const cplx w = jost_function(l, M).w;
    const cplx w1 = jost_function(l, PotentialSpec::square_well(5.0)).w;
    const cplx w2 = jost_function(l, PotentialSpec::square_well(cplx(-3.0, 1.0))).w;
    EXPECT_LT(std::abs(w - w1 * w2), 1e-10 * std::abs(w1 * w2));
  }
}

TEST(Jost, MatrixWellSimilarityInvariant) {
  CMatrix d = CMatrix::Zero(2, 2), s(2, 2);
  d(0, 0) = 5.0;
  d(1, 1) = cplx(-3.0, 1.0);
  s << 2.0, 1.0, 1.0, 1.0;
  const auto A = PotentialSpec::matrix_well(d);
  const auto B = PotentialSpec::matrix_well(s * d * s.inverse());
  const cplx l{0.4, 1.1};
  const cplx a = jost_function(l, A).w, b = jost_function(l, B).w;
  EXPECT_LT(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(Jost, DerivativeRoutesAgree) {
  const auto V = PotentialSpec::square_well(5.0);
  for (int order : {1, 2}) {
    const cplx a = jost_function_derivative(cplx(0.5, 0.5), V, order);
    const cplx b = jost_function_derivative_cauchy(cplx(0.5, 0.5), V, order);
    EXPECT_LT(std::abs(a - b), 1e-8 * std::abs(a));
  }
}

TEST(Jost, DoubleZeroSecondDerivative) {
  const double alpha = 21.1907285564266299745;
  const auto V = PotentialSpec::square_well(alpha);
  EXPECT_LT(std::abs(jost_function(-1.0, V).w), 1e-11);
  EXPECT_LT(std::abs(jost_function_derivative(-1.0, V, 1)), 1e-9);
  const cplx w2 = jost_function_derivative(-1.0, V, 2);
  EXPECT_NEAR(w2.real(), -15.51003785158703, 1e-8);
  EXPECT_NEAR(w2.real(), 2.0 * std::exp(2.0) * alpha / (1.0 - alpha), 1e-8);
}

TEST(Jost, GreenKernelSymmetric) {
  const auto V = PotentialSpec::square_well(5.0);
  const cplx l{1.2, 0.3};
  const CMatrix a = semi_separable_kernel(0.3, -0.7, l, V);
  const CMatrix b = semi_separable_kernel(-0.7, 0.3, l, V);
  EXPECT_LT(std::abs(a(0, 0) - b(0, 0)), 1e-13);
}
