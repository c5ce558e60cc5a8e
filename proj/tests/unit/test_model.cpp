#include <gtest/gtest.h>

#include <cmath>

#include "resonwave/errors.hpp"
#include "resonwave/model.hpp"
#include "resonwave/state.hpp"

using namespace resonwave;

TEST(Model, WellSupportAndValues) {
  const auto V = PotentialSpec::square_well(5.0, 1.5);
  EXPECT_EQ(V.support(), std::make_pair(-1.5, 1.5));
  EXPECT_EQ(V.scalar_value_at(0.0), cplx(5.0));
  EXPECT_EQ(V.scalar_value_at(2.0), cplx(0.0));
  EXPECT_TRUE(V.is_single_block_scalar());
  EXPECT_TRUE(V.is_even());
  EXPECT_TRUE(V.has_real_coefficients());
  EXPECT_FALSE(PotentialSpec::square_well(cplx(-3.0, 1.0)).has_real_coefficients());
}

TEST(Model, PiecewiseRejectsBadBreakpoints) {
  EXPECT_THROW(PotentialSpec::piecewise({1.0, 0.0}, {CMatrix::Constant(1, 1, 1.0)}), InvalidArgument);
  EXPECT_THROW(PotentialSpec::piecewise({0.0, 1.0, 2.0}, {CMatrix::Constant(1, 1, 1.0)}), InvalidArgument);
}

TEST(Model, ContourOrdering) {
  ContourSpec c;
  EXPECT_NO_THROW(c.validate());
  c.eps = 2.0;  // -eta + eps must stay below g0_level
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Model, ContourCurve) {
  ContourSpec c;
  c.eta = 1.0;
  c.etatilde = 0.1;
  c.eps = 0.1;
  EXPECT_DOUBLE_EQ(c.g_star(0.0), -1.0);
  EXPECT_NEAR(c.g_star(std::exp(1.0) - 1.0), -1.1, 1e-15);
  EXPECT_TRUE(c.right_of_curve(0.0));
  EXPECT_FALSE(c.right_of_curve(cplx(-0.95, 0.0)));
  // tangent is the derivative of point
  const double s = 3.0, h = 1e-6;
  const cplx fd = (c.point(s + h) - c.point(s - h)) / (2 * h);
  EXPECT_LT(std::abs(fd - c.tangent(s)), 1e-8);
}

TEST(Model, CutoffWindow) {
  EXPECT_DOUBLE_EQ(cutoff_value(2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_value(2, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_value(2, 3.5), 0.0);
  const double mid = cutoff_value(2, 2.5);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
}

TEST(Model, GridSpacing) {
  const auto g = UniformGrid::with_spacing(-6.0, 6.0, 1.0 / 512);
  EXPECT_EQ(g.n_points, 6145u);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0 / 512);
  EXPECT_TRUE(g.is_node(1.0));
  EXPECT_EQ(g.nearest(0.0), 3072u);
}

TEST(State, IndicatorIntegral) {
  const UniformGrid g{-4.0, 4.0, 257};
  StateSpec s;
  s.shape = "indicator";
  s.params = {{"a", -1.0}, {"b", 1.0}};
  const auto f = sample_state(s, g);
  const cplx I = integrate_state(f, -4.0, 4.0, [](double y) { return std::exp(-std::abs(y)); });
  EXPECT_NEAR(I.real(), 2.0 * (1.0 - std::exp(-1.0)), 1e-13);
}

TEST(State, BumpDomain) {
  const UniformGrid g{-4.0, 4.0, 513};
  StateSpec s;
  s.shape = "bump";
  s.params = {{"center", 0.0}, {"width", 0.8}};
  const auto f = sample_state(s, g);
  EXPECT_TRUE(in_domain(f, PotentialSpec::free(), 4));
  // a bump straddling x = 1 breaks C^1 matching of A f for the well
  s.params = {{"center", 1.0}, {"width", 0.8}};
  EXPECT_FALSE(in_domain(sample_state(s, g), PotentialSpec::square_well(5.0), 2));
  s.shape = "indicator";
  s.params = {{"a", -1.0}, {"b", 1.0}};
  EXPECT_FALSE(in_domain(sample_state(s, g), PotentialSpec::free(), 1));
}

TEST(State, GeneratorOnBump) {
  // A = d^2 on the free line; compare against fourth-order differences of samples
  const UniformGrid g{-2.0, 2.0, 4097};
  StateSpec s;
  s.shape = "bump";
  s.params = {{"center", 0.0}, {"width", 1.0}};
  const auto f = sample_state(s, g);
  const auto Af = apply_generator(f, PotentialSpec::free());
  const double h = g.spacing();
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < g.n_points; ++k) {
    const auto& v = f.values;
    const cplx fd = (-v[k + 2] + 16.0 * v[k + 1] - 30.0 * v[k] + 16.0 * v[k - 1] - v[k - 2]) / (12.0 * h * h);
    worst = std::max(worst, std::abs(fd - Af.values[k]));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(State, SupportMustFitGrid) {
  StateSpec s;
  s.shape = "indicator";
  s.params = {{"a", -1.0}, {"b", 5.0}};
  EXPECT_THROW(sample_state(s, UniformGrid{-4.0, 4.0, 257}), InvalidArgument);
}
