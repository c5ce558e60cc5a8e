#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "resonwave/errors.hpp"
#include "resonwave/resolvent.hpp"

using namespace resonwave;

namespace {

LocalizedState bump(const UniformGrid& g, double c, double w) {
  StateSpec s;
  s.shape = "bump";
  s.params = {{"center", c}, {"width", w}};
  return sample_state(s, g);
}

}  // namespace

TEST(Resolvent, FreeKernel) {
  const cplx l{1.3, 0.4};
  const auto G = green_kernel(0.2, -0.5, l, PotentialSpec::free());
  EXPECT_LT(std::abs(G.value(0, 0) - std::exp(-0.7 * l) / (2.0 * l)), 1e-15);
}

TEST(Resolvent, FreeApplyMatchesQuadrature) {
  const UniformGrid g{-4.0, 4.0, 513};
  const auto f = bump(g, 0.3, 1.0);
  const cplx l{0.8, 0.6};
  const Field u = apply_resolvent(l, f, g, PotentialSpec::free());
  for (double x : {-1.0, 0.0, 0.25, 2.0}) {
    const cplx ref = oracles::simpson(
        [&](double y) {
          cplx v;
          f.eval(y, &v);
          return std::exp(-l * std::abs(x - y)) / (2.0 * l) * v;
        },
        -0.7, 1.3, 40000);
    EXPECT_LT(std::abs(u.at(g.nearest(x)) - ref), 1e-10) << x;
  }
}

TEST(Resolvent, WellApplyMatchesRk4Kernel) {
  const auto V = PotentialSpec::square_well(5.0);
  const auto Vo = oracles::well(5.0);
  const UniformGrid g{-4.0, 4.0, 257};
  const auto f = bump(g, 0.2, 0.6);
  const cplx l{1.5, 0.5};
  const cplx w = oracles::rk4_jost_function(l, Vo);
  const Field u = apply_resolvent(l, f, g, V);
  for (double x : {-0.5, 0.5}) {
    // (R f)(x) = [U_+(x) int_{y<x} U_- f + U_-(x) int_{y>x} U_+ f] / W
    auto val = [&](double y) {
      cplx v;
      f.eval(y, &v);
      return v;
    };
    const cplx left = oracles::simpson(
        [&](double y) { return oracles::rk4_jost_minus(y, l, Vo, 400).first * val(y); }, -0.4, x, 200);
    const cplx right = oracles::simpson(
        [&](double y) { return oracles::rk4_jost_plus(y, l, Vo, 400).first * val(y); }, x, 0.8, 200);
    const cplx ref = (oracles::rk4_jost_plus(x, l, Vo).first * left +
                      oracles::rk4_jost_minus(x, l, Vo).first * right) / w;
    const cplx got = u.at(g.nearest(x));
    EXPECT_LT(std::abs(got - ref), 1e-6 * std::abs(ref)) << x;
  }
}

TEST(Resolvent, IdentityResidual) {
  const UniformGrid g = UniformGrid::with_spacing(-6.0, 6.0, 1.0 / 256);
  const auto f = bump(g, 0.3, 1.0);
  for (const auto& V : {PotentialSpec::free(), PotentialSpec::delta(2.0), PotentialSpec::square_well(5.0),
                        PotentialSpec::square_well(cplx(-3.0, 1.0))})
    for (cplx l : {cplx(2.0), cplx(1.0, 1.0)}) EXPECT_LT(resolvent_residual(l, f, V), 1e-6);
}

TEST(Resolvent, PoleProximity) {
  const UniformGrid g{-4.0, 4.0, 257};
  const auto f = bump(g, 0.0, 1.0);
  EXPECT_TRUE(near_pole(1.0, PotentialSpec::delta(-2.0)));
  EXPECT_FALSE(near_pole(2.0, PotentialSpec::delta(-2.0)));
  EXPECT_THROW(apply_resolvent(1.0, f, g, PotentialSpec::delta(-2.0)), PoleProximity);
}

TEST(Resolvent, DeltaSeriesNearOrigin) {
  // continuity of the regularized kernel across the series switch
  const auto V = PotentialSpec::delta(2.0);
  const cplx a = green_kernel(0.3, -0.2, 1e-7, V).value(0, 0);
  const cplx b = green_kernel(0.3, -0.2, 1e-3, V).value(0, 0);
  EXPECT_LT(std::abs(a - b), 1e-2);
  EXPECT_TRUE(std::isfinite(std::abs(a)));
}

TEST(Resolvent, WorkspaceReuse) {
  const UniformGrid g{-4.0, 4.0, 513};
  const auto f = bump(g, 0.0, 1.0);
  const auto V = PotentialSpec::square_well(5.0);
  ResolventWorkspace ws(f, g, V);
  for (cplx l : {cplx(1.0, 2.0), cplx(-0.5, 3.0)}) {
    const Field a = ws.apply(l), b = apply_resolvent(l, f, g, V);
    EXPECT_LT(l2_norm(a - b), 1e-13 * (1.0 + l2_norm(b)));
  }
}
