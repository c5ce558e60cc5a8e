#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/oracle.hpp"

using namespace resonwave;

namespace {

LocalizedState bump(const UniformGrid& g, double c, double w) {
  StateSpec s;
  s.shape = "bump";
  s.params = {{"center", c}, {"width", w}};
  return sample_state(s, g);
}

cplx value(const LocalizedState& f, double x) {
  cplx v;
  f.eval(x, &v);
  return v;
}

}  // namespace

TEST(DAlembert, CosineAndSine) {
  const UniformGrid g{-6.0, 6.0, 769};
  const auto f = bump(g, 0.3, 1.0);
  const double t = 1.7;
  const Field c = dalembert_cosine(t, f, g);
  const Field s = dalembert_sine(t, f, g);
  for (double x : {-2.0, -0.5, 0.0, 1.25, 3.0}) {
    const std::size_t k = g.nearest(x);
    const double xk = g.x(k);
    EXPECT_LT(std::abs(c.at(k) - 0.5 * (value(f, xk - t) + value(f, xk + t))), 1e-14);
    const cplx ref = 0.5 * oracles::simpson([&](double y) { return value(f, y); }, xk - t, xk + t, 20000);
    EXPECT_LT(std::abs(s.at(k) - ref), 1e-10);
  }
}

TEST(Leapfrog, ConvergesToDAlembert) {
  const auto V = PotentialSpec::free();
  double prev = 0.0;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    const UniformGrid g = UniformGrid::with_spacing(-5.0, 5.0, h);
    const auto f = bump(g, 0.0, 1.0);
    const auto zero = state_from_field(Field(g, 1));
    const WaveState w = timestep_wave(1.0, f, zero, V, h / 4);
    const double err = linf_norm(w.u - dalembert_cosine(1.0, f, g));
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0);  // second order
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(DeltaExact, ZeroCouplingIsFree) {
  const UniformGrid g{-6.0, 6.0, 769};
  const auto f = bump(g, 0.5, 1.0);
  const auto V = PotentialSpec::delta(0.0);
  EXPECT_LT(l2_norm(delta_exact_cosine(1.3, f, V, g) - dalembert_cosine(1.3, f, g)), 1e-12);
  EXPECT_LT(l2_norm(delta_exact_sine(1.3, f, V, g) - dalembert_sine(1.3, f, g)), 1e-10);
}

TEST(DeltaExact, SineIsTimeIntegralOfCosine) {
  const UniformGrid g{-6.0, 6.0, 385};
  const auto f = bump(g, 1.0, 0.8);
  const auto V = PotentialSpec::delta(-2.0);
  const double t = 1.5;
  const Field s = delta_exact_sine(t, f, V, g);
  for (double x : {-1.0, 0.0, 0.5, 2.0}) {
    const std::size_t k = g.nearest(x);
    const cplx ref = oracles::simpson([&](double tau) { return delta_exact_cosine(tau, f, V, g).at(k); }, 0.0, t, 200);
    EXPECT_LT(std::abs(s.at(k) - ref), 1e-7) << x;
  }
}

TEST(DeltaExact, MatchesLeapfrog) {
  const double h = 1.0 / 256;
  const UniformGrid g = UniformGrid::with_spacing(-5.0, 5.0, h);
  const auto f = bump(g, 1.0, 0.8);
  const auto V = PotentialSpec::delta(2.0);
  const WaveState w = timestep_wave(1.5, f, state_from_field(Field(g, 1)), V, h / 4);
  EXPECT_LT(l2_norm(w.u - delta_exact_cosine(1.5, f, V, g)), 5e-3);
}

TEST(Bromwich, DeltaAgreesWithExact) {
  const UniformGrid g{-8.0, 8.0, 513};
  const auto f = bump(g, 1.5, 0.8);
  const auto V = PotentialSpec::delta(2.0);
  const UniformGrid wg = window_grid(g, 2);
  const CutoffWindow w = cutoff_window(2, wg);
  const Field b = bromwich_apply(WaveKind::Sine, 1.0, f, V, 0.5, 2, w);
  EXPECT_LT(l2_norm(b - apply_window(delta_exact_sine(1.0, f, V, wg), w)), 1e-5);
}

TEST(Oracle, SnapshotCsvHeader) {
  const UniformGrid g{-1.0, 1.0, 3};
  const std::string csv = snapshot_csv(Field(g, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,re,im");
}
