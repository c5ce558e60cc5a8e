#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/oracle.hpp"

using namespace resonwave;

namespace {

LocalizedState make(const UniformGrid& g, const std::string& shape, std::map<std::string, double> p) {
  StateSpec s;
  s.shape = shape;
  s.params = std::move(p);
  return sample_state(s, g);
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return 1e300;
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

class PolyCoeff : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(PolyCoeff, MatchesTaylorProduct) {
  const auto [kappa, j] = GetParam();
  for (cplx mu : {cplx(1.0), cplx(-1.2020169050841, 1.8018526718110), cplx(0.4, -0.3)}) {
    const auto ref = oracles::residue_poly(kappa, mu, j);
    double scale = 0.0;
    for (cplx c : ref) scale = std::max(scale, std::abs(c));
    EXPECT_LT(max_diff(poly_coeff_leibniz(kappa, mu, j), ref), 1e-13 * scale);
    EXPECT_LT(max_diff(poly_coeff(kappa, mu, j), ref), 1e-9 * scale);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, PolyCoeff,
                         ::testing::Combine(::testing::Values(0, 1), ::testing::Values(1, 2, 3, 4)));

TEST(PolyCoeff, SimplePoleValues) {
  // cosine: mu^1 / (2 mu); sine: 1 / (2 mu)
  const cplx mu{0.7, 0.2};
  EXPECT_LT(std::abs(poly_coeff(1, mu, 1)[0] - 0.5), 1e-15);
  EXPECT_LT(std::abs(poly_coeff(0, mu, 1)[0] - 1.0 / (2.0 * mu)), 1e-15);
}

TEST(Projection, DeltaIndicatorClosedForm) {
  const auto V = PotentialSpec::delta(-2.0);
  const UniformGrid g{-8.0, 8.0, 513};
  const auto f = make(g, "indicator", {{"a", -1.0}, {"b", 1.0}});
  const Field p = delta_projection(f, V, g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.n_points; ++k)
    worst = std::max(worst, std::abs(p.at(k) - 2.0 * (1.0 - std::exp(-1.0)) * std::exp(-std::abs(g.x(k)))));
  EXPECT_LT(worst, 1e-13);
  const Field q = spectral_projection_apply(1.0, f, V, g, 0.5);
  EXPECT_LT(l2_norm(p - q), 1e-8);
}

TEST(Projection, ShiftedDelta) {
  const auto V = PotentialSpec::delta(-3.0, 0.5);
  const UniformGrid g{-8.0, 8.0, 513};
  const auto f = make(g, "bump", {{"center", 0.0}, {"width", 1.0}});
  EXPECT_LT(l2_norm(delta_projection(f, V, g) - spectral_projection_apply(1.5, f, V, g, 0.5)), 1e-8);
}

TEST(Residue, WellRoutesAgree) {
  const auto V = PotentialSpec::square_well(5.0);
  const UniformGrid g{-6.0, 6.0, 769};
  const auto f = make(g, "bump", {{"center", 0.2}, {"width", 0.8}});
  Resonance r;
  r.lambda0 = cplx(-1.2020169050841, 1.8018526718110);
  for (int kappa : {0, 1}) {
    const auto a = residue_term(r, kappa, f, V, g, ResidueRoute::ClosedForm);
    const auto b = residue_term(r, kappa, f, V, g, ResidueRoute::Circle, 0.05);
    EXPECT_TRUE(a.closed_form);
    EXPECT_FALSE(b.closed_form);
    EXPECT_LT(l2_norm(a.at(1.0) - b.at(1.0)), 1e-7 * l2_norm(a.at(1.0)));
  }
}

TEST(Residue, DeltaLeadingTerm) {
  const auto V = PotentialSpec::delta(-2.0);
  const UniformGrid g{-6.0, 6.0, 385};
  const auto f = make(g, "indicator", {{"a", -1.0}, {"b", 1.0}});
  Resonance r;
  r.lambda0 = 1.0;
  r.kind = ResonanceKind::EigenvalueType;
  const Field pf = delta_projection(f, V, g);
  for (int kappa : {0, 1}) {
    const auto term = residue_term(r, kappa, f, V, g);
    EXPECT_LT(l2_norm(term.at(2.0) - cplx(0.5 * std::exp(2.0)) * pf), 1e-12 * l2_norm(pf) * std::exp(2.0));
  }
}

TEST(Residue, DoubleZeroDegree) {
  const double alpha = 21.1907285564266299745;
  const auto V = PotentialSpec::square_well(alpha);
  const UniformGrid g{-6.0, 6.0, 385};
  // off-centre: the double zero's mode is odd
  const auto f = make(g, "bump", {{"center", 0.3}, {"width", 0.6}});
  Resonance r;
  r.lambda0 = -1.0;
  r.multiplicity = 2;
  const auto a = residue_term(r, 1, f, V, g, ResidueRoute::ClosedForm);
  const auto b = residue_term(r, 1, f, V, g, ResidueRoute::Circle, 0.05);
  EXPECT_EQ(a.degree(), 1);
  EXPECT_LT(l2_norm(a.at(1.5) - b.at(1.5)), 1e-6 * l2_norm(a.at(1.5)));
}

TEST(Window, GridInsideWindow) {
  const UniformGrid g{-10.0, 10.0, 1281};
  const UniformGrid w = window_grid(g, 2);
  EXPECT_DOUBLE_EQ(w.spacing(), g.spacing());
  EXPECT_GE(w.x_min, -3.0 - 1e-12);
  EXPECT_LE(w.x_max, 3.0 + 1e-12);
  EXPECT_TRUE(g.is_node(w.x_min));
}

TEST(Expand, DeltaRepulsiveSine) {
  const auto V = PotentialSpec::delta(2.0);
  const UniformGrid g{-8.0, 8.0, 513};
  const auto f = make(g, "bump", {{"center", 1.5}, {"width", 0.8}});
  ContourSpec c;
  c.eta = 1.5;
  const CutoffWindow w = cutoff_window(2, window_grid(g, 2));
  const ExpansionReport rep = expand(WaveKind::Sine, {1.0, 2.0}, f, V, c, w, 1);
  EXPECT_FALSE(rep.taylor_block);  // g*(0) < 0
  ASSERT_EQ(rep.terms.size(), 1u);
  EXPECT_LT(std::abs(rep.terms[0].lambda0 + 1.0), 1e-12);
  for (double gap : rep.oracle_gap) EXPECT_LT(gap, 5.0 * (c.quad_tol + 1e-5));
}
