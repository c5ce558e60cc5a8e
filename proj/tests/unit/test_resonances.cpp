#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "resonwave/errors.hpp"
#include "resonwave/resonances.hpp"

using namespace resonwave;

namespace {

ContourSpec contour(double eta) {
  ContourSpec c;
  c.eta = eta;
  return c;
}

ScanRegion box(double a, double b, double c, double d) {
  ScanRegion r;
  r.re_min = a;
  r.re_max = b;
  r.im_min = c;
  r.im_max = d;
  return r;
}

}  // namespace

TEST(Winding, Polynomial) {
  const AnalyticFn f = [](cplx z) { return (z - 0.3) * (z - 0.3) * (z + cplx(0.1, 0.5)); };
  EXPECT_EQ(winding_box(f, -1.0, 1.0, -1.0, 1.0), 3);
  EXPECT_EQ(winding_box(f, 0.0, 1.0, -0.2, 0.2), 2);
  EXPECT_EQ(winding_circle(f, 0.3, 1e-3), 2);
  EXPECT_EQ(winding_box(f, 0.5, 1.0, 0.5, 1.0), 0);
}

TEST(Winding, BoundaryZeroThrows) {
  const AnalyticFn f = [](cplx z) { return z - 1.0; };
  EXPECT_THROW(winding_polygon(f, {cplx(0, -1), cplx(1, -1), cplx(1, 1), cplx(0, 1)}), BoundaryZero);
}

TEST(Refine, NewtonAndMuller) {
  const AnalyticFn f = [](cplx z) { return std::exp(z) - 2.0; };
  const auto r = refine_zero(f, 0.5, 1);
  ASSERT_TRUE(r);
  EXPECT_LT(std::abs(*r - std::log(2.0)), 1e-13);
  const auto m = muller(f, 0.4, 0.6, cplx(0.7, 0.1));
  ASSERT_TRUE(m);
  EXPECT_LT(std::abs(*m - std::log(2.0)), 1e-12);
  const AnalyticFn g = [](cplx z) { return (z - 2.0) * (z - 2.0); };
  const auto d = refine_zero(g, 2.2, 2);
  ASSERT_TRUE(d);
  EXPECT_LT(std::abs(*d - 2.0), 1e-10);
}

TEST(Scan, DeltaAttractive) {
  const auto zs = find_resonances(box(-3.0, 3.0, -2.0, 2.0), PotentialSpec::delta(-2.0), contour(1.5));
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_LT(std::abs(zs[0].lambda0 - 1.0), 1e-12);
  EXPECT_EQ(zs[0].kind, ResonanceKind::EigenvalueType);
}

TEST(Scan, DeltaRepulsive) {
  const auto zs = find_resonances(box(-3.0, 3.0, -2.0, 2.0), PotentialSpec::delta(2.0), contour(1.5));
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_LT(std::abs(zs[0].lambda0 + 1.0), 1e-12);
  EXPECT_EQ(zs[0].kind, ResonanceKind::ResonanceType);
}

TEST(Scan, WellBoundStatesMatchBisection) {
  auto ref = oracles::well_bound_states(5.0);
  ASSERT_EQ(ref.size(), 2u);
  std::sort(ref.begin(), ref.end());
  const auto zs = find_resonances(box(0.05, 2.7, -0.5, 0.5), PotentialSpec::square_well(5.0), contour(1.3));
  ASSERT_EQ(zs.size(), 2u);
  EXPECT_NEAR(zs[0].lambda0.real(), ref[0], 1e-10);
  EXPECT_NEAR(zs[1].lambda0.real(), ref[1], 1e-10);
  EXPECT_NEAR(ref[0], 0.96510420132629748, 1e-9);
  EXPECT_NEAR(ref[1], 1.9627798209095031, 1e-9);
}

TEST(Scan, WellComplexPair) {
  const auto V = PotentialSpec::square_well(5.0);
  const auto zs = find_resonances(box(-1.6, 0.0, -2.5, 2.5), V, contour(1.3));
  ASSERT_EQ(zs.size(), 2u);
  EXPECT_LT(std::abs(zs[0].lambda0 - std::conj(zs[1].lambda0)), 1e-12);
  const cplx z{-1.2020169050841, 1.8018526718110};
  EXPECT_LT(std::min(std::abs(zs[0].lambda0 - z), std::abs(zs[1].lambda0 - z)), 1e-10);
  EXPECT_LT(std::abs(oracles::rk4_jost_function(z, oracles::well(5.0))), 1e-9);
}

TEST(Scan, AccountingAndOrigin) {
  // free model: a simple zero at the origin, excluded from the list
  const auto r = scan(box(-1.0, 1.0, -1.0, 1.0), PotentialSpec::free(), contour(1.5));
  EXPECT_TRUE(r.resonances.empty());
  EXPECT_EQ(r.total_count, 1);
  EXPECT_EQ(r.origin_excluded, 1);
  EXPECT_TRUE(has_zero_resonance(PotentialSpec::free()));
  EXPECT_FALSE(has_zero_resonance(PotentialSpec::square_well(5.0)));
}

TEST(Scan, ClippedByCurve) {
  ContourSpec c = contour(1.5);
  ScanRegion r = box(-3.0, 3.0, -2.0, 2.0);
  r.clip = c;
  const auto res = scan(r, PotentialSpec::delta(4.0), c);  // zero at -2, left of the curve
  EXPECT_TRUE(res.resonances.empty());
  EXPECT_EQ(res.clipped, 1);
}

TEST(Classify, OnCurveThrows) {
  ContourSpec c;
  Resonance r;
  r.lambda0 = c.g0_level;
  EXPECT_THROW(classify(r, c), OnCurve);
  r.lambda0 = 1.0;
  EXPECT_EQ(classify(r, c).kind, ResonanceKind::EigenvalueType);
}

TEST(Scan, ResonancesCsvFormat) {
  Resonance r;
  r.lambda0 = cplx(-1.0, 0.0);
  const std::string csv = resonances_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "re,im,multiplicity,kind,newton_residual");
}
