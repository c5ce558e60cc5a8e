#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resonwave/model.hpp"

namespace resonwave {

enum class ResonanceKind { EigenvalueType, ResonanceType };

const char* to_string(ResonanceKind k);

struct Resonance {
  cplx lambda0;
  int multiplicity = 1;
  ResonanceKind kind = ResonanceKind::ResonanceType;
  /// |W_scaled(lambda0)| relative to its mean modulus on the r_loc circle.
  double newton_residual = 0.0;
};

/// Axis-aligned box in the lambda plane. With `clip` set, zeros left of
/// Re lambda = g_star(Im lambda) + eps are discarded.
struct ScanRegion {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  std::optional<ContourSpec> clip;

  void validate() const;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

using AnalyticFn = std::function<cplx(cplx)>;

/// Winding number of f around the closed polygon through `corners`, by phase
/// tracking with segment refinement. Throws BoundaryZero when the refinement
/// stalls on a near-zero of f.
int winding_polygon(const AnalyticFn& f, const std::vector<cplx>& corners);
int winding_box(const AnalyticFn& f, double re_min, double re_max, double im_min, double im_max);
int winding_circle(const AnalyticFn& f, cplx center, double radius);

/// Default search box for a contour: Im in +-min(S_max, 12), Re from just
/// left of the tail curve to past the growth bound, clipped to the curve.
ScanRegion default_scan_region(const PotentialSpec& V, const ContourSpec& contour);

/// The function whose zeros are scanned: W_scaled for piecewise and free
/// models, 2 lambda + alpha for Delta.
AnalyticFn scan_function(const PotentialSpec& V);

/// Zeros of W_scaled in the box, with multiplicity. A zero on the boundary
/// triggers up to three 1% dilations before BoundaryZero is thrown.
int count_zeros(const ScanRegion& box, const PotentialSpec& V);

/// True if lambda = 0 is a zero of the Jost function (winding on |lambda| = 1e-3).
bool has_zero_resonance(const PotentialSpec& V);

struct ScanResult {
  std::vector<Resonance> resonances;  // sorted by (Re, Im)
  ScanRegion region;                  // the box actually used (after any dilation)
  int total_count = 0;                // argument-principle count for the box
  int origin_excluded = 0;            // multiplicity dropped within 1e-3 of 0
  int clipped = 0;                    // multiplicity dropped left of the curve
  int boxes = 0;                      // boxes whose boundary was integrated
  int dilations = 0;
};

/// Quadtree search driven by count_zeros, Newton refinement (Muller
/// fallback), multiplicity by winding on a circle of radius 1e-3. Every
/// counted zero is accounted for or NonConvergence is thrown.
ScanResult scan(const ScanRegion& region, const PotentialSpec& V, const ContourSpec& contour);

std::vector<Resonance> find_resonances(const ScanRegion& region, const PotentialSpec& V,
                                       const ContourSpec& contour);

/// Fills kind. Throws OnCurve if |Re lambda0 - g0_level| <= 1e-6.
Resonance classify(Resonance r, const ContourSpec& contour);

/// Newton iteration for a zero of f of the given multiplicity (Newton on
/// f^{(m-1)}, derivatives by Cauchy integrals). Returns nullopt on failure.
std::optional<cplx> refine_zero(const AnalyticFn& f, cplx start, int multiplicity, double tol = 1e-12,
                                int max_iter = 60);
std::optional<cplx> muller(const AnalyticFn& f, cplx z0, cplx z1, cplx z2, double tol = 1e-12,
                           int max_iter = 100);

std::string resonances_csv(const std::vector<Resonance>& rs);

}  // namespace resonwave
