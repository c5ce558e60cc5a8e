#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "resonwave/model.hpp"
#include "resonwave/resolvent.hpp"
#include "resonwave/resonances.hpp"
#include "resonwave/state.hpp"

namespace resonwave {

// ---------------------------------------------------------------------------
// polynomial factors

/// Coefficients (by power of t) of p with p(t) e^{mu t} = (1/2 pi i) \oint
/// lambda^kappa e^{lambda t} (lambda^2 - mu^2)^{-j} d lambda around mu.
/// Closed forms for j <= 2; trapezoid on a circle plus a Vandermonde fit otherwise.
std::vector<cplx> poly_coeff(int kappa, cplx mu, int j);

/// Same polynomial from the Leibniz rule for the residue. Exact up to rounding.
std::vector<cplx> poly_coeff_leibniz(int kappa, cplx mu, int j);

// ---------------------------------------------------------------------------
// evaluation grid inside a window

/// Nodes of `g` inside [-(i+1), i+1], with the same spacing.
UniformGrid window_grid(const UniformGrid& g, int index);

/// Circle moments G_j f = (1/pi i) \oint lambda (lambda^2 - mu^2)^{j-1} R(lambda) f d lambda,
/// j = 1..count, by an n-point trapezoid rule on |lambda - mu| = radius.
std::vector<Field> circle_moments(const ResolventWorkspace& ws, cplx mu, double radius, int count,
                                  int n_points = 64);

/// Spectral projection (1/pi i) \oint lambda R(lambda) f d lambda around mu.
Field spectral_projection_apply(cplx mu, const LocalizedState& f, const PotentialSpec& V,
                                const UniformGrid& eval_grid, double radius);

/// Rank-one projection of the delta model at mu = -alpha/2:
/// (-alpha/2) e^{alpha|x-beta|/2} \int e^{alpha|y-beta|/2} f(y) dy.
Field delta_projection(const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid);

/// d/d lambda of K~(lambda) f = W(lambda) R(lambda) f, by a Cauchy integral.
Field numerator_derivative(const ResolventWorkspace& ws, cplx lambda, int order = 1);

// ---------------------------------------------------------------------------
// residue terms

/// term(t) = e^{lambda0 t} sum_k t^k poly[k] spatial[k].
struct ResidueTerm {
  cplx lambda0;
  int kappa = 1;
  int multiplicity = 1;
  ResonanceKind kind = ResonanceKind::ResonanceType;
  std::vector<cplx> poly;
  std::vector<Field> spatial;
  bool closed_form = true;

  int degree() const { return static_cast<int>(poly.size()) - 1; }
  Field at(double t) const;
};

enum class ResidueRoute { Auto, ClosedForm, Circle };

/// Res_{lambda0} e^{lambda t} lambda^kappa R(lambda) f on eval_grid. Closed
/// forms: delta projection; F/W' at simple zeros and the second-order rule at
/// double zeros of scalar Jost functions. Otherwise circle moments with radius
/// `radius` (<= 0 picks min(0.1, |lambda0|/2)).
ResidueTerm residue_term(const Resonance& r, int kappa, const LocalizedState& f, const PotentialSpec& V,
                         const UniformGrid& eval_grid, ResidueRoute route = ResidueRoute::Auto,
                         double radius = 0.0);

/// Contribution of a pole of R at lambda = 0, split by parity of the power of t:
/// even[j] multiplies t^{2j}/(2j)!, odd[j] multiplies t^{2j+1}/(2j+1)!.
struct ZeroResonanceTerm {
  int kappa = 1;
  std::vector<Field> even_part;
  std::vector<Field> odd_part;

  Field at(double t) const;
};

/// Laurent moments c_m = (1/2 pi i) \oint lambda^{m-1} R(lambda) f, m = 1..max_order,
/// on |lambda| = radius.
std::vector<Field> laurent_moments(const ResolventWorkspace& ws, double radius, int max_order,
                                   int n_points = 64);

/// Res_0 e^{lambda t} lambda^kappa R(lambda) f, or nullopt when lambda = 0 is not a
/// zero of the Jost function.
std::optional<ZeroResonanceTerm> zero_resonance_term(int kappa, const LocalizedState& f,
                                                     const PotentialSpec& V, const UniformGrid& eval_grid,
                                                     double radius = 0.25);

// ---------------------------------------------------------------------------
// line integrals of the resolvent

/// lambda(s) and d lambda / ds along a path parametrised by s in R.
struct LinePath {
  std::function<cplx(double)> point;
  std::function<cplx(double)> tangent;
};

LinePath tail_path(const ContourSpec& c);
LinePath bromwich_path(double gamma);

struct LineOptions {
  double s_trunc = 64.0;   // initial symmetric truncation
  double quad_tol = 1e-6;  // absolute, windowed L2, max over t
  int max_doublings = 7;
  /// g sampled on the evaluation grid. When set (g must lie in the domain of
  /// A), beyond s_trunc the integrand uses R(lambda)g - g/lambda^2 and the
  /// g/lambda^2 part is added in closed form, which speeds up truncation.
  std::optional<Field> leading;
  /// Whether the origin lies to the left of the path; decides the closed form
  /// of the full-path integral of e^{lambda t} lambda^q.
  bool origin_left = true;
};

struct LineResult {
  std::vector<Field> values;  // one per t, already multiplied by the window
  double truncation = 0.0;
  double last_increment = 0.0;
  double quad_error = 0.0;
  int evaluations = 0;
};

/// phi_i (1/2 pi i) p.v.\int e^{lambda t} lambda^power R(lambda) g d lambda along the path,
/// truncated symmetrically with doubling until the increment is below quad_tol.
/// Throws TruncationNotConverged.
LineResult laplace_line(const ResolventWorkspace& ws, const CutoffWindow& window, int power,
                        const LinePath& path, const std::vector<double>& times, const LineOptions& opts);

/// phi_i times the contour tail of the cosine (kappa 1) or sine (kappa 0) expansion.
LineResult tail_integral(const std::vector<double>& times, const LocalizedState& f, int n,
                         const ContourSpec& contour, WaveKind kind, const CutoffWindow& window,
                         const PotentialSpec& V);

// ---------------------------------------------------------------------------
// full expansion

struct ExpansionOptions {
  std::optional<ScanRegion> region;  // default: effective scan box of the contour
  bool with_oracle = true;
  int oracle_n = 2;            // smoothing order of the Bromwich oracle
  double oracle_gamma = 0.0;   // <= 0: growth bound + 0.5
  double oracle_tol = 1e-7;
};

struct ExpansionReport {
  WaveKind kind = WaveKind::Cosine;
  int n = 1;
  std::vector<double> times;
  CutoffWindow window;
  std::vector<ResidueTerm> terms;
  std::optional<ZeroResonanceTerm> zero_term;
  bool taylor_block = false;     // included only when 0 lies left of the tail curve
  std::vector<Field> taylor;     // per t, windowed
  std::vector<Field> tail;       // per t, windowed
  std::vector<double> tail_norm;
  std::vector<double> oracle_gap;     // ||phi (sum + tail - oracle)||, per t
  std::vector<double> residual_norm;  // ||phi (oracle - sum of terms)||, per t
  std::vector<Field> oracle;          // per t, windowed
  double fitted_decay_rate = 0.0;     // slope of log tail_norm against t
  double t_min = 0.0;
  double tail_truncation = 0.0;
  int scan_count = 0;

  /// phi_i (sum of residue terms + zero term + taylor block) at times[k].
  Field residue_sum(std::size_t k) const;
  Field reconstruction(std::size_t k) const;
};

ExpansionReport expand(WaveKind kind, const std::vector<double>& times, const LocalizedState& f,
                       const PotentialSpec& V, const ContourSpec& contour, const CutoffWindow& window, int n,
                       const ExpansionOptions& opts = {});

}  // namespace resonwave
