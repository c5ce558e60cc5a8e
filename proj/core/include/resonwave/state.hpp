#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "resonwave/model.hpp"

namespace resonwave {

/// Analytic description of a compactly supported profile. Piecewise smooth
/// between breaks(); eval() reports derivatives on either side of a break.
class Profile {
 public:
  virtual ~Profile() = default;

  virtual int dim() const = 0;
  /// Number of classical derivatives available on each smooth piece.
  virtual int smoothness() const = 0;
  virtual std::pair<double, double> support() const = 0;
  virtual std::vector<double> breaks() const = 0;

  /// Writes the deriv-th derivative at x into out[0..dim). side < 0 selects
  /// the left limit at a break, side > 0 the right one, 0 the average.
  virtual void eval(double x, int deriv, int side, cplx* out) const = 0;
};

/// A compactly supported state sampled on a grid. When `profile` is set it
/// is the exact function and the samples are its node values; otherwise the
/// state is known only through samples.
struct LocalizedState {
  UniformGrid grid;
  int dim = 1;
  std::vector<cplx> values;
  double support_radius = 0.0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::shared_ptr<const Profile> profile;

  /// Value (component comp) at an arbitrary x: exact profile if present,
  /// otherwise local cubic interpolation of the samples.
  void eval(double x, cplx* out) const;
  std::vector<double> breaks() const;
  Field as_field() const;
  bool has_profile() const { return static_cast<bool>(profile); }
};

/// Shape id plus parameters, as read from a config document.
///   indicator  {a, b}
///   gaussian   {center, sigma, radius}        truncated at |x-center| = radius
///   bump       {center, width}                exp(1 - 1/(1-u^2)), u = (x-center)/width
///   exp_window {beta, rate_re, rate_im, inner, outer}
///              exp(rate |x-beta|) times a smooth cutoff equal to 1 for
///              |x-beta| <= inner and 0 beyond outer
///   samples    values listed in `samples`, one per grid node
struct StateSpec {
  std::string shape = "indicator";
  std::map<std::string, double> params;
  std::vector<cplx> samples;
  std::vector<cplx> direction;  // vector-valued models; empty means e_1
};

bool operator==(const StateSpec& a, const StateSpec& b);

/// Builds a state on the grid. Throws InvalidArgument if the support leaves
/// the grid or parameters are inconsistent.
LocalizedState sample_state(const StateSpec& spec, const UniformGrid& grid, int dim = 1);

/// \int_a^b w(y) f_comp(y) dy with 8-point Gauss-Legendre panels on the
/// grid cells, split at the breaks of f and at `extra`.
cplx integrate_state(const LocalizedState& f, double a, double b, const std::function<cplx(double)>& w,
                     int comp = 0, const std::vector<double>& extra = {});

/// Values of f at the nodes of another grid.
Field sample_on(const LocalizedState& f, const UniformGrid& g);

/// Wraps samples into a state (support detected from nonzero samples).
LocalizedState state_from_field(const Field& f);

/// A f with A = d^2/dx^2 + V. Exact piecewise differentiation when a profile
/// is present, fourth-order finite differences otherwise.
LocalizedState apply_generator(const LocalizedState& f, const PotentialSpec& V, int power = 1);

/// True if f lies in the domain of A^power: enough smoothness and the
/// interface conditions (C^1 matching across breakpoints, derivative jump
/// alpha*u at a delta centre) hold for f, A f, ..., A^{power-1} f.
bool in_domain(const LocalizedState& f, const PotentialSpec& V, int power);

/// Pointwise A applied to a field, second-order centred differences, with
/// the delta interaction as a jump stencil. Used by the time stepper.
void apply_discrete_generator(const PotentialSpec& V, const UniformGrid& g, int dim,
                              const std::vector<cplx>& u, std::vector<cplx>& out);

}  // namespace resonwave
