#pragma once

#include <string>
#include <vector>

#include "resonwave/model.hpp"
#include "resonwave/state.hpp"

namespace resonwave {

/// (f(x+t) + f(x-t))/2 on eval_grid. Throws InvalidArgument if the light
/// cone of supp f leaves the grid.
Field dalembert_cosine(double t, const LocalizedState& f, const UniformGrid& eval_grid);
/// (1/2) \int_{x-t}^{x+t} f.
Field dalembert_sine(double t, const LocalizedState& f, const UniformGrid& eval_grid);

/// Exact cosine and sine families of the delta interaction, by
/// characteristics: the free part plus a reflected wave integrated over
/// |x-beta| + |y-beta| < t.
Field delta_exact_cosine(double t, const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid);
Field delta_exact_sine(double t, const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid);

struct WaveState {
  Field u;
  Field u_t;
  double time = 0.0;
};

/// Leapfrog for u_tt = A u with u(0) = f, u_t(0) = g on f's grid. dt is
/// shrunk so that a whole number of steps reaches t. Throws InvalidArgument
/// on CFL (dt > h/2) or cone violations, NumericalError on blow-up.
WaveState timestep_wave(double t, const LocalizedState& f, const LocalizedState& g, const PotentialSpec& V,
                        double dt);

struct BromwichOptions {
  double s_trunc = 64.0;
  double quad_tol = 1e-7;
  int max_doublings = 7;
};

/// phi_i C(t) f (or S(t) f) from the vertical line Re lambda = gamma, with the
/// Taylor block of order n added back. One field per t, on window.grid.
std::vector<Field> bromwich_apply(WaveKind kind, const std::vector<double>& times, const LocalizedState& f,
                                  const PotentialSpec& V, double gamma, int n, const CutoffWindow& window,
                                  const BromwichOptions& opts = {});
Field bromwich_apply(WaveKind kind, double t, const LocalizedState& f, const PotentialSpec& V, double gamma,
                     int n, const CutoffWindow& window, const BromwichOptions& opts = {});

/// Columns x, re, im (re_k, im_k per component when dim > 1).
std::string snapshot_csv(const Field& u);

}  // namespace resonwave
