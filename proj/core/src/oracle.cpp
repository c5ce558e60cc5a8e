#include "resonwave/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "resonwave/errors.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/report_io.hpp"

namespace resonwave {

namespace {

// Sampled states are only known on their grid; the cone must stay inside it.
void check_cone(double t, const LocalizedState& f, const UniformGrid& g) {
  if (f.support_hi <= f.support_lo) return;
  const double h = g.spacing();
  if (f.support_lo - t - 2.0 * h < g.x_min || f.support_hi + t + 2.0 * h > g.x_max)
    throw InvalidArgument("light cone of the state leaves the grid");
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

Field dalembert_cosine(double t, const LocalizedState& f, const UniformGrid& eval_grid) {
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (!f.has_profile()) check_cone(t, f, f.grid);
  const int d = f.dim;
  Field out(eval_grid, d);
  std::vector<cplx> a(d), b(d);
  for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
    const double x = eval_grid.x(k);
    f.eval(x + t, a.data());
    f.eval(x - t, b.data());
    for (int c = 0; c < d; ++c) out.at(k, c) = 0.5 * (a[c] + b[c]);
  }
  return out;
}

Field dalembert_sine(double t, const LocalizedState& f, const UniformGrid& eval_grid) {
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (!f.has_profile()) check_cone(t, f, f.grid);
  const int d = f.dim;
  Field out(eval_grid, d);
  const auto one = [](double) { return cplx(1.0); };
  for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
    const double x = eval_grid.x(k);
    for (int c = 0; c < d; ++c) out.at(k, c) = 0.5 * integrate_state(f, x - t, x + t, one, c);
  }
  return out;
}

Field delta_exact_cosine(double t, const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid) {
  if (V.kind != PotentialKind::Delta) throw InvalidArgument("delta_exact_cosine needs a delta interaction");
  Field out = dalembert_cosine(t, f, eval_grid);
  const cplx a = V.alpha;
  const double beta = V.beta;
  for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
    const double rho = t - std::abs(eval_grid.x(k) - beta);
    if (rho <= 0.0) continue;
    const cplx r = integrate_state(
        f, beta - rho, beta + rho, [&](double y) { return std::exp(-0.5 * a * (rho - std::abs(y - beta))); }, 0,
        {beta});
    out.at(k) -= 0.25 * a * r;
  }
  return out;
}

Field delta_exact_sine(double t, const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid) {
  if (V.kind != PotentialKind::Delta) throw InvalidArgument("delta_exact_sine needs a delta interaction");
  Field out = dalembert_sine(t, f, eval_grid);
  const cplx a = V.alpha;
  const double beta = V.beta;
  for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
    const double rho = t - std::abs(eval_grid.x(k) - beta);
    if (rho <= 0.0) continue;
    const cplx r = integrate_state(
        f, beta - rho, beta + rho,
        [&](double y) { return -0.5 + 0.5 * std::exp(-0.5 * a * (rho - std::abs(y - beta))); }, 0, {beta});
    out.at(k) += r;
  }
  return out;
}

WaveState timestep_wave(double t, const LocalizedState& f, const LocalizedState& g, const PotentialSpec& V,
                        double dt) {
  const UniformGrid& grid = f.grid;
  if (!(g.grid == grid) || g.dim != f.dim) throw InvalidArgument("initial data must share a grid");
  if (V.dim != f.dim) throw InvalidArgument("state and potential dimensions differ");
  const double h = grid.spacing();
  if (!(dt > 0.0) || dt > 0.5 * h * (1.0 + 1e-12)) throw InvalidArgument("CFL violated: need 0 < dt <= h/2");
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (V.kind == PotentialKind::Delta && !grid.is_node(V.beta))
    throw InvalidArgument("delta centre must be a grid node");
  check_cone(t, f, grid);
  check_cone(t, g, grid);

  const int d = f.dim;
  const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
  const double k = t > 0.0 ? t / static_cast<double>(steps) : dt;
  const std::size_t n = f.values.size();

  double scale0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale0 = std::max(scale0, std::abs(f.values[i]) + t * std::abs(g.values[i]));
  const double guard = 1e6 * (1.0 + scale0) * std::exp((V.growth_bound() + 1.0) * (t + k));

  std::vector<cplx> prev = f.values, cur(n), next(n), au;
  apply_discrete_generator(V, grid, d, prev, au);
  for (std::size_t i = 0; i < n; ++i) cur[i] = prev[i] + k * g.values[i] + 0.5 * k * k * au[i];

  WaveState ws;
  ws.time = t;
  if (t == 0.0) {
    ws.u = f.as_field();
    ws.u_t = g.as_field();
    return ws;
  }
  // cur holds u at step s; loop runs to step `steps`, plus one for the velocity
  for (long s = 1; s <= steps; ++s) {
    apply_discrete_generator(V, grid, d, cur, au);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 2.0 * cur[i] - prev[i] + k * k * au[i];
      m = std::max(m, std::abs(next[i]));
    }
    if (!(m < guard)) throw NumericalError("leapfrog solution blew up");
    if (s == steps) {
      ws.u = Field(grid, d);
      ws.u.values = cur;
      ws.u_t = Field(grid, d);
      for (std::size_t i = 0; i < n; ++i) ws.u_t.values[i] = (next[i] - prev[i]) / (2.0 * k);
      break;
    }
    prev.swap(cur);
    cur.swap(next);
  }
  return ws;
}

std::vector<Field> bromwich_apply(WaveKind kind, const std::vector<double>& times, const LocalizedState& f,
                                  const PotentialSpec& V, double gamma, int n, const CutoffWindow& window,
                                  const BromwichOptions& opts) {
  if (!(gamma > V.growth_bound())) throw InvalidArgument("Bromwich line must lie right of the growth bound");
  if (n < 1) throw InvalidArgument("smoothing order n must be at least 1");
  if (!in_domain(f, V, n)) throw InvalidArgument("state is not in the domain of A^n");
  const LocalizedState g = apply_generator(f, V, n);
  ResolventWorkspace ws(g, window.grid, V);
  LineOptions o;
  o.s_trunc = opts.s_trunc;
  o.quad_tol = opts.quad_tol;
  o.max_doublings = opts.max_doublings;
  if (in_domain(f, V, n + 1)) o.leading = sample_on(g, window.grid);
  LineResult lr = laplace_line(ws, window, kappa_of(kind) - 2 * n, bromwich_path(gamma), times, o);
  std::vector<Field> powers;
  for (int j = 0; j < n; ++j) powers.push_back(apply_window(sample_on(apply_generator(f, V, j), window.grid), window));
  for (std::size_t it = 0; it < times.size(); ++it) {
    for (int j = 0; j < n; ++j) {
      const int p = 2 * j + (kind == WaveKind::Sine ? 1 : 0);
      lr.values[it] += cplx(std::pow(times[it], p) / factorial(p)) * powers[j];
    }
  }
  return lr.values;
}

Field bromwich_apply(WaveKind kind, double t, const LocalizedState& f, const PotentialSpec& V, double gamma, int n,
                     const CutoffWindow& window, const BromwichOptions& opts) {
  return bromwich_apply(kind, std::vector<double>{t}, f, V, gamma, n, window, opts).front();
}

std::string snapshot_csv(const Field& u) {
  std::string out = "x";
  if (u.dim == 1) {
    out += ",re,im\n";
  } else {
    for (int c = 0; c < u.dim; ++c) out += ",re_" + std::to_string(c) + ",im_" + std::to_string(c);
    out += "\n";
  }
  for (std::size_t k = 0; k < u.grid.n_points; ++k) {
    out += format_g17(u.grid.x(k));
    for (int c = 0; c < u.dim; ++c) out += "," + format_g17(u.at(k, c).real()) + "," + format_g17(u.at(k, c).imag());
    out += "\n";
  }
  return out;
}

}  // namespace resonwave
