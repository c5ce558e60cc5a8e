#include "resonwave/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resonwave/errors.hpp"
#include "resonwave/jost.hpp"
#include "resonwave/numerics.hpp"
#include "resonwave/oracle.hpp"

namespace resonwave {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

void axpy(Field& y, cplx a, const Field& x) {
  for (std::size_t k = 0; k < y.values.size(); ++k) y.values[k] += a * x.values[k];
}

std::vector<double> window_weights(const CutoffWindow& w, const UniformGrid& g) {
  if (w.samples.size() != g.n_points || !(w.grid == g))
    throw InvalidArgument("window grid does not match the evaluation grid");
  return w.samples;
}

Field windowed(const Field& f, const CutoffWindow& w) { return apply_window(f, w); }

}  // namespace

// ---------------------------------------------------------------------------

std::vector<cplx> poly_coeff(int kappa, cplx mu, int j) {
  if (kappa != 0 && kappa != 1) throw InvalidArgument("kappa must be 0 or 1");
  if (mu == 0.0) throw InvalidArgument("poly_coeff needs mu != 0");
  if (j < 1 || j > 6) throw InvalidArgument("poly_coeff supports 1 <= j <= 6");
  const cplx mk = kappa == 1 ? mu : cplx(1.0);
  if (j == 1) return {mk / (2.0 * mu)};
  if (j == 2) {
    const cplx c0 = (kappa == 1 ? cplx(1.0) : cplx(0.0)) / (4.0 * mu * mu) - mk / (4.0 * mu * mu * mu);
    return {c0, mk / (4.0 * mu * mu)};
  }
  // p(t_i) from the circle integral, then a polynomial fit through j points
  constexpr int n = 256;
  const double r = std::min(0.5 * std::abs(mu), 0.5);
  std::vector<double> ts(j);
  std::vector<cplx> vs(j);
  for (int i = 0; i < j; ++i) {
    const double t = static_cast<double>(i);
    cplx acc{};
    for (int k = 0; k < n; ++k) {
      const cplx d = r * std::exp(kI * (2.0 * kPi * (k + 0.5) / n));
      const cplx l = mu + d;
      acc += (kappa == 1 ? l : cplx(1.0)) * std::exp(d * t) / std::pow(l * l - mu * mu, j) * d;
    }
    ts[i] = t;
    vs[i] = acc / static_cast<double>(n);
  }
  return vandermonde_solve(ts, vs);
}

std::vector<cplx> poly_coeff_leibniz(int kappa, cplx mu, int j) {
  if (mu == 0.0 || j < 1) throw InvalidArgument("poly_coeff_leibniz needs mu != 0 and j >= 1");
  std::vector<cplx> out(j, 0.0);
  for (int b = 0; b < j; ++b) {
    cplx acc{};
    for (int a = 0; a <= std::min(kappa, j - 1 - b); ++a) {
      const int c = j - 1 - a - b;
      const cplx da = kappa == 0 ? cplx(1.0) : (a == 0 ? mu : cplx(1.0));
      // d^c/d lambda^c (lambda + mu)^{-j} at lambda = mu
      double rising = 1.0;
      for (int q = 0; q < c; ++q) rising *= (j + q);
      const cplx dc = ((c % 2) ? -1.0 : 1.0) * rising * std::pow(2.0 * mu, -(j + c));
      acc += da * dc / (factorial(a) * factorial(b) * factorial(c));
    }
    out[b] = acc;
  }
  return out;
}

UniformGrid window_grid(const UniformGrid& g, int index) {
  const double h = g.spacing();
  const double edge = index + 1.0;
  const long lo = static_cast<long>(std::ceil((-edge - g.x_min) / h - 1e-9));
  const long hi = static_cast<long>(std::floor((edge - g.x_min) / h + 1e-9));
  if (lo < 0 || hi >= static_cast<long>(g.n_points))
    throw InvalidArgument("grid too small for cutoff window " + std::to_string(index));
  UniformGrid w;
  w.x_min = g.x(lo);
  w.x_max = g.x(hi);
  w.n_points = static_cast<std::size_t>(hi - lo + 1);
  return w;
}

std::vector<Field> circle_moments(const ResolventWorkspace& ws, cplx mu, double radius, int count,
                                  int n_points) {
  std::vector<Field> rf(n_points);
  std::vector<cplx> lam(n_points);
  for (int k = 0; k < n_points; ++k) lam[k] = mu + radius * std::exp(kI * (2.0 * kPi * (k + 0.5) / n_points));
  parallel_for(n_points, [&](std::size_t k) { rf[k] = ws.apply(lam[k]); });
  std::vector<Field> g(count, Field(ws.grid(), ws.dim()));
  for (int k = 0; k < n_points; ++k) {
    const cplx l = lam[k];
    cplx w = 2.0 / n_points * l * (l - mu);
    for (int j = 0; j < count; ++j) {
      axpy(g[j], w, rf[k]);
      w *= l * l - mu * mu;
    }
  }
  return g;
}

Field spectral_projection_apply(cplx mu, const LocalizedState& f, const PotentialSpec& V,
                                const UniformGrid& eval_grid, double radius) {
  ResolventWorkspace ws(f, eval_grid, V);
  return circle_moments(ws, mu, radius, 1)[0];
}

Field delta_projection(const LocalizedState& f, const PotentialSpec& V, const UniformGrid& eval_grid) {
  if (V.kind != PotentialKind::Delta || V.alpha == 0.0)
    throw InvalidArgument("delta_projection needs a delta interaction with alpha != 0");
  const cplx a = V.alpha;
  const double beta = V.beta;
  const cplx q =
      integrate_state(f, f.support_lo, f.support_hi,
                      [&](double y) { return std::exp(0.5 * a * std::abs(y - beta)); }, 0, {beta});
  Field out(eval_grid, 1);
  for (std::size_t k = 0; k < eval_grid.n_points; ++k)
    out.at(k) = -0.5 * a * std::exp(0.5 * a * std::abs(eval_grid.x(k) - beta)) * q;
  return out;
}

Field numerator_derivative(const ResolventWorkspace& ws, cplx lambda, int order) {
  constexpr int n = 64;
  const double r = cauchy_radius(lambda);
  std::vector<Field> k(n);
  std::vector<cplx> d(n);
  for (int i = 0; i < n; ++i) d[i] = r * std::exp(kI * (2.0 * kPi * i / n));
  parallel_for(n, [&](std::size_t i) { k[i] = ws.apply_numerator(lambda + d[i]); });
  Field out(ws.grid(), ws.dim());
  const double fact = factorial(order);
  for (int i = 0; i < n; ++i) axpy(out, fact / (static_cast<double>(n) * std::pow(d[i], order)), k[i]);
  return out;
}

// ---------------------------------------------------------------------------

Field ResidueTerm::at(double t) const {
  Field out(spatial.front().grid, spatial.front().dim);
  cplx tp = 1.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    axpy(out, poly[k] * tp, spatial[k]);
    tp *= t;
  }
  out *= std::exp(lambda0 * t);
  return out;
}

ResidueTerm residue_term(const Resonance& r, int kappa, const LocalizedState& f, const PotentialSpec& V,
                         const UniformGrid& eval_grid, ResidueRoute route, double radius) {
  if (kappa != 0 && kappa != 1) throw InvalidArgument("kappa must be 0 or 1");
  const cplx mu = r.lambda0;
  const int m = r.multiplicity;
  if (mu == 0.0) throw InvalidArgument("residue at the origin belongs to the zero-resonance term");
  ResidueTerm term;
  term.lambda0 = mu;
  term.kappa = kappa;
  term.multiplicity = m;
  term.kind = r.kind;
  const cplx mk = kappa == 1 ? mu : cplx(1.0);

  if (route != ResidueRoute::Circle && V.kind == PotentialKind::Delta && V.alpha != 0.0) {
    if (std::abs(mu + 0.5 * V.alpha) > 1e-8 * (1.0 + std::abs(V.alpha)))
      throw InvalidArgument("the delta model has its only pole at -alpha/2");
    term.poly = {mk / (2.0 * mu)};
    term.spatial = {delta_projection(f, V, eval_grid)};
    return term;
  }

  const bool scalar_jost = V.dim == 1 && V.kind != PotentialKind::Delta;
  if (route != ResidueRoute::Circle && scalar_jost && m <= 2) {
    ResolventWorkspace ws(f, eval_grid, V);
    const Field K = ws.apply_numerator(mu);
    if (m == 1) {
      const cplx w1 = jost_function_derivative(mu, V, 1);
      if (std::abs(w1) < 1e-10) throw NonSimpleDerivative("W'(lambda0) vanishes at a zero reported as simple");
      term.poly = {mk / w1};
      term.spatial = {K};
      return term;
    }
    const cplx w2 = jost_function_derivative(mu, V, 2);
    const cplx w3 = jost_function_derivative(mu, V, 3);
    const Field J = numerator_derivative(ws, mu, 1);
    Field s0(eval_grid, 1);
    axpy(s0, 2.0 / w2 * (kappa == 1 ? cplx(1.0) : cplx(0.0)), K);
    axpy(s0, 2.0 / w2 * mk, J);
    axpy(s0, -2.0 * mk * w3 / (3.0 * w2 * w2), K);
    term.poly = {1.0, 2.0 * mk / w2};
    term.spatial = {s0, K};
    return term;
  }
  if (route == ResidueRoute::ClosedForm) throw InvalidArgument("no closed-form residue for this model");

  const double rad = radius > 0.0 ? radius : std::min(0.1, 0.5 * std::abs(mu));
  ResolventWorkspace ws(f, eval_grid, V);
  const std::vector<Field> g = circle_moments(ws, mu, rad, m);
  term.closed_form = false;
  term.poly.assign(m, 1.0);
  term.spatial.assign(m, Field(eval_grid, V.dim));
  for (int j = 1; j <= m; ++j) {
    const std::vector<cplx> p = poly_coeff(kappa, mu, j);
    for (std::size_t k = 0; k < p.size(); ++k) axpy(term.spatial[k], p[k], g[j - 1]);
  }
  return term;
}

// ---------------------------------------------------------------------------

Field ZeroResonanceTerm::at(double t) const {
  const Field& ref = !even_part.empty() ? even_part.front() : odd_part.front();
  Field out(ref.grid, ref.dim);
  for (std::size_t j = 0; j < even_part.size(); ++j)
    axpy(out, std::pow(t, 2 * j) / factorial(2 * j), even_part[j]);
  for (std::size_t j = 0; j < odd_part.size(); ++j)
    axpy(out, std::pow(t, 2 * j + 1) / factorial(2 * j + 1), odd_part[j]);
  return out;
}

std::vector<Field> laurent_moments(const ResolventWorkspace& ws, double radius, int max_order, int n_points) {
  std::vector<Field> rf(n_points);
  std::vector<cplx> lam(n_points);
  for (int k = 0; k < n_points; ++k) lam[k] = radius * std::exp(kI * (2.0 * kPi * (k + 0.5) / n_points));
  parallel_for(n_points, [&](std::size_t k) { rf[k] = ws.apply(lam[k]); });
  std::vector<Field> c(max_order, Field(ws.grid(), ws.dim()));
  for (int k = 0; k < n_points; ++k) {
    cplx w = lam[k] / static_cast<double>(n_points);
    for (int m = 0; m < max_order; ++m) {
      axpy(c[m], w, rf[k]);
      w *= lam[k];
    }
  }
  return c;
}

std::optional<ZeroResonanceTerm> zero_resonance_term(int kappa, const LocalizedState& f,
                                                     const PotentialSpec& V, const UniformGrid& eval_grid,
                                                     double radius) {
  if (!has_zero_resonance(V)) return std::nullopt;
  ResolventWorkspace ws(f, eval_grid, V);
  constexpr int kOrders = 4;
  const std::vector<Field> c = laurent_moments(ws, radius, kOrders);
  ZeroResonanceTerm z;
  z.kappa = kappa;
  // c[m-1] multiplies t^{m-1-kappa}/(m-1-kappa)!
  for (int m = 1; m <= kOrders; ++m) {
    const int p = m - 1 - kappa;
    if (p < 0) continue;
    if (p % 2 == 0) {
      z.even_part.resize(p / 2 + 1, Field(eval_grid, V.dim));
      z.even_part[p / 2] = c[m - 1];
    } else {
      z.odd_part.resize((p - 1) / 2 + 1, Field(eval_grid, V.dim));
      z.odd_part[(p - 1) / 2] = c[m - 1];
    }
  }
  return z;
}

// ---------------------------------------------------------------------------

LinePath tail_path(const ContourSpec& c) {
  return {[c](double s) { return c.point(s); }, [c](double s) { return c.tangent(s); }};
}

LinePath bromwich_path(double gamma) {
  return {[gamma](double s) { return cplx(gamma, s); }, [](double) { return kI; }};
}

LineResult laplace_line(const ResolventWorkspace& ws, const CutoffWindow& window, int power,
                        const LinePath& path, const std::vector<double>& times, const LineOptions& opts) {
  const UniformGrid& g = ws.grid();
  const std::vector<double> phi = window_weights(window, g);
  const int d = ws.dim();
  const std::size_t npts = g.n_points, block = npts * d, nt = times.size();
  const double h = g.spacing();
  double tmax = 0.0;
  for (double t : times) tmax = std::max(tmax, t);

  const bool subtract = opts.leading.has_value();
  if (subtract && !(opts.leading->grid == g && opts.leading->dim == d))
    throw InvalidArgument("leading term must live on the evaluation grid");
  const double s0 = opts.s_trunc;

  BatchIntegrand integrand = [&](std::span<const double> s, std::vector<CVector>& out) {
    parallel_for(s.size(), [&](std::size_t i) {
      const cplx l = path.point(s[i]);
      Field r = ws.apply(l);
      if (subtract && std::abs(s[i]) > s0) axpy(r, -1.0 / (l * l), *opts.leading);
      const cplx fac = std::pow(l, power) * path.tangent(s[i]) / (2.0 * kPi * kI);
      CVector v(block * nt);
      for (std::size_t it = 0; it < nt; ++it) {
        const cplx e = std::exp(l * times[it]) * fac;
        for (std::size_t k = 0; k < npts; ++k)
          for (int c = 0; c < d; ++c) v(it * block + k * d + c) = e * phi[k] * r.values[k * d + c];
      }
      out[i] = std::move(v);
    });
  };
  VectorNorm norm = [&](const CVector& v) {
    double m = 0.0;
    for (std::size_t it = 0; it < nt; ++it) m = std::max(m, v.segment(it * block, block).norm());
    return m * std::sqrt(h);
  };

  LineResult res;
  auto piece = [&](double a, double b) {
    AdaptiveOptions o;
    o.abs_tol = 0.125 * opts.quad_tol;
    o.initial_intervals = std::max(8, static_cast<int>(std::ceil(std::abs(b - a) * std::max(tmax, 1.0) / (8.0 * kPi))));
    AdaptiveResult r = integrate_gk15(integrand, a, b, o, norm);
    res.evaluations += r.evaluations;
    res.quad_error += r.error;
    return r.value;
  };

  double S = opts.s_trunc;
  CVector total = piece(-S, 0.0) + piece(0.0, S);
  bool ok = false;
  for (int k = 0; k < opts.max_doublings; ++k) {
    const CVector inc = piece(-2.0 * S, -S) + piece(S, 2.0 * S);
    total += inc;
    S *= 2.0;
    res.last_increment = norm(inc);
    if (res.last_increment < opts.quad_tol) {
      ok = true;
      break;
    }
  }
  res.truncation = S;
  if (!ok) throw TruncationNotConverged("line integral truncation did not converge", res.last_increment);
  res.values.assign(nt, Field(g, d));
  for (std::size_t it = 0; it < nt; ++it)
    for (std::size_t k = 0; k < block; ++k) res.values[it].values[k] = total(it * block + k);

  if (subtract) {
    // (1/2 pi i) \int_{|s| > s0} e^{lambda t} lambda^q d lambda, q = power - 2, per t:
    // the full-path value minus a cheap scalar quadrature over [-s0, s0]
    const int q = power - 2;
    BatchIntegrand scalar = [&](std::span<const double> s, std::vector<CVector>& out) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const cplx l = path.point(s[i]);
        const cplx fac = std::pow(l, q) * path.tangent(s[i]) / (2.0 * kPi * kI);
        CVector v(nt);
        for (std::size_t it = 0; it < nt; ++it) v(it) = std::exp(l * times[it]) * fac;
        out[i] = std::move(v);
      }
    };
    AdaptiveOptions o;
    o.abs_tol = 1e-14;
    o.initial_intervals = std::max(8, static_cast<int>(std::ceil(2.0 * s0 * std::max(tmax, 1.0) / kPi)));
    const CVector inner =
        integrate_gk15(scalar, -s0, s0, o, [](const CVector& v) { return v.cwiseAbs().maxCoeff(); }).value;
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = times[it];
      const double full = opts.origin_left && t > 0.0 ? std::pow(t, -q - 1) / factorial(-q - 1) : 0.0;
      const cplx c = full - inner(it);
      for (std::size_t k = 0; k < npts; ++k)
        for (int cc = 0; cc < d; ++cc) res.values[it].at(k, cc) += c * phi[k] * opts.leading->at(k, cc);
    }
  }
  return res;
}

LineResult tail_integral(const std::vector<double>& times, const LocalizedState& f, int n,
                         const ContourSpec& contour, WaveKind kind, const CutoffWindow& window,
                         const PotentialSpec& V) {
  contour.validate();
  if (n < 1) throw InvalidArgument("smoothing order n must be at least 1");
  if (!in_domain(f, V, n)) throw InvalidArgument("state is not in the domain of A^n");
  const LocalizedState g = apply_generator(f, V, n);
  ResolventWorkspace ws(g, window.grid, V);
  LineOptions o;
  o.s_trunc = contour.im_truncation;
  o.quad_tol = contour.quad_tol;
  if (in_domain(f, V, n + 1)) o.leading = sample_on(g, window.grid);
  o.origin_left = !contour.right_of_curve(0.0);
  return laplace_line(ws, window, kappa_of(kind) - 2 * n, tail_path(contour), times, o);
}

// ---------------------------------------------------------------------------

Field ExpansionReport::residue_sum(std::size_t k) const {
  const double t = times[k];
  Field out(window.grid, tail.empty() ? 1 : tail[k].dim);
  for (const auto& term : terms) out += windowed(term.at(t), window);
  if (zero_term) out += windowed(zero_term->at(t), window);
  if (taylor_block) out += taylor[k];
  return out;
}

Field ExpansionReport::reconstruction(std::size_t k) const { return residue_sum(k) + tail[k]; }

ExpansionReport expand(WaveKind kind, const std::vector<double>& times, const LocalizedState& f,
                       const PotentialSpec& V, const ContourSpec& contour, const CutoffWindow& window, int n,
                       const ExpansionOptions& opts) {
  contour.validate();
  V.validate();
  if (times.empty()) throw InvalidArgument("no times requested");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("times must be finite and nonnegative");
  if (f.dim != V.dim) throw InvalidArgument("state and potential dimensions differ");

  ExpansionReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.times = times;
  const UniformGrid wg = window_grid(f.grid, window.index);
  rep.window = cutoff_window(window.index, wg);
  const int kappa = kappa_of(kind);

  const ScanRegion region = opts.region ? *opts.region : default_scan_region(V, contour);
  ScanRegion clipped = region;
  clipped.clip = contour;
  const ScanResult sr = scan(clipped, V, contour);
  rep.scan_count = sr.total_count;

  // circle radii stay clear of every other located zero and of the origin
  std::vector<cplx> all;
  for (const auto& r : sr.resonances) all.push_back(r.lambda0);
  double nearest_to_origin = std::numeric_limits<double>::infinity();
  for (const auto& r : sr.resonances) nearest_to_origin = std::min(nearest_to_origin, std::abs(r.lambda0));
  for (const auto& r : sr.resonances) {
    double rad = std::min(0.1, 0.4 * std::abs(r.lambda0));
    for (cplx z : all)
      if (z != r.lambda0) rad = std::min(rad, 0.4 * std::abs(z - r.lambda0));
    rep.terms.push_back(residue_term(r, kappa, f, V, wg, ResidueRoute::Auto, rad));
  }

  const bool origin_inside = contour.g_star(0.0) + contour.eps < 0.0;
  if (origin_inside) {
    const double r0 = std::min(0.25, 0.4 * nearest_to_origin);
    rep.zero_term = zero_resonance_term(kappa, f, V, wg, r0);
  } else {
    rep.taylor_block = true;
    for (double t : times) {
      Field acc(wg, V.dim);
      for (int j = 0; j < n; ++j) {
        const Field aj = sample_on(apply_generator(f, V, j), wg);
        const int p = 2 * j + (kind == WaveKind::Sine ? 1 : 0);
        axpy(acc, std::pow(t, p) / factorial(p), aj);
      }
      rep.taylor.push_back(windowed(acc, rep.window));
    }
  }

  const LineResult tail = tail_integral(times, f, n, contour, kind, rep.window, V);
  rep.tail = tail.values;
  rep.tail_truncation = tail.truncation;
  for (const auto& fld : rep.tail) rep.tail_norm.push_back(l2_norm(fld));

  if (opts.with_oracle) {
    BromwichOptions bo;
    bo.quad_tol = opts.oracle_tol;
    const double gamma = opts.oracle_gamma > 0.0 ? opts.oracle_gamma : V.growth_bound() + 0.5;
    rep.oracle = bromwich_apply(kind, times, f, V, gamma, opts.oracle_n, rep.window, bo);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Field sum = rep.residue_sum(k);
      rep.residual_norm.push_back(l2_norm(rep.oracle[k] - sum));
      rep.oracle_gap.push_back(l2_norm(rep.oracle[k] - sum - rep.tail[k]));
    }
  }

  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (rep.tail_norm[k] > 0.0) {
      ts.push_back(times[k]);
      ls.push_back(std::log(rep.tail_norm[k]));
    }
  rep.fitted_decay_rate = fit_slope(ts, ls);
  rep.t_min = window.index + 1.0 + f.support_radius;
  return rep;
}

}  // namespace resonwave
