#include "resonwave/verify.hpp"

#include <cmath>
#include <functional>

#include "resonwave/errors.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/jost.hpp"
#include "resonwave/oracle.hpp"
#include "resonwave/resolvent.hpp"
#include "resonwave/resonances.hpp"

namespace resonwave {

namespace {

using Body = std::function<CheckResult()>;

void run(std::vector<CheckResult>& out, const std::string& name, const Body& body) {
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.name = name;
  out.push_back(r);
}

CheckResult skip(const std::string& why) {
  CheckResult r;
  r.skipped = true;
  r.passed = true;
  r.detail = why;
  return r;
}

CheckResult bound(double value, double tol) {
  CheckResult r;
  r.value = value;
  r.tolerance = tol;
  r.passed = std::isfinite(value) && value <= tol;
  return r;
}

}  // namespace

std::vector<CheckResult> verify_problem(const ProblemSpec& p) {
  const PotentialSpec& V = p.potential;
  const LocalizedState f = sample_state(p.state, p.grid, V.dim);
  std::vector<CheckResult> out;

  run(out, "jost_cauchy_riemann", [&] {
    const AnalyticFn w = scan_function(V);
    const cplx z{0.7, 0.3};
    const double h = 1e-6;
    const cplx dx = (w(z + h) - w(z - h)) / (2.0 * h);
    const cplx dy = (w(z + kI * h) - w(z - kI * h)) / (2.0 * h);
    return bound(std::abs(dx + kI * dy) / (std::abs(dx) + 1e-300), 1e-6);
  });

  run(out, "wronskian_constancy", [&]() -> CheckResult {
    if (V.kind != PotentialKind::PiecewiseConstant || V.dim != 1) return skip("scalar piecewise models only");
    const cplx l{1.0, 0.5};
    JostSolver js(V, l);
    const auto [lo, hi] = V.support();
    double ref = 0.0, dev = 0.0;
    cplx w0{};
    for (int k = 0; k <= 40; ++k) {
      const double x = lo - 1.0 + (hi - lo + 2.0) * k / 40.0;
      cplx up, dup, um, dum;
      js.plus(x, up, dup);
      js.minus(x, um, dum);
      const cplx w = up * dum - dup * um;
      if (k == 0) {
        w0 = w;
        ref = std::abs(w);
      }
      dev = std::max(dev, std::abs(w - w0));
    }
    return bound(dev / ref, 1e-9);
  });

  run(out, "closed_form_vs_transfer", [&]() -> CheckResult {
    if (!V.is_single_block_scalar()) return skip("single-block scalar wells only");
    double worst = 0.0;
    for (cplx l : {cplx(1.0, 0.0), cplx(0.3, 2.0), cplx(-1.5, 4.0), cplx(2.5, -1.0)}) {
      const cplx a = jost_function(l, V).w_scaled, b = jost_function_transfer(l, V).w_scaled;
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    return bound(worst, 1e-10);
  });

  run(out, "resolvent_identity", [&]() -> CheckResult {
    double worst = 0.0;
    for (cplx l : {cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
      if (near_pole(l, V)) continue;
      worst = std::max(worst, resolvent_residual(l, f, V));
    }
    return bound(worst, 1e-4);
  });

  ScanResult sr;
  run(out, "scan_accounting", [&] {
    sr = scan(default_scan_region(V, p.contour), V, p.contour);
    int sum = sr.origin_excluded + sr.clipped;
    for (const auto& r : sr.resonances) sum += r.multiplicity;
    CheckResult r = bound(std::abs(sum - sr.total_count), 0.0);
    r.detail = std::to_string(sr.total_count) + " zeros counted";
    return r;
  });

  run(out, "zero_residuals", [&] {
    const AnalyticFn w = scan_function(V);
    double worst = 0.0;
    for (const auto& r : sr.resonances) {
      worst = std::max(worst, r.newton_residual);
      if (winding_circle(w, r.lambda0, 1e-3) != r.multiplicity) worst = std::max(worst, 1.0);
    }
    return bound(worst, 1e-8);
  });

  run(out, "conjugate_symmetry", [&]() -> CheckResult {
    if (!V.has_real_coefficients()) return skip("complex potential");
    double worst = 0.0;
    for (const auto& r : sr.resonances) {
      double best = 1e300;
      for (const auto& q : sr.resonances) best = std::min(best, std::abs(q.lambda0 - std::conj(r.lambda0)));
      // partners beyond the clipped box edge are not expected
      if (std::abs(r.lambda0.imag()) < 0.9 * std::min(p.contour.im_truncation, 12.0)) worst = std::max(worst, best);
    }
    return bound(worst, 1e-10 * 100.0);
  });

  run(out, "delta_projection_routes", [&]() -> CheckResult {
    if (V.kind != PotentialKind::Delta || V.alpha == 0.0) return skip("delta models only");
    const UniformGrid wg = window_grid(p.grid, p.window);
    const cplx mu = -0.5 * V.alpha;
    const Field a = spectral_projection_apply(mu, f, V, wg, std::min(0.5, 0.5 * std::abs(mu)));
    const Field b = delta_projection(f, V, wg);
    return bound(l2_norm(a - b) / (1.0 + l2_norm(b)), 1e-8);
  });

  run(out, "dalembert_functional_equation", [&]() -> CheckResult {
    if (V.kind != PotentialKind::Free || V.dim != 1) return skip("free scalar model only");
    const double h = p.grid.spacing();
    const double t = 32 * h, s = 16 * h;
    const Field cs = dalembert_cosine(s, f, p.grid);
    const Field lhs = dalembert_cosine(t + s, f, p.grid) + dalembert_cosine(t - s, f, p.grid);
    const Field rhs = cplx(2.0) * dalembert_cosine(t, state_from_field(cs), p.grid);
    return bound(l2_norm(lhs - rhs), 1e-10);
  });

  const bool smooth = in_domain(f, V, p.expansion.n + 1) && f.has_profile();
  run(out, "oracle_agreement", [&]() -> CheckResult {
    if (!smooth) return skip("state not smooth enough for the Bromwich oracle");
    const double t = 1.0;
    const UniformGrid wg = window_grid(p.grid, p.window);
    const CutoffWindow w = cutoff_window(p.window, wg);
    const Field b = bromwich_apply(WaveKind::Cosine, t, f, V, V.growth_bound() + 0.5, 2, w);
    Field ref;
    if (V.kind == PotentialKind::Free && V.dim == 1)
      ref = apply_window(dalembert_cosine(t, f, wg), w);
    else if (V.kind == PotentialKind::Delta)
      ref = apply_window(delta_exact_cosine(t, f, V, wg), w);
    else
      return skip("no closed-form oracle for this model");
    return bound(l2_norm(b - ref), 1e-5);
  });

  run(out, "decomposition_identity", [&]() -> CheckResult {
    if (!smooth) return skip("state not in the domain of A^(n+1)");
    const UniformGrid wg = window_grid(p.grid, p.window);
    const ExpansionReport rep = expand(p.expansion.kind, p.expansion.times, f, V, p.contour,
                                       cutoff_window(p.window, wg), p.expansion.n);
    double worst = 0.0;
    for (double g : rep.oracle_gap) worst = std::max(worst, g);
    return bound(worst, 5.0 * (p.contour.quad_tol + 1e-5));
  });

  return out;
}

}  // namespace resonwave
