#include "resonwave/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "resonwave/errors.hpp"
#include "resonwave/jost.hpp"
#include "resonwave/numerics.hpp"

namespace resonwave {

namespace {

constexpr int kNodesPerPanel = 8;
constexpr double kPanelPhase = 3.0;  // max (|lambda| + rate) * panel length
constexpr double kSmallLambda = 1e-4;
constexpr int kMaxRefine = 6;

/// Delta kernel by its Taylor series in lambda; valid for |lambda| small and alpha != 0.
cplx delta_kernel_series(double x, double y, cplx lambda, cplx alpha, double beta) {
  const double a = std::abs(x - y);
  const double b = std::abs(x - beta) + std::abs(y - beta);
  // N(lambda)/lambda with N = (2 lambda + alpha) e^{-lambda a} - alpha e^{-lambda b}
  cplx acc{}, lp = 1.0;
  double pa = 1.0, pb = 1.0, fact = 1.0;  // (-a)^n, (-b)^n, n!
  for (int n = 0; n <= 8; ++n) {
    const double pa1 = pa * (-a), pb1 = pb * (-b), fact1 = fact * (n + 1);
    acc += lp * (2.0 * pa / fact + alpha * (pa1 - pb1) / fact1);
    lp *= lambda;
    pa = pa1;
    pb = pb1;
    fact = fact1;
  }
  return acc / (2.0 * (2.0 * lambda + alpha));
}

}  // namespace

bool near_pole(cplx lambda, const PotentialSpec& V) {
  switch (V.kind) {
    case PotentialKind::Free:
      return std::abs(lambda) < kSmallLambda;
    case PotentialKind::Delta:
      if (V.alpha == 0.0) return std::abs(lambda) < kSmallLambda;
      return std::abs(2.0 * lambda + V.alpha) < 1e-10 * (1.0 + std::abs(V.alpha));
    case PotentialKind::PiecewiseConstant:
      break;
  }
  const cplx ws = jost_scaled(lambda, V);
  return std::abs(ws) < 1e-10 * std::pow(1.0 + std::norm(lambda), V.dim);
}

GreenKernelEval green_kernel(double x, double y, cplx lambda, const PotentialSpec& V) {
  GreenKernelEval g;
  g.lambda = lambda;
  const int d = V.dim;
  if (V.kind == PotentialKind::Free || (V.kind == PotentialKind::Delta && V.alpha == 0.0)) {
    if (std::abs(lambda) < kSmallLambda) throw PoleProximity(0.0);
    g.value = CMatrix::Identity(d, d) * (std::exp(-lambda * std::abs(x - y)) / (2.0 * lambda));
    return g;
  }
  if (V.kind == PotentialKind::Delta) {
    if (near_pole(lambda, V)) throw PoleProximity(-V.alpha / 2.0);
    g.value = CMatrix(1, 1);
    if (std::abs(lambda) < kSmallLambda) {
      g.value(0, 0) = delta_kernel_series(x, y, lambda, V.alpha, V.beta);
      g.regularized_at_zero = true;
      return g;
    }
    const double b = std::abs(x - V.beta) + std::abs(y - V.beta);
    g.value(0, 0) = std::exp(-lambda * std::abs(x - y)) / (2.0 * lambda) -
                    V.alpha / (2.0 * lambda * (2.0 * lambda + V.alpha)) * std::exp(-lambda * b);
    return g;
  }
  JostSolver js(V, lambda);
  if (near_pole(lambda, V)) throw PoleProximity(lambda);
  if (d == 1) {
    cplx up, dup, um, dum;
    js.plus(std::max(x, y), up, dup);
    js.minus(std::min(x, y), um, dum);
    g.value = CMatrix::Constant(1, 1, up * um / js.w());
    return g;
  }
  CMatrix fp, dfp, fm, dfm;
  js.plus(y, fp, dfp);
  js.minus(y, fm, dfm);
  CMatrix sys(2 * d, 2 * d), rhs = CMatrix::Zero(2 * d, d);
  sys << fp, -fm, dfp, -dfm;
  rhs.bottomRows(d) = -CMatrix::Identity(d, d);
  const CMatrix sol = sys.partialPivLu().solve(rhs);
  CMatrix u, du;
  if (x >= y) {
    js.plus(x, u, du);
    g.value = u * sol.topRows(d);
  } else {
    js.minus(x, u, du);
    g.value = u * sol.bottomRows(d);
  }
  return g;
}

// ---------------------------------------------------------------------------

ResolventWorkspace::ResolventWorkspace(const LocalizedState& f, const UniformGrid& eval_grid,
                                       const PotentialSpec& V)
    : f_(f), grid_(eval_grid), V_(V), dim_(f.dim) {
  eval_grid.validate();
  if (V.dim != f.dim) throw InvalidArgument("state and potential dimensions differ");
  const double lo = f.support_lo, hi = f.support_hi;
  if (hi > lo) {
    cuts_.push_back(lo);
    cuts_.push_back(hi);
    for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
      const double x = eval_grid.x(k);
      if (x > lo && x < hi) cuts_.push_back(x);
    }
    for (std::size_t k = 0; k < f.grid.n_points; ++k) {
      const double x = f.grid.x(k);
      if (x > lo && x < hi) cuts_.push_back(x);
    }
    for (double b : f.breaks())
      if (b > lo && b < hi) cuts_.push_back(b);
    for (double b : V.singular_points())
      if (b > lo && b < hi) cuts_.push_back(b);
    std::sort(cuts_.begin(), cuts_.end());
    std::vector<double> merged;
    const double tiny = 1e-12 * std::max(1.0, hi - lo);
    for (double c : cuts_)
      if (merged.empty() || c - merged.back() > tiny) merged.push_back(c);
    merged.back() = hi;
    cuts_.swap(merged);
    if (f.has_profile()) refine_cuts();
    for (std::size_t k = 1; k < cuts_.size(); ++k) max_seg_ = std::max(max_seg_, cuts_[k] - cuts_[k - 1]);
  }
  node_cut_.resize(eval_grid.n_points);
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  for (std::size_t k = 0; k < eval_grid.n_points; ++k) {
    const double x = eval_grid.x(k);
    if (cuts_.empty() || x <= cuts_.front()) {
      node_cut_[k] = 0;
    } else if (x >= cuts_.back()) {
      node_cut_[k] = nseg;
    } else {
      // segments whose right end is <= x
      const double tiny = 1e-12 * std::max(1.0, hi - lo);
      node_cut_[k] = static_cast<std::size_t>(std::upper_bound(cuts_.begin(), cuts_.end(), x + tiny) -
                                              cuts_.begin()) - 1;
    }
  }
  rate_extra_ = 1.0 + (V.kind == PotentialKind::Delta ? 0.5 * std::abs(V.alpha) : std::sqrt(V.max_norm()));
}

// Steep derivatives of smooth profiles (high powers of A applied to a bump)
// need finer panels than the grid cells; split until GL8 agrees with its
// two-panel refinement on the segment moments.
void ResolventWorkspace::refine_cuts() {
  const auto& gl = gauss_legendre(kNodesPerPanel);
  std::vector<cplx> v(dim_);
  auto moments = [&](double a, double b) {
    std::array<cplx, 2> m{};
    for (int q = 0; q < kNodesPerPanel; ++q) {
      const double y = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
      const double w = 0.5 * (b - a) * gl.weights[q];
      f_.eval(y, v.data());
      for (int c = 0; c < dim_; ++c) {
        m[0] += w * v[c];
        m[1] += w * v[c] * (y - a) / (b - a);
      }
    }
    return m;
  };
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < cuts_.size(); ++k) {
    for (int q = 0; q < kNodesPerPanel; ++q) {
      f_.eval(0.5 * (cuts_[k] + cuts_[k + 1]) + 0.5 * (cuts_[k + 1] - cuts_[k]) * gl.nodes[q], v.data());
      for (int c = 0; c < dim_; ++c) scale = std::max(scale, std::abs(v[c]));
    }
  }
  if (scale == 0.0) return;
  std::vector<double> out{cuts_.front()};
  std::function<void(double, double, int)> split = [&](double a, double b, int depth) {
    const double m = 0.5 * (a + b);
    const auto whole = moments(a, b), left = moments(a, m), right = moments(m, b);
    const double err = std::max(std::abs(whole[0] - left[0] - right[0]),
                                std::abs(whole[1] - 0.5 * left[1] - (0.5 * right[1] + 0.5 * right[0])));
    if (depth >= kMaxRefine || err <= 1e-14 * scale * (b - a)) {
      out.push_back(b);
      return;
    }
    split(a, m, depth + 1);
    split(m, b, depth + 1);
  };
  for (std::size_t k = 0; k + 1 < cuts_.size(); ++k) split(cuts_[k], cuts_[k + 1], 0);
  cuts_.swap(out);
  max_seg_ = 0.0;
  for (std::size_t k = 1; k < cuts_.size(); ++k) max_seg_ = std::max(max_seg_, cuts_[k] - cuts_[k - 1]);
}

int ResolventWorkspace::level_for(cplx lambda) const {
  const double need = (std::abs(lambda) + rate_extra_) * max_seg_ / kPanelPhase;
  int l = 0;
  while ((1 << l) < need && l < 24) ++l;
  return l;
}

const ResolventWorkspace::Level& ResolventWorkspace::level(int l) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = levels_.find(l);
  if (it != levels_.end()) return *it->second;
  auto lev = std::make_unique<Level>();
  const auto& gl = gauss_legendre(kNodesPerPanel);
  const int nsub = 1 << l;
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  lev->seg_end.resize(nseg);
  for (std::size_t k = 0; k < nseg; ++k) {
    const double a = cuts_[k], b = cuts_[k + 1];
    // panels scale with segment length: short refined segments stay cheap
    const int np = std::max(1, static_cast<int>(std::ceil(nsub * (b - a) / max_seg_ - 1e-9)));
    const double hsub = (b - a) / np;
    for (int s = 0; s < np; ++s) {
      const double c = a + (s + 0.5) * hsub;
      for (int q = 0; q < kNodesPerPanel; ++q) {
        lev->y.push_back(c + 0.5 * hsub * gl.nodes[q]);
        lev->w.push_back(0.5 * hsub * gl.weights[q]);
      }
    }
    lev->seg_end[k] = lev->y.size();
  }
  lev->fy.resize(lev->y.size() * dim_);
  for (std::size_t n = 0; n < lev->y.size(); ++n) f_.eval(lev->y[n], &lev->fy[n * dim_]);
  auto& ref = *lev;
  levels_.emplace(l, std::move(lev));
  return ref;
}

Field ResolventWorkspace::apply(cplx lambda) const {
  switch (V_.kind) {
    case PotentialKind::Delta:
      if (V_.alpha == 0.0) {
        if (std::abs(lambda) < kSmallLambda) throw PoleProximity(0.0);
        return apply_scalar(lambda, true);
      }
      return apply_delta(lambda);
    case PotentialKind::Free:
      if (std::abs(lambda) < kSmallLambda) throw PoleProximity(0.0);
      return dim_ == 1 ? apply_scalar(lambda, true) : apply_matrix(lambda);
    case PotentialKind::PiecewiseConstant:
      return dim_ == 1 ? apply_scalar(lambda, true) : apply_matrix(lambda);
  }
  return {};
}

Field ResolventWorkspace::apply_numerator(cplx lambda) const {
  if (dim_ != 1 || V_.kind == PotentialKind::Delta)
    throw InvalidArgument("kernel numerator is defined for scalar Free/PiecewiseConstant models");
  return apply_scalar(lambda, false);
}

Field ResolventWorkspace::apply_scalar(cplx lambda, bool divide) const {
  Field out(grid_, 1);
  const bool free = V_.kind != PotentialKind::PiecewiseConstant;
  PotentialSpec freeV = PotentialSpec::free();
  const PotentialSpec& Vs = free ? freeV : V_;
  JostSolver js(Vs, lambda);
  cplx w = js.w();
  if (divide && !free && near_pole(lambda, V_)) throw PoleProximity(lambda);
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  std::vector<cplx> pm(nseg + 1, 0.0), sp(nseg + 1, 0.0);
  if (nseg > 0) {
    const Level& lev = level(level_for(lambda));
    std::size_t n = 0;
    std::vector<cplx> im(nseg), ip(nseg);
    for (std::size_t k = 0; k < nseg; ++k) {
      cplx am{}, ap{};
      for (; n < lev.seg_end[k]; ++n) {
        const cplx fv = lev.fy[n];
        if (fv == 0.0) continue;
        cplx u, du;
        if (free) {
          ap += lev.w[n] * std::exp(-lambda * lev.y[n]) * fv;
          am += lev.w[n] * std::exp(lambda * lev.y[n]) * fv;
          continue;
        }
        js.minus(lev.y[n], u, du);
        am += lev.w[n] * u * fv;
        js.plus(lev.y[n], u, du);
        ap += lev.w[n] * u * fv;
      }
      im[k] = am;
      ip[k] = ap;
    }
    for (std::size_t k = 0; k < nseg; ++k) pm[k + 1] = pm[k] + im[k];
    for (std::size_t k = nseg; k-- > 0;) sp[k] = sp[k + 1] + ip[k];
  }
  const cplx scale = divide ? 1.0 / w : 1.0;
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    const double x = grid_.x(i);
    const std::size_t p = node_cut_[i];
    cplx up, um;
    if (free) {
      up = std::exp(-lambda * x);
      um = std::exp(lambda * x);
    } else {
      cplx d;
      js.plus(x, up, d);
      js.minus(x, um, d);
    }
    cplx v{};
    if (pm[p] != 0.0) v += up * pm[p];
    if (sp[p] != 0.0) v += um * sp[p];
    out.at(i) = v * scale;
  }
  return out;
}

Field ResolventWorkspace::apply_delta(cplx lambda) const {
  if (near_pole(lambda, V_)) throw PoleProximity(-V_.alpha / 2.0);
  if (std::abs(lambda) < kSmallLambda) return apply_delta_series(lambda);
  Field out = apply_scalar(lambda, true);
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  if (nseg == 0) return out;
  const Level& lev = level(level_for(lambda));
  cplx q{};
  for (std::size_t n = 0; n < lev.y.size(); ++n)
    if (lev.fy[n] != 0.0) q += lev.w[n] * std::exp(-lambda * std::abs(lev.y[n] - V_.beta)) * lev.fy[n];
  const cplx coef = -V_.alpha / (2.0 * lambda * (2.0 * lambda + V_.alpha)) * q;
  for (std::size_t i = 0; i < grid_.n_points; ++i)
    out.at(i) += coef * std::exp(-lambda * std::abs(grid_.x(i) - V_.beta));
  return out;
}

Field ResolventWorkspace::apply_delta_series(cplx lambda) const {
  Field out(grid_, 1);
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  if (nseg == 0) return out;
  const Level& lev = level(0);
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    const double x = grid_.x(i);
    cplx acc{};
    for (std::size_t n = 0; n < lev.y.size(); ++n)
      if (lev.fy[n] != 0.0)
        acc += lev.w[n] * delta_kernel_series(x, lev.y[n], lambda, V_.alpha, V_.beta) * lev.fy[n];
    out.at(i) = acc;
  }
  return out;
}

Field ResolventWorkspace::apply_matrix(cplx lambda) const {
  const int d = dim_;
  Field out(grid_, d);
  JostSolver js(V_, lambda);
  if (near_pole(lambda, V_)) throw PoleProximity(lambda);
  const std::size_t nseg = cuts_.empty() ? 0 : cuts_.size() - 1;
  std::vector<CVector> pm(nseg + 1, CVector::Zero(d)), sp(nseg + 1, CVector::Zero(d));
  if (nseg > 0) {
    const Level& lev = level(level_for(lambda));
    std::vector<CVector> ia(nseg, CVector::Zero(d)), ib(nseg, CVector::Zero(d));
    std::size_t n = 0;
    CMatrix fp, dfp, fm, dfm, sys(2 * d, 2 * d), rhs = CMatrix::Zero(2 * d, d);
    rhs.bottomRows(d) = -CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < nseg; ++k) {
      for (; n < lev.seg_end[k]; ++n) {
        Eigen::Map<const CVector> fv(&lev.fy[n * d], d);
        if (fv.isZero(0)) continue;
        js.plus(lev.y[n], fp, dfp);
        js.minus(lev.y[n], fm, dfm);
        sys << fp, -fm, dfp, -dfm;
        const CMatrix c = sys.partialPivLu().solve(rhs);
        ia[k] += lev.w[n] * (c.topRows(d) * fv);
        ib[k] += lev.w[n] * (c.bottomRows(d) * fv);
      }
    }
    for (std::size_t k = 0; k < nseg; ++k) pm[k + 1] = pm[k] + ia[k];
    for (std::size_t k = nseg; k-- > 0;) sp[k] = sp[k + 1] + ib[k];
  }
  CMatrix u, du;
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    const double x = grid_.x(i);
    const std::size_t p = node_cut_[i];
    CVector v = CVector::Zero(d);
    if (!pm[p].isZero(0)) {
      js.plus(x, u, du);
      v += u * pm[p];
    }
    if (!sp[p].isZero(0)) {
      js.minus(x, u, du);
      v += u * sp[p];
    }
    for (int c = 0; c < d; ++c) out.at(i, c) = v(c);
  }
  return out;
}

Field apply_resolvent(cplx lambda, const LocalizedState& f, const UniformGrid& eval_grid,
                      const PotentialSpec& V) {
  return ResolventWorkspace(f, eval_grid, V).apply(lambda);
}

double resolvent_residual(cplx lambda, const LocalizedState& f, const PotentialSpec& V) {
  const UniformGrid& g = f.grid;
  const Field u = apply_resolvent(lambda, f, g, V);
  const double h = g.spacing();
  std::vector<double> kinks = V.singular_points();
  for (double b : f.breaks()) kinks.push_back(b);
  const int d = f.dim;
  const cplx l2 = lambda * lambda;
  double acc = 0.0;
  const std::size_t n = g.n_points;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double x = g.x(k);
    bool skip = false;
    for (double b : kinks) skip = skip || std::abs(x - b) < 2.5 * h;
    if (skip) continue;
    const CMatrix v = V.kind == PotentialKind::PiecewiseConstant ? V.value_at(x) : CMatrix::Zero(d, d);
    for (int c = 0; c < d; ++c) {
      const cplx lap = (-u.at(k - 2, c) + 16.0 * u.at(k - 1, c) - 30.0 * u.at(k, c) + 16.0 * u.at(k + 1, c) -
                        u.at(k + 2, c)) / (12.0 * h * h);
      cplx r = l2 * u.at(k, c) - lap - f.values[k * d + c];
      for (int e = 0; e < d; ++e) r -= v(c, e) * u.at(k, e);
      acc += std::norm(r);
    }
  }
  return std::sqrt(acc * h);
}

}  // namespace resonwave
