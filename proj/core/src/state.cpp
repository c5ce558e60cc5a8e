#include "resonwave/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "resonwave/errors.hpp"
#include "resonwave/numerics.hpp"

namespace resonwave {

namespace {

// Truncated Taylor series c_k = f^(k)(x0)/k!, enough to differentiate the
// built-in shapes exactly.
constexpr int kJetOrder = 12;

struct Jet {
  std::array<cplx, kJetOrder> c{};

  static Jet constant(cplx v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double x0, double slope = 1.0) {
    Jet j;
    j.c[0] = x0;
    j.c[1] = slope;
    return j;
  }
};

Jet operator+(Jet a, const Jet& b) {
  for (int k = 0; k < kJetOrder; ++k) a.c[k] += b.c[k];
  return a;
}
Jet operator-(Jet a, const Jet& b) {
  for (int k = 0; k < kJetOrder; ++k) a.c[k] -= b.c[k];
  return a;
}
Jet operator*(cplx s, Jet a) {
  for (auto& v : a.c) v *= s;
  return a;
}
Jet operator+(cplx s, Jet a) {
  a.c[0] += s;
  return a;
}
Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < kJetOrder; ++i)
    for (int j = 0; i + j < kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}
Jet jet_exp(const Jet& a) {
  Jet e;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < kJetOrder; ++k) {
    cplx s{};
    for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * e.c[k - j];
    e.c[k] = s / static_cast<double>(k);
  }
  return e;
}
Jet jet_inv(const Jet& a) {
  Jet b;
  b.c[0] = 1.0 / a.c[0];
  for (int k = 1; k < kJetOrder; ++k) {
    cplx s{};
    for (int j = 1; j <= k; ++j) s += a.c[j] * b.c[k - j];
    b.c[k] = -s * b.c[0];
  }
  return b;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Scalar shape times a constant direction vector.
class ShapeProfile : public Profile {
 public:
  explicit ShapeProfile(std::vector<cplx> direction) : dir_(std::move(direction)) {}

  int dim() const override { return static_cast<int>(dir_.size()); }

  void eval(double x, int deriv, int side, cplx* out) const override {
    cplx v{};
    if (deriv < kJetOrder) {
      if (side == 0 && is_break(x)) {
        v = 0.5 * (scalar(x, deriv, -1) + scalar(x, deriv, 1));
      } else {
        v = scalar(x, deriv, side);
      }
    }
    for (std::size_t c = 0; c < dir_.size(); ++c) out[c] = v * dir_[c];
  }

 protected:
  virtual Jet jet(double x, int side) const = 0;

  cplx scalar(double x, int deriv, int side) const {
    return jet(x, side).c[deriv] * factorial(deriv);
  }
  bool is_break(double x) const {
    for (double b : breaks())
      if (b == x) return true;
    return false;
  }
  /// Which piece a point belongs to, honouring the side at break points.
  static bool inside_open(double x, double lo, double hi, int side) {
    if (x > lo && x < hi) return true;
    if (x == lo) return side > 0;
    if (x == hi) return side < 0;
    return false;
  }

 private:
  std::vector<cplx> dir_;
};

class IndicatorProfile final : public ShapeProfile {
 public:
  IndicatorProfile(double a, double b, std::vector<cplx> d) : ShapeProfile(std::move(d)), a_(a), b_(b) {}
  int smoothness() const override { return kJetOrder - 1; }
  std::pair<double, double> support() const override { return {a_, b_}; }
  std::vector<double> breaks() const override { return {a_, b_}; }

 protected:
  Jet jet(double x, int side) const override {
    return Jet::constant(inside_open(x, a_, b_, side) ? 1.0 : 0.0);
  }

 private:
  double a_, b_;
};

class GaussianProfile final : public ShapeProfile {
 public:
  GaussianProfile(double c, double sigma, double r, std::vector<cplx> d)
      : ShapeProfile(std::move(d)), c_(c), sigma_(sigma), r_(r) {}
  int smoothness() const override { return kJetOrder - 1; }
  std::pair<double, double> support() const override { return {c_ - r_, c_ + r_}; }
  std::vector<double> breaks() const override { return {c_ - r_, c_ + r_}; }

 protected:
  Jet jet(double x, int side) const override {
    if (!inside_open(x, c_ - r_, c_ + r_, side)) return Jet{};
    const Jet u = Jet::variable(x - c_);
    return jet_exp((-0.5 / (sigma_ * sigma_)) * (u * u));
  }

 private:
  double c_, sigma_, r_;
};

class BumpProfile final : public ShapeProfile {
 public:
  BumpProfile(double c, double w, std::vector<cplx> d) : ShapeProfile(std::move(d)), c_(c), w_(w) {}
  int smoothness() const override { return kJetOrder - 1; }
  std::pair<double, double> support() const override { return {c_ - w_, c_ + w_}; }
  std::vector<double> breaks() const override { return {c_ - w_, c_ + w_}; }

 protected:
  Jet jet(double x, int side) const override {
    if (!(x > c_ - w_ && x < c_ + w_)) return Jet{};
    const Jet u = Jet::variable((x - c_) / w_, 1.0 / w_);
    const Jet one_minus = 1.0 + (-1.0 * (u * u));
    return jet_exp(1.0 + (-1.0 * jet_inv(one_minus)));
  }

 private:
  double c_, w_;
};

/// exp(rate |x - beta|) * psi(|x - beta|), psi a C-infinity step.
class ExpWindowProfile final : public ShapeProfile {
 public:
  ExpWindowProfile(double beta, cplx rate, double inner, double outer, std::vector<cplx> d)
      : ShapeProfile(std::move(d)), beta_(beta), rate_(rate), inner_(inner), outer_(outer) {}
  int smoothness() const override { return kJetOrder - 1; }
  std::pair<double, double> support() const override { return {beta_ - outer_, beta_ + outer_}; }
  std::vector<double> breaks() const override {
    return {beta_ - outer_, beta_ - inner_, beta_, beta_ + inner_, beta_ + outer_};
  }

 protected:
  Jet jet(double x, int side) const override {
    const bool right = x > beta_ || (x == beta_ && side > 0);
    const bool left = x < beta_ || (x == beta_ && side < 0);
    if (!right && !left) {
      // exact centre with side 0 is handled by averaging upstream
      return Jet::constant(1.0);
    }
    const Jet r = right ? Jet::variable(x - beta_, 1.0) : Jet::variable(beta_ - x, -1.0);
    const double rv = std::abs(x - beta_);
    const bool in_core = rv < inner_ || (rv == inner_ && ((right && side < 0) || (left && side > 0)));
    const bool outside = rv > outer_ || (rv == outer_ && ((right && side >= 0) || (left && side <= 0)));
    if (outside) return Jet{};
    const Jet e = jet_exp(rate_ * r);
    if (in_core) return e;
    const double span = outer_ - inner_;
    const Jet u = (1.0 / span) * ((outer_ + (-1.0 * r)));  // 1 at inner, 0 at outer
    const Jet eu = jet_exp(-1.0 * jet_inv(u));
    const Jet ev = jet_exp(-1.0 * jet_inv(1.0 + (-1.0 * u)));
    const Jet psi = eu * jet_inv(eu + ev);
    return e * psi;
  }

 private:
  double beta_;
  cplx rate_;
  double inner_, outer_;
};

/// A f for a profile f: f'' + V f, piecewise.
class GeneratorProfile final : public Profile {
 public:
  GeneratorProfile(std::shared_ptr<const Profile> base, const PotentialSpec& V)
      : base_(std::move(base)), V_(V) {}
  int dim() const override { return base_->dim(); }
  int smoothness() const override { return base_->smoothness() - 2; }
  std::pair<double, double> support() const override { return base_->support(); }
  std::vector<double> breaks() const override {
    auto b = base_->breaks();
    auto [lo, hi] = support();
    for (double p : V_.singular_points())
      if (p >= lo && p <= hi) b.push_back(p);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
  void eval(double x, int deriv, int side, cplx* out) const override {
    const int d = dim();
    if (side == 0) {
      bool at_break = false;
      for (double b : breaks()) at_break = at_break || b == x;
      if (at_break) {
        std::vector<cplx> l(d), r(d);
        eval(x, deriv, -1, l.data());
        eval(x, deriv, 1, r.data());
        for (int c = 0; c < d; ++c) out[c] = 0.5 * (l[c] + r[c]);
        return;
      }
    }
    base_->eval(x, deriv + 2, side, out);
    if (V_.kind != PotentialKind::PiecewiseConstant) return;
    const CMatrix v = side_value(x, side);
    if (v.isZero(0)) return;
    std::vector<cplx> f(d);
    base_->eval(x, deriv, side, f.data());
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) out[r] += v(r, c) * f[c];
  }

 private:
  CMatrix side_value(double x, int side) const {
    const auto& bp = V_.breakpoints;
    for (std::size_t k = 0; k < bp.size(); ++k) {
      if (x != bp[k]) continue;
      if (side < 0) return k == 0 ? CMatrix::Zero(V_.dim, V_.dim) : V_.blocks[k - 1];
      if (side > 0) return k + 1 == bp.size() ? CMatrix::Zero(V_.dim, V_.dim) : V_.blocks[k];
    }
    return V_.value_at(x);
  }

  std::shared_ptr<const Profile> base_;
  PotentialSpec V_;
};

double param(const StateSpec& s, const char* key) {
  auto it = s.params.find(key);
  if (it == s.params.end())
    throw InvalidArgument("state shape '" + s.shape + "' needs parameter '" + key + "'");
  return it->second;
}

double param_or(const StateSpec& s, const char* key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

void finalize_support(LocalizedState& st, double lo, double hi) {
  const auto& g = st.grid;
  if (lo < g.x_min || hi > g.x_max) throw InvalidArgument("support exceeds grid");
  st.support_lo = lo;
  st.support_hi = hi;
  st.support_radius = std::max(std::abs(lo), std::abs(hi));
  if (st.support_radius > std::min(std::abs(g.x_min), std::abs(g.x_max)) + 1e-12)
    throw InvalidArgument("support exceeds grid");
}

}  // namespace

bool operator==(const StateSpec& a, const StateSpec& b) {
  return a.shape == b.shape && a.params == b.params && a.samples == b.samples &&
         a.direction == b.direction;
}

void LocalizedState::eval(double x, cplx* out) const {
  if (profile) {
    profile->eval(x, 0, 0, out);
    return;
  }
  for (int c = 0; c < dim; ++c) out[c] = 0.0;
  if (x < support_lo || x > support_hi) return;
  const double h = grid.spacing();
  const double s = (x - grid.x_min) / h;
  const long n = static_cast<long>(grid.n_points);
  long k = static_cast<long>(std::floor(s));
  if (std::abs(s - std::round(s)) < 1e-12) {
    const long j = std::lround(s);
    if (j >= 0 && j < n)
      for (int c = 0; c < dim; ++c) out[c] = values[j * dim + c];
    return;
  }
  k = std::clamp(k, 1L, n - 3);
  const double u = s - k;  // nodes at -1, 0, 1, 2
  const double w[4] = {-u * (u - 1) * (u - 2) / 6.0, (u + 1) * (u - 1) * (u - 2) / 2.0,
                       -(u + 1) * u * (u - 2) / 2.0, (u + 1) * u * (u - 1) / 6.0};
  for (int c = 0; c < dim; ++c) {
    cplx acc{};
    for (int i = 0; i < 4; ++i) acc += w[i] * values[(k - 1 + i) * dim + c];
    out[c] = acc;
  }
}

std::vector<double> LocalizedState::breaks() const {
  if (profile) return profile->breaks();
  return {support_lo, support_hi};
}

Field LocalizedState::as_field() const {
  Field f(grid, dim);
  f.values = values;
  return f;
}

LocalizedState sample_state(const StateSpec& spec, const UniformGrid& grid, int dim) {
  grid.validate();
  LocalizedState st;
  st.grid = grid;
  st.dim = dim;
  std::vector<cplx> dir = spec.direction;
  if (dir.empty()) {
    dir.assign(dim, 0.0);
    dir[0] = 1.0;
  }
  if (static_cast<int>(dir.size()) != dim) throw InvalidArgument("state direction has wrong length");

  if (spec.shape == "samples") {
    if (spec.samples.size() != grid.n_points * dim)
      throw InvalidArgument("sample count does not match grid");
    st.values = spec.samples;
    Field f(grid, dim);
    f.values = st.values;
    LocalizedState s2 = state_from_field(f);
    return s2;
  }

  std::shared_ptr<const Profile> p;
  if (spec.shape == "indicator") {
    const double a = param(spec, "a"), b = param(spec, "b");
    if (!(b > a)) throw InvalidArgument("indicator needs a < b");
    p = std::make_shared<IndicatorProfile>(a, b, dir);
  } else if (spec.shape == "gaussian") {
    const double sigma = param(spec, "sigma"), r = param_or(spec, "radius", 6.0 * sigma);
    if (!(sigma > 0) || !(r > 0)) throw InvalidArgument("gaussian needs positive sigma and radius");
    p = std::make_shared<GaussianProfile>(param_or(spec, "center", 0.0), sigma, r, dir);
  } else if (spec.shape == "bump") {
    const double w = param(spec, "width");
    if (!(w > 0)) throw InvalidArgument("bump needs positive width");
    p = std::make_shared<BumpProfile>(param_or(spec, "center", 0.0), w, dir);
  } else if (spec.shape == "exp_window") {
    const double inner = param(spec, "inner"), outer = param(spec, "outer");
    if (!(inner > 0) || !(outer > inner)) throw InvalidArgument("exp_window needs 0 < inner < outer");
    p = std::make_shared<ExpWindowProfile>(param_or(spec, "beta", 0.0),
                                           cplx(param(spec, "rate_re"), param_or(spec, "rate_im", 0.0)),
                                           inner, outer, dir);
  } else {
    throw InvalidArgument("unknown state shape '" + spec.shape + "'");
  }
  auto [lo, hi] = p->support();
  finalize_support(st, lo, hi);
  st.profile = p;
  st.values.assign(grid.n_points * dim, 0.0);
  for (std::size_t k = 0; k < grid.n_points; ++k) p->eval(grid.x(k), 0, 0, &st.values[k * dim]);
  return st;
}

LocalizedState state_from_field(const Field& f) {
  LocalizedState st;
  st.grid = f.grid;
  st.dim = f.dim;
  st.values = f.values;
  std::size_t first = f.grid.n_points, last = 0;
  for (std::size_t k = 0; k < f.grid.n_points; ++k) {
    for (int c = 0; c < f.dim; ++c) {
      if (f.at(k, c) != 0.0) {
        first = std::min(first, k);
        last = std::max(last, k);
      }
    }
  }
  if (first > last) {
    st.support_lo = st.support_hi = st.support_radius = 0.0;
    return st;
  }
  // a sampled state is interpolated, so its support extends one cell out
  const std::size_t lo = first > 0 ? first - 1 : 0;
  const std::size_t hi = std::min(last + 1, f.grid.n_points - 1);
  st.support_lo = f.grid.x(lo);
  st.support_hi = f.grid.x(hi);
  st.support_radius = std::max(std::abs(st.support_lo), std::abs(st.support_hi));
  return st;
}

LocalizedState apply_generator(const LocalizedState& f, const PotentialSpec& V, int power) {
  if (power <= 0) return f;
  LocalizedState g = f;
  if (f.profile) {
    std::shared_ptr<const Profile> p = f.profile;
    for (int k = 0; k < power; ++k) p = std::make_shared<GeneratorProfile>(p, V);
    g.profile = p;
    for (std::size_t k = 0; k < f.grid.n_points; ++k) p->eval(f.grid.x(k), 0, 0, &g.values[k * f.dim]);
    return g;
  }
  const auto& grid = f.grid;
  const double h = grid.spacing();
  const long n = static_cast<long>(grid.n_points);
  const int d = f.dim;
  std::vector<cplx> cur = f.values;
  for (int p = 0; p < power; ++p) {
    std::vector<cplx> next(cur.size(), 0.0);
    auto at = [&](long k, int c) -> cplx { return (k < 0 || k >= n) ? cplx{} : cur[k * d + c]; };
    for (long k = 0; k < n; ++k) {
      const CMatrix v = V.value_at(grid.x(k));
      for (int c = 0; c < d; ++c) {
        cplx lap = (-at(k - 2, c) + 16.0 * at(k - 1, c) - 30.0 * at(k, c) + 16.0 * at(k + 1, c) -
                    at(k + 2, c)) / (12.0 * h * h);
        for (int e = 0; e < d; ++e) lap += v(c, e) * at(k, e);
        next[k * d + c] = lap;
      }
    }
    cur.swap(next);
  }
  Field out(grid, d);
  out.values = cur;
  g = state_from_field(out);
  return g;
}

bool in_domain(const LocalizedState& f, const PotentialSpec& V, int power) {
  if (power <= 0) return true;
  if (!f.profile) {
    const double margin = 4.0 * power * f.grid.spacing();
    return f.support_lo - margin >= f.grid.x_min && f.support_hi + margin <= f.grid.x_max;
  }
  if (f.profile->smoothness() < 2 * power) return false;
  const int d = f.dim;
  std::shared_ptr<const Profile> p = f.profile;
  for (int k = 0; k < power; ++k) {
    std::vector<double> pts = p->breaks();
    for (double s : V.singular_points()) pts.push_back(s);
    std::vector<cplx> l0(d), r0(d), l1(d), r1(d), mid(d);
    double scale = 1.0;
    for (double b : pts) {
      p->eval(b, 0, -1, l0.data());
      p->eval(b, 0, 1, r0.data());
      p->eval(b, 1, -1, l1.data());
      p->eval(b, 1, 1, r1.data());
      for (int c = 0; c < d; ++c)
        scale = std::max({scale, std::abs(l0[c]), std::abs(r0[c]), std::abs(l1[c]), std::abs(r1[c])});
    }
    const double tol = 1e-8 * scale;
    for (double b : pts) {
      p->eval(b, 0, -1, l0.data());
      p->eval(b, 0, 1, r0.data());
      p->eval(b, 1, -1, l1.data());
      p->eval(b, 1, 1, r1.data());
      const bool at_delta = V.kind == PotentialKind::Delta && b == V.beta;
      for (int c = 0; c < d; ++c) {
        if (std::abs(r0[c] - l0[c]) > tol) return false;
        cplx jump = r1[c] - l1[c];
        if (at_delta) jump -= V.alpha * 0.5 * (l0[c] + r0[c]);
        if (std::abs(jump) > tol) return false;
      }
    }
    p = std::make_shared<GeneratorProfile>(p, V);
  }
  return true;
}

void apply_discrete_generator(const PotentialSpec& V, const UniformGrid& g, int dim,
                              const std::vector<cplx>& u, std::vector<cplx>& out) {
  const long n = static_cast<long>(g.n_points);
  const double h = g.spacing();
  const double ih2 = 1.0 / (h * h);
  out.assign(u.size(), 0.0);
  for (long k = 0; k < n; ++k) {
    for (int c = 0; c < dim; ++c) {
      const cplx left = k > 0 ? u[(k - 1) * dim + c] : cplx{};
      const cplx right = k + 1 < n ? u[(k + 1) * dim + c] : cplx{};
      out[k * dim + c] = (left - 2.0 * u[k * dim + c] + right) * ih2;
    }
  }
  if (V.kind == PotentialKind::Delta) {
    const std::size_t j = g.nearest(V.beta);
    out[j] -= V.alpha / h * u[j];
  } else if (V.kind == PotentialKind::PiecewiseConstant) {
    const auto [lo, hi] = V.support();
    for (long k = 0; k < n; ++k) {
      const double x = g.x(k);
      if (x < lo || x > hi) continue;
      const CMatrix v = V.value_at(x);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) out[k * dim + r] += v(r, c) * u[k * dim + c];
    }
  }
}

cplx integrate_state(const LocalizedState& f, double a, double b, const std::function<cplx(double)>& w,
                     int comp, const std::vector<double>& extra) {
  const double lo = std::max(a, f.support_lo), hi = std::min(b, f.support_hi);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  const double h = f.grid.spacing();
  const long k0 = static_cast<long>(std::ceil((lo - f.grid.x_min) / h));
  for (long k = std::max(0L, k0); k < static_cast<long>(f.grid.n_points); ++k) {
    const double x = f.grid.x(k);
    if (x >= hi) break;
    if (x > lo) cuts.push_back(x);
  }
  for (double x : f.breaks())
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : extra)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  const auto& gl = gauss_legendre(8);
  std::vector<cplx> v(f.dim);
  cplx acc{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c = 0.5 * (cuts[i] + cuts[i + 1]), r = 0.5 * (cuts[i + 1] - cuts[i]);
    if (r <= 0.0) continue;
    for (int q = 0; q < 8; ++q) {
      const double y = c + r * gl.nodes[q];
      f.eval(y, v.data());
      acc += r * gl.weights[q] * w(y) * v[comp];
    }
  }
  return acc;
}

Field sample_on(const LocalizedState& f, const UniformGrid& g) {
  Field out(g, f.dim);
  for (std::size_t k = 0; k < g.n_points; ++k) f.eval(g.x(k), &out.values[k * f.dim]);
  return out;
}

}  // namespace resonwave
