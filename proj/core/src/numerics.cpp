#include "resonwave/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "resonwave/errors.hpp"

namespace resonwave {

const char* to_string(WaveKind k) { return k == WaveKind::Cosine ? "cosine" : "sine"; }

cplx entire_c(cplx z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 24.0 + z * (1.0 / 720.0 + z / 40320.0)));
  }
  return std::cosh(std::sqrt(z));
}

cplx entire_s(cplx z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z * (1.0 / 5040.0 + z / 362880.0)));
  }
  const cplx w = std::sqrt(z);
  return std::sinh(w) / w;
}

namespace {

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<QuadratureRule>(make_gauss_legendre(n))).first;
  }
  return *it->second;
}

double cauchy_radius(cplx z0) { return 1e-2 * std::max(1.0, std::abs(z0)); }

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, int order, double radius,
                       int n_points) {
  cplx acc{};
  for (int j = 0; j < n_points; ++j) {
    const double th = 2.0 * kPi * j / n_points;
    const cplx e = std::polar(1.0, th);
    acc += f(z0 + radius * e) * std::polar(1.0, -order * th);
  }
  double fact = 1.0;
  for (int k = 2; k <= order; ++k) fact *= k;
  return acc * fact / (n_points * std::pow(radius, order));
}

// ---------------------------------------------------------------------------

namespace {

int initial_threads() {
  if (const char* env = std::getenv("RESONWAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> n{initial_threads()};
  return n;
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(std::max(1, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int nt = static_cast<int>(std::min<std::size_t>(thread_count(), n));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_err;
  std::size_t first_idx = n;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < first_idx) {
          first_idx = i;
          first_err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_err) std::rethrow_exception(first_err);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  CVector value;
  double err;
};

void gk15_nodes(double a, double b, std::vector<double>& s) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int k = 0; k < 7; ++k) {
    s.push_back(c - h * kXgk[k]);
    s.push_back(c + h * kXgk[k]);
  }
  s.push_back(c);
}

void gk15_combine(Interval& iv, const CVector* f, const VectorNorm& norm) {
  const double h = 0.5 * (iv.b - iv.a);
  CVector k15 = kWgk[7] * f[14];
  CVector g7 = kWg[3] * f[14];
  for (int k = 0; k < 7; ++k) {
    const CVector pair = f[2 * k] + f[2 * k + 1];
    k15 += kWgk[k] * pair;
    if (k % 2 == 1) g7 += kWg[k / 2] * pair;
  }
  iv.value = h * k15;
  iv.err = norm(h * (k15 - g7));
}

void evaluate(const BatchIntegrand& f, std::vector<Interval>& ivs, const VectorNorm& norm,
              int& evals) {
  std::vector<double> s;
  s.reserve(ivs.size() * 15);
  for (const auto& iv : ivs) gk15_nodes(iv.a, iv.b, s);
  std::vector<CVector> out(s.size());
  f(s, out);
  evals += static_cast<int>(s.size());
  for (std::size_t i = 0; i < ivs.size(); ++i) gk15_combine(ivs[i], &out[15 * i], norm);
}

}  // namespace

AdaptiveResult integrate_gk15(const BatchIntegrand& f, double a, double b,
                              const AdaptiveOptions& opts, const VectorNorm& norm) {
  AdaptiveResult res;
  const int n0 = std::max(1, opts.initial_intervals);
  std::vector<Interval> ivs(n0);
  for (int i = 0; i < n0; ++i) {
    ivs[i].a = a + (b - a) * i / n0;
    ivs[i].b = a + (b - a) * (i + 1) / n0;
  }
  evaluate(f, ivs, norm, res.evaluations);
  const double len = std::abs(b - a);
  for (;;) {
    double total = 0.0;
    for (const auto& iv : ivs) total += iv.err;
    if (total <= opts.abs_tol) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(ivs.size()) >= opts.max_intervals) break;
    std::vector<Interval> kept, fresh;
    kept.reserve(ivs.size());
    for (auto& iv : ivs) {
      const double share = opts.abs_tol * std::abs(iv.b - iv.a) / len;
      if (iv.err > share) {
        const double m = 0.5 * (iv.a + iv.b);
        fresh.push_back({iv.a, m, {}, 0.0});
        fresh.push_back({m, iv.b, {}, 0.0});
      } else {
        kept.push_back(std::move(iv));
      }
    }
    evaluate(f, fresh, norm, res.evaluations);
    for (auto& iv : fresh) kept.push_back(std::move(iv));
    std::sort(kept.begin(), kept.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    ivs = std::move(kept);
  }
  res.value = CVector::Zero(ivs.front().value.size());
  res.error = 0.0;
  for (const auto& iv : ivs) {
    res.value += iv.value;
    res.error += iv.err;
  }
  res.intervals = static_cast<int>(ivs.size());
  return res;
}

// ---------------------------------------------------------------------------

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

std::vector<cplx> vandermonde_solve(std::span<const double> t, std::span<const cplx> v) {
  const int n = static_cast<int>(t.size());
  CMatrix m(n, n);
  CVector rhs(n);
  for (int i = 0; i < n; ++i) {
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) {
      m(i, k) = p;
      p *= t[i];
    }
    rhs(i) = v[i];
  }
  const CVector c = m.fullPivLu().solve(rhs);
  return {c.data(), c.data() + n};
}

cplx poly_eval(std::span<const cplx> c, cplx t) {
  cplx acc{};
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc;
}

}  // namespace resonwave
