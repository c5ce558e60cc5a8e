#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "resonwave/types.hpp"

namespace resonwave {

// c(z) = cosh(sqrt z), s(z) = sinh(sqrt z)/sqrt z. Both are entire, so no
// branch of the square root ever leaks out.
cplx entire_c(cplx z);
cplx entire_s(cplx z);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes; cached, thread-safe.
const QuadratureRule& gauss_legendre(int n);

/// Derivative of the given order at z0 from a trapezoid rule on a circle.
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, int order,
                       double radius, int n_points = 64);

/// Default radius 1e-2 * max(1, |z0|).
double cauchy_radius(cplx z0);

// ---------------------------------------------------------------------------
// threading

/// Number of worker threads for parallel_for. Initialised from
/// RESONWAVE_THREADS, otherwise 1.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Each index is handled by exactly one thread
/// and writes only its own slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod (7/15) for vector-valued integrands

/// Fills out[k] with the integrand at s[k]. Called with batches so that the
/// caller can evaluate nodes in parallel.
using BatchIntegrand =
    std::function<void(std::span<const double> s, std::vector<CVector>& out)>;

struct AdaptiveOptions {
  double abs_tol = 1e-8;
  int initial_intervals = 8;
  int max_intervals = 200000;
};

struct AdaptiveResult {
  CVector value;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

using VectorNorm = std::function<double(const CVector&)>;

AdaptiveResult integrate_gk15(const BatchIntegrand& f, double a, double b,
                              const AdaptiveOptions& opts, const VectorNorm& norm);

// ---------------------------------------------------------------------------
// small helpers

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Solves a small dense complex Vandermonde system sum_k c_k t_i^k = v_i.
std::vector<cplx> vandermonde_solve(std::span<const double> t, std::span<const cplx> v);

/// Horner evaluation of sum_k c_k t^k.
cplx poly_eval(std::span<const cplx> c, cplx t);

}  // namespace resonwave
