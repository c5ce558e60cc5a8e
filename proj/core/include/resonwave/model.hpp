#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "resonwave/types.hpp"

namespace resonwave {

enum class PotentialKind { Free, Delta, PiecewiseConstant };

const char* to_string(PotentialKind k);

/// The model potential. Outside [breakpoints.front(), breakpoints.back()] it
/// vanishes; between breakpoints j-1 and j it equals blocks[j-1].
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Free;
  cplx alpha{0.0, 0.0};  // Delta coupling
  double beta = 0.0;     // Delta centre
  std::vector<double> breakpoints;
  std::vector<CMatrix> blocks;
  int dim = 1;

  static PotentialSpec free(int dim = 1);
  static PotentialSpec delta(cplx alpha, double beta = 0.0);
  static PotentialSpec square_well(cplx alpha, double half_width = 1.0);
  static PotentialSpec matrix_well(const CMatrix& v0, double half_width = 1.0);
  static PotentialSpec piecewise(std::vector<double> breakpoints, std::vector<CMatrix> blocks);

  /// Throws InvalidArgument if an invariant fails.
  void validate() const;

  bool is_scalar() const { return dim == 1; }
  /// Scalar, one block: the square-well closed forms apply.
  bool is_single_block_scalar() const;
  bool is_even() const;
  /// Real coupling / real blocks: the zero set is symmetric under conjugation.
  bool has_real_coefficients() const;

  /// [x0, xm] for piecewise potentials, {beta, beta} for Delta, {0, 0} for Free.
  std::pair<double, double> support() const;
  /// Points where solutions lose smoothness: breakpoints or beta.
  std::vector<double> singular_points() const;

  /// V(x) as a d x d matrix. At a breakpoint the mean of both sides.
  CMatrix value_at(double x) const;
  cplx scalar_value_at(double x) const;

  /// Block index j for x in (x_{j}, x_{j+1}); -1 left of support, blocks.size() right.
  int block_index(double x) const;

  /// Max over blocks of the spectral norm of V_j.
  double max_norm() const;

  /// An upper bound for max Re lambda over eigenvalue locations. Any Bromwich
  /// line must sit to the right of it.
  double growth_bound() const;
};

/// Uniform grid x_k = x_min + k h.
struct UniformGrid {
  double x_min = -8.0;
  double x_max = 8.0;
  std::size_t n_points = 1025;

  double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t k) const { return x_min + spacing() * static_cast<double>(k); }
  void validate() const;

  /// Grid with (approximately) the requested spacing; endpoints kept exactly.
  static UniformGrid with_spacing(double x_min, double x_max, double h);

  /// Nearest node index (clamped).
  std::size_t nearest(double x) const;
  bool is_node(double x, double rel_tol = 1e-9) const;
  std::vector<double> nodes() const;
};

bool operator==(const UniformGrid& a, const UniformGrid& b);

/// phi_i: 1 on [-i, i], cubic smoothstep 1 - 3u^2 + 2u^3 on the shoulders,
/// 0 beyond |x| = i + 1.
double cutoff_value(int index, double x);

struct CutoffWindow {
  int index = 1;
  UniformGrid grid;
  std::vector<double> samples;
};

CutoffWindow cutoff_window(int index, const UniformGrid& grid);

/// Curves Re lambda = g(Im lambda) used by the expansion. The tail runs along
/// lambda(s) = g_star(s) + eps + i s with g_star(s) = -eta - etatilde ln(1+|s|).
struct ContourSpec {
  double eps = 0.1;
  double g0_level = 0.05;
  double eta = 1.0;
  double etatilde = 0.1;
  double im_truncation = 64.0;
  double quad_tol = 1e-6;

  double g_star(double s) const;
  double sup_g_star() const { return -eta; }
  /// Point on the shifted curve and its derivative d lambda / ds.
  cplx point(double s) const;
  cplx tangent(double s) const;
  /// Re lambda > g_star(Im lambda) + eps.
  bool right_of_curve(cplx lambda) const;

  void validate() const;
};

/// Values of a C^d-valued function on a grid, node-major.
struct Field {
  UniformGrid grid;
  int dim = 1;
  std::vector<cplx> values;

  Field() = default;
  Field(const UniformGrid& g, int d) : grid(g), dim(d), values(g.n_points * d, cplx{}) {}

  cplx& at(std::size_t node, int comp = 0) { return values[node * dim + comp]; }
  cplx at(std::size_t node, int comp = 0) const { return values[node * dim + comp]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);

/// phi_i * field, pointwise.
Field apply_window(const Field& f, const CutoffWindow& w);

/// Discrete norms; L2 uses the trapezoid rule.
double l2_norm(const Field& f);
double linf_norm(const Field& f);
double h1_norm(const Field& f);
/// l2_norm(phi_i * f) without building the product.
double windowed_l2(const Field& f, const CutoffWindow& w);

}  // namespace resonwave
