#include "resonwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resonwave/errors.hpp"

namespace resonwave {

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Free: return "free";
    case PotentialKind::Delta: return "delta";
    case PotentialKind::PiecewiseConstant: return "piecewise";
  }
  return "?";
}

PotentialSpec PotentialSpec::free(int dim) {
  PotentialSpec v;
  v.kind = PotentialKind::Free;
  v.dim = dim;
  return v;
}

PotentialSpec PotentialSpec::delta(cplx alpha, double beta) {
  PotentialSpec v;
  v.kind = PotentialKind::Delta;
  v.alpha = alpha;
  v.beta = beta;
  return v;
}

PotentialSpec PotentialSpec::square_well(cplx alpha, double half_width) {
  CMatrix m(1, 1);
  m(0, 0) = alpha;
  return piecewise({-half_width, half_width}, {m});
}

PotentialSpec PotentialSpec::matrix_well(const CMatrix& v0, double half_width) {
  return piecewise({-half_width, half_width}, {v0});
}

PotentialSpec PotentialSpec::piecewise(std::vector<double> breakpoints, std::vector<CMatrix> blocks) {
  PotentialSpec v;
  v.kind = PotentialKind::PiecewiseConstant;
  v.dim = blocks.empty() ? 1 : static_cast<int>(blocks.front().rows());
  v.breakpoints = std::move(breakpoints);
  v.blocks = std::move(blocks);
  v.validate();
  return v;
}

void PotentialSpec::validate() const {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  switch (kind) {
    case PotentialKind::Free:
      return;
    case PotentialKind::Delta:
      if (dim != 1) throw InvalidArgument("delta interaction is scalar only");
      if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(beta))
        throw InvalidArgument("non-finite delta parameters");
      return;
    case PotentialKind::PiecewiseConstant:
      break;
  }
  if (breakpoints.size() < 2) throw InvalidArgument("need at least two breakpoints");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1])) throw InvalidArgument("breakpoints not increasing");
  if (blocks.size() + 1 != breakpoints.size())
    throw InvalidArgument("expected one block per interval between breakpoints");
  for (const auto& b : blocks) {
    if (b.rows() != dim || b.cols() != dim) throw InvalidArgument("block dimension mismatch");
    if (!b.allFinite()) throw InvalidArgument("non-finite block entry");
  }
}

bool PotentialSpec::is_single_block_scalar() const {
  return kind == PotentialKind::PiecewiseConstant && dim == 1 && blocks.size() == 1;
}

bool PotentialSpec::is_even() const {
  switch (kind) {
    case PotentialKind::Free: return true;
    case PotentialKind::Delta: return beta == 0.0;
    case PotentialKind::PiecewiseConstant: {
      const std::size_t m = breakpoints.size();
      for (std::size_t k = 0; k < m; ++k)
        if (std::abs(breakpoints[k] + breakpoints[m - 1 - k]) > 1e-14) return false;
      for (std::size_t j = 0; j < blocks.size(); ++j)
        if ((blocks[j] - blocks[blocks.size() - 1 - j]).norm() > 0) return false;
      return true;
    }
  }
  return false;
}

std::pair<double, double> PotentialSpec::support() const {
  switch (kind) {
    case PotentialKind::Free: return {0.0, 0.0};
    case PotentialKind::Delta: return {beta, beta};
    case PotentialKind::PiecewiseConstant: return {breakpoints.front(), breakpoints.back()};
  }
  return {0.0, 0.0};
}

std::vector<double> PotentialSpec::singular_points() const {
  switch (kind) {
    case PotentialKind::Free: return {};
    case PotentialKind::Delta: return {beta};
    case PotentialKind::PiecewiseConstant: return breakpoints;
  }
  return {};
}

int PotentialSpec::block_index(double x) const {
  if (kind != PotentialKind::PiecewiseConstant) return -1;
  if (x < breakpoints.front()) return -1;
  if (x >= breakpoints.back()) return static_cast<int>(blocks.size());
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return static_cast<int>(it - breakpoints.begin()) - 1;
}

CMatrix PotentialSpec::value_at(double x) const {
  CMatrix z = CMatrix::Zero(dim, dim);
  if (kind != PotentialKind::PiecewiseConstant) return z;
  const int m = static_cast<int>(breakpoints.size());
  for (int k = 0; k < m; ++k) {
    if (x == breakpoints[k]) {
      CMatrix acc = z;
      if (k > 0) acc += blocks[k - 1];
      if (k < m - 1) acc += blocks[k];
      return 0.5 * acc;
    }
  }
  const int j = block_index(x);
  if (j < 0 || j >= static_cast<int>(blocks.size())) return z;
  return blocks[j];
}

cplx PotentialSpec::scalar_value_at(double x) const { return value_at(x)(0, 0); }

bool PotentialSpec::has_real_coefficients() const {
  if (kind == PotentialKind::Delta) return alpha.imag() == 0.0;
  for (const auto& b : blocks)
    if (b.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

double PotentialSpec::max_norm() const {
  if (kind == PotentialKind::Delta) return std::abs(alpha);
  double m = 0.0;
  for (const auto& b : blocks) {
    Eigen::JacobiSVD<CMatrix> svd(b);
    m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

double PotentialSpec::growth_bound() const {
  switch (kind) {
    case PotentialKind::Free: return 0.0;
    case PotentialKind::Delta: return std::max(0.0, -alpha.real() / 2.0);
    case PotentialKind::PiecewiseConstant: break;
  }
  // lambda^2 lies in the numerical range of d^2 + V, which sits inside
  // {Re <= hr, |Im| <= hi}; take the largest Re sqrt over that set.
  double hr = 0.0, hi = 0.0;
  for (const auto& b : blocks) {
    const CMatrix herm = 0.5 * (b + b.adjoint());
    const CMatrix skew = (b - b.adjoint()) * cplx(0.0, -0.5);
    Eigen::SelfAdjointEigenSolver<CMatrix> eh(herm), es(skew);
    hr = std::max(hr, eh.eigenvalues().maxCoeff());
    hi = std::max(hi, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return std::sqrt(0.5 * (std::hypot(hr, hi) + hr));
}

// ---------------------------------------------------------------------------

void UniformGrid::validate() const {
  if (n_points < 2) throw InvalidArgument("grid needs at least two points");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw InvalidArgument("grid requires x_min < x_max");
}

UniformGrid UniformGrid::with_spacing(double x_min, double x_max, double h) {
  UniformGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_points = static_cast<std::size_t>(std::llround((x_max - x_min) / h)) + 1;
  g.validate();
  return g;
}

std::size_t UniformGrid::nearest(double x) const {
  const double k = std::round((x - x_min) / spacing());
  if (k <= 0) return 0;
  if (k >= static_cast<double>(n_points - 1)) return n_points - 1;
  return static_cast<std::size_t>(k);
}

bool UniformGrid::is_node(double x, double rel_tol) const {
  return std::abs(this->x(nearest(x)) - x) <= rel_tol * spacing();
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> v(n_points);
  for (std::size_t k = 0; k < n_points; ++k) v[k] = x(k);
  return v;
}

bool operator==(const UniformGrid& a, const UniformGrid& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.n_points == b.n_points;
}

// ---------------------------------------------------------------------------

double cutoff_value(int index, double x) {
  const double ax = std::abs(x);
  const double i = index;
  if (ax <= i) return 1.0;
  if (ax >= i + 1.0) return 0.0;
  const double u = ax - i;
  return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

CutoffWindow cutoff_window(int index, const UniformGrid& grid) {
  if (index < 1) throw InvalidArgument("window index must be positive");
  grid.validate();
  const double reach = index + 1.0;
  if (grid.x_min > -reach || grid.x_max < reach)
    throw InvalidArgument("grid too small for cutoff window " + std::to_string(index));
  CutoffWindow w;
  w.index = index;
  w.grid = grid;
  w.samples.resize(grid.n_points);
  for (std::size_t k = 0; k < grid.n_points; ++k) w.samples[k] = cutoff_value(index, grid.x(k));
  return w;
}

// ---------------------------------------------------------------------------

double ContourSpec::g_star(double s) const { return -eta - etatilde * std::log1p(std::abs(s)); }

cplx ContourSpec::point(double s) const { return {g_star(s) + eps, s}; }

cplx ContourSpec::tangent(double s) const {
  const double sg = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
  return {-etatilde * sg / (1.0 + std::abs(s)), 1.0};
}

bool ContourSpec::right_of_curve(cplx lambda) const {
  return lambda.real() > g_star(lambda.imag()) + eps;
}

void ContourSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(eps) || !finite(g0_level) || !finite(eta) || !finite(etatilde) ||
      !finite(im_truncation) || !finite(quad_tol))
    throw InvalidArgument("non-finite contour parameter");
  if (!(eps > 0)) throw InvalidArgument("eps must be positive");
  if (!(eta > 0)) throw InvalidArgument("eta must be positive");
  if (!(etatilde > 0)) throw InvalidArgument("etatilde must be positive");
  if (!(im_truncation > 0)) throw InvalidArgument("im_truncation must be positive");
  if (!(quad_tol > 0)) throw InvalidArgument("quad_tol must be positive");
  if (!(sup_g_star() + eps < g0_level)) throw InvalidArgument("contour ordering violated");
}

// ---------------------------------------------------------------------------

namespace {

void check_compatible(const Field& a, const Field& b) {
  if (!(a.grid == b.grid) || a.dim != b.dim) throw InvalidArgument("field grids differ");
}

double trapezoid_weight(std::size_t k, std::size_t n) { return (k == 0 || k + 1 == n) ? 0.5 : 1.0; }

}  // namespace

Field& Field::operator+=(const Field& o) {
  check_compatible(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_compatible(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }

Field apply_window(const Field& f, const CutoffWindow& w) {
  Field out = f;
  for (std::size_t k = 0; k < f.grid.n_points; ++k) {
    const double phi = cutoff_value(w.index, f.grid.x(k));
    for (int c = 0; c < f.dim; ++c) out.at(k, c) *= phi;
  }
  return out;
}

double l2_norm(const Field& f) {
  const std::size_t n = f.grid.n_points;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (int c = 0; c < f.dim; ++c) s += std::norm(f.at(k, c));
    acc += trapezoid_weight(k, n) * s;
  }
  return std::sqrt(acc * f.grid.spacing());
}

double windowed_l2(const Field& f, const CutoffWindow& w) {
  const std::size_t n = f.grid.n_points;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = cutoff_value(w.index, f.grid.x(k));
    if (phi == 0.0) continue;
    double s = 0.0;
    for (int c = 0; c < f.dim; ++c) s += std::norm(f.at(k, c));
    acc += trapezoid_weight(k, n) * phi * phi * s;
  }
  return std::sqrt(acc * f.grid.spacing());
}

double linf_norm(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double h1_norm(const Field& f) {
  const double l2 = l2_norm(f);
  const std::size_t n = f.grid.n_points;
  const double h = f.grid.spacing();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (int c = 0; c < f.dim; ++c) acc += std::norm((f.at(k + 1, c) - f.at(k, c)) / h);
  return std::sqrt(l2 * l2 + acc * h);
}

}  // namespace resonwave
