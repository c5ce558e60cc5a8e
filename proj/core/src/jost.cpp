#include "resonwave/jost.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "resonwave/errors.hpp"
#include "resonwave/numerics.hpp"

namespace resonwave {

namespace {

/// Parlett recurrence for f(T), T upper triangular. Returns false when two
/// diagonal entries are too close for the divided differences.
bool parlett(const CMatrix& t, cplx (*f)(cplx), CMatrix& F) {
  const int n = static_cast<int>(t.rows());
  F = CMatrix::Zero(n, n);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    F(i, i) = f(t(i, i));
    scale = std::max(scale, std::abs(t(i, i)));
  }
  for (int p = 1; p < n; ++p) {
    for (int i = 0; i + p < n; ++i) {
      const int j = i + p;
      cplx num = t(i, j) * (F(j, j) - F(i, i));
      for (int k = i + 1; k < j; ++k) num += t(i, k) * F(k, j) - F(i, k) * t(k, j);
      const cplx den = t(j, j) - t(i, i);
      if (std::abs(den) < 1e-6 * scale) {
        if (std::abs(num) <= 1e-14 * scale * (1.0 + std::abs(F(i, i)))) {
          F(i, j) = 0.0;
          continue;
        }
        return false;
      }
      F(i, j) = num / den;
    }
  }
  return true;
}

/// c and s of m from the exponential of the first-order system
/// [[0, I], [m, 0]]; exp of it is [[c(m), s(m)], [m s(m), c(m)]].
void cs_by_exponential(const CMatrix& m, CMatrix& c, CMatrix& s) {
  const int n = static_cast<int>(m.rows());
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = CMatrix::Identity(n, n);
  g.bottomLeftCorner(n, n) = m;
  const CMatrix e = g.exp();
  c = e.topLeftCorner(n, n);
  s = e.topRightCorner(n, n);
}

void scalar_free_propagate(cplx lambda, double len, cplx& u, cplx& du) {
  cplx c, ls, lzs;
  scalar_transfer(lambda, 0.0, len, c, ls, lzs);
  const cplx nu = c * u + ls * du;
  const cplx ndu = lzs * u + c * du;
  u = nu;
  du = ndu;
}

void matrix_free_propagate(cplx lambda, double len, CMatrix& u, CMatrix& du) {
  cplx c, ls, lzs;
  scalar_transfer(lambda, 0.0, len, c, ls, lzs);
  const CMatrix nu = c * u + ls * du;
  const CMatrix ndu = lzs * u + c * du;
  u = nu;
  du = ndu;
}

}  // namespace

void scalar_transfer(cplx lambda, cplx v, double len, cplx& c, cplx& ls, cplx& lzs) {
  const cplx z = lambda * lambda - v;
  const cplx zz = z * len * len;
  c = entire_c(zz);
  const cplx s = entire_s(zz);
  ls = len * s;
  lzs = len * z * s;
}

void matrix_cs(const CMatrix& m, CMatrix& c, CMatrix& s) {
  Eigen::ComplexSchur<CMatrix> schur(m);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  CMatrix fc, fs;
  if (parlett(t, &entire_c, fc) && parlett(t, &entire_s, fs)) {
    c = q * fc * q.adjoint();
    s = q * fs * q.adjoint();
    return;
  }
  cs_by_exponential(m, c, s);
}

// ---------------------------------------------------------------------------

JostSolver::JostSolver(const PotentialSpec& V, cplx lambda) : V_(&V), lambda_(lambda), dim_(V.dim) {
  if (V.kind == PotentialKind::Delta)
    throw InvalidArgument("Jost solutions for the delta interaction are handled analytically");
  const cplx l = lambda;
  if (V.kind == PotentialKind::Free) {
    m_ = 2.0 * l * CMatrix::Identity(dim_, dim_);
    w_scaled_ = std::pow(2.0 * l, dim_);
    w_ = w_scaled_;
    return;
  }
  const auto& bp = V.breakpoints;
  const int nb = static_cast<int>(V.blocks.size());
  blocks_.resize(nb);
  for (int j = 0; j < nb; ++j) {
    Block& b = blocks_[j];
    b.left = bp[j];
    b.right = bp[j + 1];
    if (dim_ == 1) {
      b.v = V.blocks[j](0, 0);
    } else {
      b.vmat = V.blocks[j];
      Eigen::ComplexSchur<CMatrix> schur(b.vmat);
      b.q = schur.matrixU();
      b.t = schur.matrixT();
      CMatrix probe;
      // probe the recurrence with lambda-independent data: the divided
      // differences only involve differences of eigenvalues of V_j
      b.parlett = parlett(b.t, &entire_c, probe);
    }
  }
  const double x0 = bp.front(), xm = bp.back();
  const double L = xm - x0;

  if (dim_ == 1) {
    pu_.resize(nb + 1);
    pdu_.resize(nb + 1);
    mu_.resize(nb + 1);
    mdu_.resize(nb + 1);
    pu_[nb] = std::exp(-l * xm);
    pdu_[nb] = -l * pu_[nb];
    for (int j = nb - 1; j >= 0; --j) {
      cplx u = pu_[j + 1], du = pdu_[j + 1];
      propagate_scalar(j, bp[j + 1], bp[j], u, du);
      pu_[j] = u;
      pdu_[j] = du;
    }
    // U_- scaled by e^{-lambda x0}
    cplx u = 1.0, du = l;
    const cplx e0 = std::exp(l * x0);
    mu_[0] = e0;
    mdu_[0] = l * e0;
    for (int j = 0; j < nb; ++j) {
      propagate_scalar(j, bp[j], bp[j + 1], u, du);
      mu_[j + 1] = u * e0;
      mdu_[j + 1] = du * e0;
    }
    m_ = CMatrix(1, 1);
    m_(0, 0) = du + l * u;
    w_scaled_ = m_(0, 0);
    w_ = w_scaled_ * std::exp(-l * L);
    return;
  }

  const CMatrix I = CMatrix::Identity(dim_, dim_);
  pU_.resize(nb + 1);
  pdU_.resize(nb + 1);
  mU_.resize(nb + 1);
  mdU_.resize(nb + 1);
  pU_[nb] = std::exp(-l * xm) * I;
  pdU_[nb] = -l * pU_[nb];
  for (int j = nb - 1; j >= 0; --j) {
    CMatrix u = pU_[j + 1], du = pdU_[j + 1];
    propagate_matrix(j, bp[j + 1], bp[j], u, du);
    pU_[j] = u;
    pdU_[j] = du;
  }
  CMatrix u = I, du = l * I;
  const cplx e0 = std::exp(l * x0);
  mU_[0] = e0 * I;
  mdU_[0] = l * e0 * I;
  for (int j = 0; j < nb; ++j) {
    propagate_matrix(j, bp[j], bp[j + 1], u, du);
    mU_[j + 1] = e0 * u;
    mdU_[j + 1] = e0 * du;
  }
  m_ = du + l * u;
  w_scaled_ = m_.determinant();
  w_ = w_scaled_ * std::exp(-static_cast<double>(dim_) * l * L);
}

void JostSolver::propagate_scalar(int block, double from, double to, cplx& u, cplx& du) const {
  cplx c, ls, lzs;
  scalar_transfer(lambda_, blocks_[block].v, to - from, c, ls, lzs);
  const cplx nu = c * u + ls * du;
  const cplx ndu = lzs * u + c * du;
  u = nu;
  du = ndu;
}

void JostSolver::transfer(int block, double len, CMatrix& c, CMatrix& ls, CMatrix& lzs) const {
  const Block& b = blocks_[block];
  const CMatrix I = CMatrix::Identity(dim_, dim_);
  const cplx l2 = lambda_ * lambda_;
  const CMatrix z = l2 * I - b.vmat;
  CMatrix fc, fs;
  bool ok = false;
  if (b.parlett) {
    const CMatrix tz = (len * len) * (l2 * CMatrix::Identity(dim_, dim_) - b.t);
    ok = parlett(tz, &entire_c, fc) && parlett(tz, &entire_s, fs);
    if (ok) {
      c = b.q * fc * b.q.adjoint();
      const CMatrix s = b.q * fs * b.q.adjoint();
      ls = len * s;
      lzs = len * z * s;
    }
  }
  if (!ok) {
    CMatrix s;
    cs_by_exponential((len * len) * z, c, s);
    ls = len * s;
    lzs = len * z * s;
  }
}

void JostSolver::propagate_matrix(int block, double from, double to, CMatrix& u, CMatrix& du) const {
  CMatrix c, ls, lzs;
  transfer(block, to - from, c, ls, lzs);
  const CMatrix nu = c * u + ls * du;
  const CMatrix ndu = lzs * u + c * du;
  u = nu;
  du = ndu;
}

void JostSolver::plus(double x, cplx& u, cplx& du) const {
  if (blocks_.empty() || x >= V_->breakpoints.back()) {
    u = std::exp(-lambda_ * x);
    du = -lambda_ * u;
    return;
  }
  const auto& bp = V_->breakpoints;
  if (x < bp.front()) {
    u = pu_[0];
    du = pdu_[0];
    scalar_free_propagate(lambda_, x - bp.front(), u, du);
    return;
  }
  const int j = V_->block_index(x);
  u = pu_[j + 1];
  du = pdu_[j + 1];
  propagate_scalar(j, bp[j + 1], x, u, du);
}

void JostSolver::minus(double x, cplx& u, cplx& du) const {
  if (blocks_.empty() || x <= V_->breakpoints.front()) {
    u = std::exp(lambda_ * x);
    du = lambda_ * u;
    return;
  }
  const auto& bp = V_->breakpoints;
  if (x > bp.back()) {
    u = mu_.back();
    du = mdu_.back();
    scalar_free_propagate(lambda_, x - bp.back(), u, du);
    return;
  }
  const int j = V_->block_index(x);
  const int jj = std::min(j, static_cast<int>(blocks_.size()) - 1);
  u = mu_[jj];
  du = mdu_[jj];
  propagate_scalar(jj, bp[jj], x, u, du);
}

void JostSolver::plus(double x, CMatrix& u, CMatrix& du) const {
  if (dim_ == 1) {
    cplx a, b;
    plus(x, a, b);
    u = CMatrix::Constant(1, 1, a);
    du = CMatrix::Constant(1, 1, b);
    return;
  }
  const CMatrix I = CMatrix::Identity(dim_, dim_);
  if (blocks_.empty() || x >= V_->breakpoints.back()) {
    u = std::exp(-lambda_ * x) * I;
    du = -lambda_ * u;
    return;
  }
  const auto& bp = V_->breakpoints;
  if (x < bp.front()) {
    u = pU_[0];
    du = pdU_[0];
    matrix_free_propagate(lambda_, x - bp.front(), u, du);
    return;
  }
  const int j = V_->block_index(x);
  u = pU_[j + 1];
  du = pdU_[j + 1];
  propagate_matrix(j, bp[j + 1], x, u, du);
}

void JostSolver::minus(double x, CMatrix& u, CMatrix& du) const {
  if (dim_ == 1) {
    cplx a, b;
    minus(x, a, b);
    u = CMatrix::Constant(1, 1, a);
    du = CMatrix::Constant(1, 1, b);
    return;
  }
  const CMatrix I = CMatrix::Identity(dim_, dim_);
  if (blocks_.empty() || x <= V_->breakpoints.front()) {
    u = std::exp(lambda_ * x) * I;
    du = lambda_ * u;
    return;
  }
  const auto& bp = V_->breakpoints;
  if (x > bp.back()) {
    u = mU_.back();
    du = mdU_.back();
    matrix_free_propagate(lambda_, x - bp.back(), u, du);
    return;
  }
  const int j = std::min(V_->block_index(x), static_cast<int>(blocks_.size()) - 1);
  u = mU_[j];
  du = mdU_[j];
  propagate_matrix(j, bp[j], x, u, du);
}

// ---------------------------------------------------------------------------

JostEval jost_eval(double x, cplx lambda, const PotentialSpec& V) {
  JostSolver js(V, lambda);
  JostEval e;
  e.lambda = lambda;
  js.plus(x, e.u_plus, e.du_plus);
  js.minus(x, e.u_minus, e.du_minus);
  return e;
}

std::pair<CMatrix, CMatrix> jost_plus(double x, cplx lambda, const PotentialSpec& V) {
  JostSolver js(V, lambda);
  CMatrix u, du;
  js.plus(x, u, du);
  return {u, du};
}

std::pair<CMatrix, CMatrix> jost_minus(double x, cplx lambda, const PotentialSpec& V) {
  JostSolver js(V, lambda);
  CMatrix u, du;
  js.minus(x, u, du);
  return {u, du};
}

namespace {

/// Closed form for a scalar single-block well of half-width a:
/// W e^{2 lambda a} = 2 (lambda c + a z s)(c + a lambda s), c = c(a^2 z), s = s(a^2 z).
cplx well_scaled_closed_form(cplx lambda, cplx alpha, double a) {
  const cplx z = lambda * lambda - alpha;
  const cplx zz = a * a * z;
  const cplx c = entire_c(zz);
  const cplx s = entire_s(zz);
  return 2.0 * (lambda * c + a * z * s) * (c + a * lambda * s);
}

}  // namespace

JostFunctionValue jost_function(cplx lambda, const PotentialSpec& V) {
  JostFunctionValue r;
  switch (V.kind) {
    case PotentialKind::Free:
      r.w = r.w_scaled = std::pow(2.0 * lambda, V.dim);
      r.provenance = JostProvenance::ClosedForm;
      return r;
    case PotentialKind::Delta:
      r.w = r.w_scaled = 2.0 * lambda + V.alpha;
      r.provenance = JostProvenance::ClosedForm;
      return r;
    case PotentialKind::PiecewiseConstant:
      break;
  }
  if (V.is_single_block_scalar()) {
    const double a = 0.5 * (V.breakpoints[1] - V.breakpoints[0]);
    r.w_scaled = well_scaled_closed_form(lambda, V.blocks[0](0, 0), a);
    r.w = r.w_scaled * std::exp(-2.0 * lambda * a);
    r.provenance = JostProvenance::ClosedForm;
    return r;
  }
  return jost_function_transfer(lambda, V);
}

JostFunctionValue jost_function_transfer(cplx lambda, const PotentialSpec& V) {
  if (V.kind == PotentialKind::Delta) return jost_function(lambda, V);
  JostSolver js(V, lambda);
  JostFunctionValue r;
  r.w = js.w();
  r.w_scaled = js.w_scaled();
  r.provenance = JostProvenance::TransferMatrix;
  return r;
}

cplx jost_scaled(cplx lambda, const PotentialSpec& V) {
  if (V.kind != PotentialKind::PiecewiseConstant || V.is_single_block_scalar())
    return jost_function(lambda, V).w_scaled;
  // only the left solution is needed: propagate it across the support
  const auto& bp = V.breakpoints;
  if (V.dim == 1) {
    cplx u = 1.0, du = lambda;
    for (std::size_t j = 0; j < V.blocks.size(); ++j) {
      cplx c, ls, lzs;
      scalar_transfer(lambda, V.blocks[j](0, 0), bp[j + 1] - bp[j], c, ls, lzs);
      const cplx nu = c * u + ls * du;
      du = lzs * u + c * du;
      u = nu;
    }
    return du + lambda * u;
  }
  return JostSolver(V, lambda).w_scaled();
}

cplx jost_function_derivative_cauchy(cplx lambda, const PotentialSpec& V, int order) {
  auto w = [&V](cplx l) { return jost_function(l, V).w; };
  return cauchy_derivative(w, lambda, order, cauchy_radius(lambda), 64);
}

cplx jost_function_derivative(cplx lambda, const PotentialSpec& V, int order) {
  if (order < 1 || order > 3) throw InvalidArgument("derivative order must be 1, 2 or 3");
  if (V.kind == PotentialKind::Delta || (V.kind == PotentialKind::Free && V.dim == 1))
    return order == 1 ? cplx(2.0) : cplx(0.0);
  if (order == 1 && V.is_single_block_scalar() && V.breakpoints[0] == -1.0 && V.breakpoints[1] == 1.0) {
    const cplx alpha = V.blocks[0](0, 0);
    const cplx z = lambda * lambda - alpha;
    const double eps = 10.0 * std::numeric_limits<double>::epsilon();
    const bool regular = std::abs(lambda) > eps && std::abs(z) > eps * (1.0 + std::abs(alpha)) &&
                         std::abs(1.0 + lambda) > 1e-6;
    const JostFunctionValue wv = jost_function(lambda, V);
    const bool at_zero = std::abs(wv.w_scaled) < 1e-9 * (1.0 + std::norm(lambda));
    if (regular && at_zero) {
      // sinh(2k)/k^3 = 2 s(4z)/z with k^2 = z
      return -alpha * alpha * (1.0 + lambda) * 2.0 * entire_s(4.0 * z) / (lambda * z * std::exp(2.0 * lambda));
    }
  }
  return jost_function_derivative_cauchy(lambda, V, order);
}

CMatrix semi_separable_kernel(double x, double y, cplx lambda, const PotentialSpec& V) {
  if (V.kind == PotentialKind::Delta) return CMatrix::Constant(1, 1, std::exp(-lambda * std::abs(x - y)));
  JostSolver js(V, lambda);
  const double hi = std::max(x, y), lo = std::min(x, y);
  CMatrix up, dup, um, dum;
  js.plus(hi, up, dup);
  js.minus(lo, um, dum);
  return up * um.transpose();
}

}  // namespace resonwave
