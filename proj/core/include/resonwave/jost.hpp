#pragma once

#include <vector>

#include "resonwave/model.hpp"

namespace resonwave {

/// Jost solutions at one point: U_+ = e^{-lambda x} right of the support,
/// U_- = e^{lambda x} left of it. Columns are the d independent solutions.
struct JostEval {
  cplx lambda;
  CMatrix u_plus, du_plus;
  CMatrix u_minus, du_minus;
  bool scaled = false;
};

enum class JostProvenance { ClosedForm, TransferMatrix };

struct JostFunctionValue {
  cplx w;         // W(lambda), or det of the matrix Wronskian
  cplx w_scaled;  // w * e^{d lambda (x_m - x_0)}
  JostProvenance provenance = JostProvenance::TransferMatrix;
};

/// Per-lambda solver for a Free or PiecewiseConstant potential. Precomputes
/// the Jost solutions at every breakpoint so that evaluation at many x is
/// cheap. Immutable after construction.
class JostSolver {
 public:
  JostSolver(const PotentialSpec& V, cplx lambda);

  cplx lambda() const { return lambda_; }
  int dim() const { return dim_; }

  /// Scalar potentials only.
  void plus(double x, cplx& u, cplx& du) const;
  void minus(double x, cplx& u, cplx& du) const;

  /// Any dimension.
  void plus(double x, CMatrix& u, CMatrix& du) const;
  void minus(double x, CMatrix& u, CMatrix& du) const;

  /// W and W * e^{d lambda L} built from the transfer matrix across the support.
  cplx w() const { return w_; }
  cplx w_scaled() const { return w_scaled_; }
  /// [lambda I, I] T [I; lambda I]; its determinant is w_scaled().
  const CMatrix& scaled_wronskian() const { return m_; }

 private:
  struct Block {
    double left, right;
    cplx v;        // scalar value
    CMatrix vmat;  // matrix value (dim > 1)
    // Schur data of vmat: vmat = q t q^*
    CMatrix q, t;
    bool parlett = true;
  };

  void propagate_scalar(int block, double from, double to, cplx& u, cplx& du) const;
  void propagate_matrix(int block, double from, double to, CMatrix& u, CMatrix& du) const;
  void transfer(int block, double len, CMatrix& c, CMatrix& ls, CMatrix& lzs) const;

  const PotentialSpec* V_;
  cplx lambda_;
  int dim_;
  std::vector<Block> blocks_;
  // Jost data at breakpoints: plus_[k] at breakpoints[k], etc.
  std::vector<cplx> pu_, pdu_, mu_, mdu_;
  std::vector<CMatrix> pU_, pdU_, mU_, mdU_;
  CMatrix m_;
  cplx w_{}, w_scaled_{};
};

/// Transfer matrix of u'' = (lambda^2 - v) u over a length len (scalar):
/// [[c, len s], [len z s, c]] with z = lambda^2 - v.
void scalar_transfer(cplx lambda, cplx v, double len, cplx& c, cplx& ls, cplx& lzs);

/// Entire matrix functions c(M), s(M) by Schur-Parlett with an exponential
/// fallback for (nearly) repeated eigenvalues.
void matrix_cs(const CMatrix& m, CMatrix& c, CMatrix& s);

JostEval jost_eval(double x, cplx lambda, const PotentialSpec& V);

/// U_+ value and x-derivative (d x d). V must be Free or PiecewiseConstant.
std::pair<CMatrix, CMatrix> jost_plus(double x, cplx lambda, const PotentialSpec& V);
std::pair<CMatrix, CMatrix> jost_minus(double x, cplx lambda, const PotentialSpec& V);

/// Closed form for scalar single-block wells and Delta (2 lambda + alpha);
/// transfer matrix otherwise.
JostFunctionValue jost_function(cplx lambda, const PotentialSpec& V);
/// Always the transfer-matrix route (Free and PiecewiseConstant only).
JostFunctionValue jost_function_transfer(cplx lambda, const PotentialSpec& V);
/// Fast path returning only w_scaled.
cplx jost_scaled(cplx lambda, const PotentialSpec& V);

/// d^order W / d lambda^order. Exact for Free and Delta; for a scalar
/// square well of half-width 1 at a simple zero the closed form in terms of
/// sinh(2 sqrt(lambda^2 - alpha)) is used; Cauchy integral otherwise.
cplx jost_function_derivative(cplx lambda, const PotentialSpec& V, int order);
/// Same derivative by Cauchy integration, no closed forms.
cplx jost_function_derivative_cauchy(cplx lambda, const PotentialSpec& V, int order);

/// G~(x, y, lambda) = U_+(max) U_-(min)^T structure (d x d). For Delta the
/// free kernel numerator e^{-lambda |x-y|} is returned.
CMatrix semi_separable_kernel(double x, double y, cplx lambda, const PotentialSpec& V);

}  // namespace resonwave
