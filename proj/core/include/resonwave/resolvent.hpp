#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "resonwave/model.hpp"
#include "resonwave/state.hpp"

namespace resonwave {

struct GreenKernelEval {
  CMatrix value;
  cplx lambda;
  bool regularized_at_zero = false;
};

/// G(x, y, lambda). Free: e^{-lambda|x-y|}/(2 lambda). Delta: free kernel
/// minus the rank-one term, by series near lambda = 0. Piecewise: G~/W,
/// or the matrix Green function. Throws PoleProximity near a pole.
GreenKernelEval green_kernel(double x, double y, cplx lambda, const PotentialSpec& V);

/// Quadrature data for applying the resolvent family to one state on one
/// output grid. Build once, then call apply() for many lambda; thread-safe.
class ResolventWorkspace {
 public:
  ResolventWorkspace(const LocalizedState& f, const UniformGrid& eval_grid, const PotentialSpec& V);

  /// R(lambda) f on the output grid (the meromorphic extension for Re lambda <= 0).
  Field apply(cplx lambda) const;
  /// K~(lambda) f = W(lambda) R(lambda) f, finite at zeros of W. Scalar
  /// Free/PiecewiseConstant only.
  Field apply_numerator(cplx lambda) const;

  const UniformGrid& grid() const { return grid_; }
  const PotentialSpec& potential() const { return V_; }
  int dim() const { return dim_; }

 private:
  struct Level {
    std::vector<double> y, w;
    std::vector<cplx> fy;              // f at nodes, dim per node
    std::vector<std::size_t> seg_end;  // node range of segment k is [seg_end[k-1], seg_end[k])
  };

  const Level& level(int l) const;
  int level_for(cplx lambda) const;
  void refine_cuts();

  Field apply_scalar(cplx lambda, bool divide) const;
  Field apply_delta(cplx lambda) const;
  Field apply_delta_series(cplx lambda) const;
  Field apply_matrix(cplx lambda) const;

  LocalizedState f_;
  UniformGrid grid_;
  PotentialSpec V_;
  int dim_;
  std::vector<double> cuts_;            // segment endpoints inside supp f
  std::vector<std::size_t> node_cut_;   // for each output node, number of segments left of it
  double max_seg_ = 0.0;
  double rate_extra_ = 1.0;

  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Level>> levels_;
};

/// One-shot form of ResolventWorkspace::apply.
Field apply_resolvent(cplx lambda, const LocalizedState& f, const UniformGrid& eval_grid,
                      const PotentialSpec& V);

/// || (lambda^2 - d^2 - V) R(lambda) f - f || in L2 over the grid interior,
/// fourth-order differences, skipping nodes whose stencil crosses a kink.
double resolvent_residual(cplx lambda, const LocalizedState& f, const PotentialSpec& V);

/// True when lambda is within numerical reach of a pole of R.
bool near_pole(cplx lambda, const PotentialSpec& V);

}  // namespace resonwave
