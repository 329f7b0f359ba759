#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/linalg.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/pruner.hpp"

namespace sparsalloc {

// ||W X - W̃ X̃||_F^2.
double layer_error(const DenseMatrix& w, const DenseMatrix& w_sparse, const DenseMatrix& x,
                   const DenseMatrix& x_sparse);

struct ErrorTrace {
  std::vector<double> per_layer;
  double total = 0.0;
  std::optional<SparsityProfile> profile;
  std::optional<PruneMethod> method;
};

// Runs the dense branch X_{i+1} = act(W_i X_i) and the sparse branch
// X̃_{i+1} = act(W̃_i X̃_i) side by side from X_1 = X̃_1 = calib.x0 and records
// the pre-activation error of every layer.
ErrorTrace trace_errors(const LayerNet& net, const LayerNet& sparse_net, const CalibrationSet& calib);

struct MonotonicityReport {
  std::vector<double> grid;
  std::vector<double> errors;
  double monotone_fraction = 1.0;  // share of adjacent pairs with L(s_{k+1}) >= L(s_k)
};

// Single-layer sweep with a fixed dense input (X̃ = X). The grid must be
// ascending inside [0,1]. NMGroup is rejected since it has no rate knob.
MonotonicityReport check_theorem1(const DenseMatrix& w, const DenseMatrix& x, const std::vector<double>& sparsity_grid,
                                  const PruneMethod& method);

struct BoundCheck {
  std::size_t layer = 0;  // 0-based index of layer i; the pair is (i, i+1)
  double lhs = 0.0;       // L_{i+1}
  double rhs = 0.0;       // sigma_min^2(W̃_{i+1}) * L_i
  double sigma_min_sq = 0.0;
  bool satisfied = false;  // lhs > rhs
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  std::size_t skipped = 0;  // pairs with L_i = 0 or an all-zero W̃_{i+1}
  double satisfaction_fraction = 1.0;
};

// Propagation bound L_{i+1} > sigma_min^2(W̃_{i+1}) L_i for every layer pair
// with L_i > 0.
BoundReport check_theorem2_bound(const ErrorTrace& trace, const LayerNet& sparse_net);

struct Theorem3Trial {
  double next_error_before = 0.0;
  double next_error_after = 0.0;
  bool non_decreasing() const { return next_error_after >= next_error_before; }
};

// Prunes net with `base`, then again with only layer `layer` raised by
// `delta`, and records L_{layer+1} both times.
Theorem3Trial theorem3_trial(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& base,
                             std::size_t layer, double delta, const PruneMethod& method);

// CSV with columns layer_index,rate,error,sigma_min_sq,bound_rhs followed by a
// "# seed=..., version=..." line. Layer indices are 1-based; bound_rhs of the
// first layer is empty.
std::string trace_to_csv(const ErrorTrace& trace, const LayerNet& sparse_net, const std::string& metadata);

}  // namespace sparsalloc
