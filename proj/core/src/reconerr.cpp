#include "sparsalloc/reconerr.hpp"

#include <numeric>

#include "sparsalloc/csv.hpp"
#include "sparsalloc/errors.hpp"

namespace sparsalloc {

double layer_error(const DenseMatrix& w, const DenseMatrix& w_sparse, const DenseMatrix& x,
                   const DenseMatrix& x_sparse) {
  if (!w.same_shape(w_sparse) || !x.same_shape(x_sparse)) throw ShapeError("layer_error: dense/sparse shapes differ");
  return frob_dist_sq(matmul(w, x), matmul(w_sparse, x_sparse));
}

ErrorTrace trace_errors(const LayerNet& net, const LayerNet& sparse_net, const CalibrationSet& calib) {
  if (net.depth() != sparse_net.depth()) throw ShapeError("trace_errors: nets differ in depth");
  for (std::size_t i = 0; i < net.depth(); ++i) {
    if (!net.layer(i).same_shape(sparse_net.layer(i))) throw ShapeError("trace_errors: layer shapes differ");
  }
  if (calib.features() != net.input_dim()) throw ShapeError("trace_errors: calibration features mismatch");

  ErrorTrace trace;
  trace.per_layer.reserve(net.depth());
  DenseMatrix x = calib.x0;
  DenseMatrix x_sparse = calib.x0;
  for (std::size_t i = 0; i < net.depth(); ++i) {
    DenseMatrix y = matmul(net.layer(i), x);
    DenseMatrix y_sparse = matmul(sparse_net.layer(i), x_sparse);
    trace.per_layer.push_back(frob_dist_sq(y, y_sparse));
    x = apply_activation(std::move(y), net.activation());
    x_sparse = apply_activation(std::move(y_sparse), net.activation());
  }
  trace.total = std::accumulate(trace.per_layer.begin(), trace.per_layer.end(), 0.0);
  return trace;
}

MonotonicityReport check_theorem1(const DenseMatrix& w, const DenseMatrix& x, const std::vector<double>& sparsity_grid,
                                  const PruneMethod& method) {
  if (method.kind == PruneMethod::Kind::NMGroup) throw DomainError("check_theorem1: N:M pruning has no rate sweep");
  for (std::size_t k = 0; k < sparsity_grid.size(); ++k) {
    const double s = sparsity_grid[k];
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("check_theorem1: grid value outside [0,1]");
    if (k > 0 && s < sparsity_grid[k - 1]) throw DomainError("check_theorem1: grid must be ascending");
  }
  MonotonicityReport report;
  report.grid = sparsity_grid;
  const DenseMatrix score = score_layer(w, x, method);
  const DenseMatrix dense_out = matmul(w, x);
  for (double s : sparsity_grid) {
    const DenseMatrix w_sparse = prune_layer(w, score, s).apply(w);
    report.errors.push_back(frob_dist_sq(dense_out, matmul(w_sparse, x)));
  }
  if (report.errors.size() > 1) {
    std::size_t ok = 0;
    for (std::size_t k = 0; k + 1 < report.errors.size(); ++k) {
      if (report.errors[k + 1] >= report.errors[k]) ++ok;
    }
    report.monotone_fraction = static_cast<double>(ok) / static_cast<double>(report.errors.size() - 1);
  }
  return report;
}

BoundReport check_theorem2_bound(const ErrorTrace& trace, const LayerNet& sparse_net) {
  if (trace.per_layer.size() != sparse_net.depth()) throw ShapeError("check_theorem2_bound: trace/net depth mismatch");
  BoundReport report;
  std::size_t ok = 0;
  for (std::size_t i = 0; i + 1 < trace.per_layer.size(); ++i) {
    const DenseMatrix& next = sparse_net.layer(i + 1);
    if (trace.per_layer[i] <= 0.0 || next.all_zero()) {
      ++report.skipped;
      continue;
    }
    const double smin = sigma_min(next);
    BoundCheck c;
    c.layer = i;
    c.sigma_min_sq = smin * smin;
    c.lhs = trace.per_layer[i + 1];
    c.rhs = c.sigma_min_sq * trace.per_layer[i];
    c.satisfied = c.lhs > c.rhs;
    if (c.satisfied) ++ok;
    report.checks.push_back(c);
  }
  if (!report.checks.empty()) {
    report.satisfaction_fraction = static_cast<double>(ok) / static_cast<double>(report.checks.size());
  }
  return report;
}

Theorem3Trial theorem3_trial(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& base,
                             std::size_t layer, double delta, const PruneMethod& method) {
  if (layer + 1 >= net.depth()) throw DomainError("theorem3_trial: layer has no successor");
  auto raised = base.rates();
  raised[layer] += delta;
  if (!(raised[layer] >= 0.0 && raised[layer] <= 1.0)) throw DomainError("theorem3_trial: raised rate leaves [0,1]");

  const auto before = trace_errors(net, prune_net(net, calib, base, method).sparse_net, calib);
  const auto after =
      trace_errors(net, prune_net(net, calib, SparsityProfile::from_rates(raised), method).sparse_net, calib);
  return {before.per_layer[layer + 1], after.per_layer[layer + 1]};
}

std::string trace_to_csv(const ErrorTrace& trace, const LayerNet& sparse_net, const std::string& metadata) {
  if (trace.per_layer.size() != sparse_net.depth()) throw ShapeError("trace_to_csv: trace/net depth mismatch");
  CsvWriter csv({"layer_index", "rate", "error", "sigma_min_sq", "bound_rhs"});
  for (std::size_t i = 0; i < trace.per_layer.size(); ++i) {
    const DenseMatrix& w = sparse_net.layer(i);
    std::string smin_sq;
    std::string rhs;
    if (!w.all_zero()) {
      const double s = sigma_min(w);
      smin_sq = format_double(s * s);
      if (i > 0) rhs = format_double(s * s * trace.per_layer[i - 1]);
    }
    const std::string rate = trace.profile ? format_double(trace.profile->rate(i)) : std::string{};
    csv.row({std::to_string(i + 1), rate, format_double(trace.per_layer[i]), smin_sq, rhs});
  }
  return csv.finish(metadata);
}

}  // namespace sparsalloc
