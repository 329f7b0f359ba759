#include "sparsalloc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/linalg.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/reconerr.hpp"
#include "sparsalloc/rng.hpp"

namespace sparsalloc {

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, CounterRng& rng) {
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

std::size_t draw_dim(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

std::vector<std::size_t> square_dims(std::size_t layers, std::size_t dim) {
  return std::vector<std::size_t>(layers + 1, dim);
}

}  // namespace

std::uint64_t manifest_seed(std::size_t k, std::uint64_t base) { return derive_seed(base, k); }

Lemma1Sweep lemma1_sweep(std::size_t cases, std::size_t max_dim, double tolerance, std::uint64_t base,
                         std::size_t rank_deficient_cases) {
  if (max_dim == 0) throw DomainError("lemma1_sweep: max_dim must be >= 1");
  Lemma1Sweep out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cases; ++k) {
    CounterRng rng(manifest_seed(k, base));
    for (;;) {
      const std::size_t n = draw_dim(rng, 1, max_dim);
      const std::size_t m = draw_dim(rng, n, max_dim);
      const std::size_t p = draw_dim(rng, 1, max_dim);
      const DenseMatrix a = gaussian(m, n, rng);
      if (numerical_rank(a) != n) continue;
      const DenseMatrix b = gaussian(n, p, rng);
      const auto gap = lemma1_gap(a, b);
      ++out.cases;
      if (gap.lhs >= gap.rhs - tolerance) ++out.satisfied;
      out.worst_margin = std::min(out.worst_margin, gap.lhs - gap.rhs);
      break;
    }
  }
  for (std::size_t k = 0; k < rank_deficient_cases; ++k) {
    CounterRng rng(manifest_seed(k, derive_seed(base, 0xDEF)));
    const std::size_t n = draw_dim(rng, 2, std::max<std::size_t>(max_dim, 2));
    const std::size_t m = draw_dim(rng, n, std::max<std::size_t>(max_dim, 2));
    const std::size_t r = draw_dim(rng, 1, n - 1);
    const std::size_t p = draw_dim(rng, 1, max_dim);
    const DenseMatrix a = matmul(gaussian(m, r, rng), gaussian(r, n, rng));
    const DenseMatrix b = gaussian(n, p, rng);
    const auto gap = lemma1_gap(a, b);
    ++out.rank_deficient_cases;
    if (gap.lhs >= gap.rhs - tolerance) ++out.rank_deficient_satisfied;
  }
  if (out.cases == 0) out.worst_margin = 0.0;
  return out;
}

Theorem1Sweep theorem1_sweep(std::size_t layers, std::size_t dim, std::size_t samples, double step,
                             const PruneMethod& method, std::uint64_t base) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("theorem1_sweep: step must lie in (0,1]");
  std::vector<double> grid;
  const auto points = static_cast<std::size_t>(std::llround(1.0 / step));
  for (std::size_t k = 0; k <= points; ++k) grid.push_back(std::min(1.0, static_cast<double>(k) * step));

  Theorem1Sweep out;
  out.layers = layers;
  double sum = 0.0;
  for (std::size_t k = 0; k < layers; ++k) {
    const auto seed = manifest_seed(k, base);
    const auto w = generate_net(1, {dim, dim}, Activation::Linear, seed).layer(0);
    const auto x = generate_calibration(dim, samples, derive_seed(seed, 1)).x0;
    const auto report = check_theorem1(w, x, grid, method);
    if (report.monotone_fraction == 1.0) ++out.fully_monotone;
    sum += report.monotone_fraction;
    out.min_fraction = std::min(out.min_fraction, report.monotone_fraction);
  }
  out.mean_fraction = layers ? sum / static_cast<double>(layers) : 1.0;
  return out;
}

Theorem2Sweep theorem2_sweep(std::size_t nets, std::size_t layers, std::size_t dim, std::size_t samples,
                             double sparsity, const PruneMethod& method, std::uint64_t base) {
  Theorem2Sweep out;
  out.nets = nets;
  out.min_ratio = std::numeric_limits<double>::infinity();
  const auto profile = allocate_uniform(sparsity, layers);
  for (std::size_t k = 0; k < nets; ++k) {
    const auto seed = manifest_seed(k, base);
    const auto net = generate_net(layers, square_dims(layers, dim), Activation::Linear, seed);
    const auto calib = generate_calibration(dim, samples, derive_seed(seed, 1));
    const auto pruned = prune_net(net, calib, profile, method);
    const auto trace = trace_errors(net, pruned.sparse_net, calib);
    const auto report = check_theorem2_bound(trace, pruned.sparse_net);
    out.skipped += report.skipped;
    for (const auto& c : report.checks) {
      ++out.pairs;
      if (c.satisfied) ++out.satisfied;
      if (c.rhs > 0.0) out.min_ratio = std::min(out.min_ratio, c.lhs / c.rhs);
    }
  }
  if (out.pairs == 0) out.min_ratio = 0.0;
  return out;
}

Theorem3Sweep theorem3_sweep(std::size_t trials, std::size_t layers, std::size_t dim, std::size_t samples,
                             double base_sparsity, double delta, const PruneMethod& method, std::uint64_t base) {
  if (layers < 2) throw DomainError("theorem3_sweep: need at least two layers");
  Theorem3Sweep out;
  const auto profile = allocate_uniform(base_sparsity, layers);
  for (std::size_t k = 0; k < trials; ++k) {
    const auto seed = manifest_seed(k, base);
    const auto net = generate_net(layers, square_dims(layers, dim), Activation::Linear, seed);
    const auto calib = generate_calibration(dim, samples, derive_seed(seed, 1));
    const auto trial = theorem3_trial(net, calib, profile, k % (layers - 1), delta, method);
    ++out.trials;
    if (trial.non_decreasing()) ++out.non_decreasing;
  }
  return out;
}

Theorem4Sweep theorem4_sweep(const std::vector<double>& values, std::size_t min_size, std::size_t max_size,
                             const std::vector<double>& cs, const std::vector<ErrorFamily>& families) {
  Theorem4Sweep out;
  const std::size_t n = values.size();
  for (std::size_t size = min_size; size <= std::min(max_size, n); ++size) {
    // Walk every size-subset via a selection bitmap in lexicographic order.
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<double> subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) subset.push_back(values[i]);
      }
      for (double c : cs) {
        for (const auto& f : families) {
          const auto report = verify_theorem4(subset, {c, f});
          ++out.instances;
          out.orderings += report.ranking.size();
          out.counterexamples += report.counterexamples;
          if (!report.all_equal && !report.ascending_is_strict_minimum && report.counterexamples == 0) {
            ++out.counterexamples;
          }
        }
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

}  // namespace sparsalloc
