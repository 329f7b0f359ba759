#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparsalloc/abstract_model.hpp"
#include "sparsalloc/pruner.hpp"

namespace sparsalloc {

// Seeds for the statistical checks: seed_k = derive_seed(base, k).
inline constexpr std::uint64_t kSeedManifestBase = 0x5350414C;  // "SPAL"
std::uint64_t manifest_seed(std::size_t k, std::uint64_t base = kSeedManifestBase);

struct Lemma1Sweep {
  std::size_t cases = 0;
  std::size_t satisfied = 0;  // lhs >= rhs - tolerance
  double worst_margin = 0.0;  // min over cases of lhs - rhs
  // Reported only: A built with rank below its column count.
  std::size_t rank_deficient_cases = 0;
  std::size_t rank_deficient_satisfied = 0;
};

// Random Gaussian pairs (A: m x n with m >= n, B: n x p), every dimension in
// [1, max_dim]. Pairs whose A is not numerically full column rank are redrawn.
Lemma1Sweep lemma1_sweep(std::size_t cases, std::size_t max_dim, double tolerance, std::uint64_t base,
                         std::size_t rank_deficient_cases = 0);

struct Theorem1Sweep {
  std::size_t layers = 0;
  std::size_t fully_monotone = 0;  // layers whose error sequence never decreases
  double mean_fraction = 1.0;
  double min_fraction = 1.0;
};

// Uniform-init dim x dim layers with standard-normal dim x samples inputs,
// swept over {0, step, 2 step, ..., 1}.
Theorem1Sweep theorem1_sweep(std::size_t layers, std::size_t dim, std::size_t samples, double step,
                             const PruneMethod& method, std::uint64_t base);

struct Theorem2Sweep {
  std::size_t nets = 0;
  std::size_t pairs = 0;
  std::size_t satisfied = 0;
  std::size_t skipped = 0;
  double min_ratio = 0.0;  // min lhs / rhs over checked pairs
  double fraction() const { return pairs ? static_cast<double>(satisfied) / static_cast<double>(pairs) : 1.0; }
};

// Linear nets pruned uniformly at `sparsity`, checked pair by pair.
Theorem2Sweep theorem2_sweep(std::size_t nets, std::size_t layers, std::size_t dim, std::size_t samples,
                             double sparsity, const PruneMethod& method, std::uint64_t base);

struct Theorem3Sweep {
  std::size_t trials = 0;
  std::size_t non_decreasing = 0;
  double fraction() const { return trials ? static_cast<double>(non_decreasing) / static_cast<double>(trials) : 1.0; }
};

// Trial k raises layer k mod (L-1) of a uniform profile by delta on its own
// seeded Linear net and compares the next layer's error.
Theorem3Sweep theorem3_sweep(std::size_t trials, std::size_t layers, std::size_t dim, std::size_t samples,
                             double base_sparsity, double delta, const PruneMethod& method, std::uint64_t base);

struct Theorem4Sweep {
  std::size_t instances = 0;  // (multiset, c, family) triples
  std::size_t orderings = 0;  // permutations evaluated
  std::size_t counterexamples = 0;
};

// Every multiset of min_size..max_size distinct values from `values`, for
// every c and family.
Theorem4Sweep theorem4_sweep(const std::vector<double>& values, std::size_t min_size, std::size_t max_size,
                             const std::vector<double>& cs, const std::vector<ErrorFamily>& families);

}  // namespace sparsalloc
