#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/pruner.hpp"

namespace sparsalloc {

enum class ObjectiveKind {
  // Total reconstruction error of the pruned net on the calibration set.
  TotalReconError,
  // Prune on the first half of the calibration samples and report
  // ||X_{L+1} - X̃_{L+1}||_F^2 on the second half.
  HeldOutLoss,
};

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective(std::string_view s);

struct SearchSettings {
  PruneMethod method = PruneMethod::wanda();
  ObjectiveKind objective = ObjectiveKind::TotalReconError;
  PruneOptions prune;
};

double evaluate_profile(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& profile,
                        const SearchSettings& settings);

struct SearchCandidate {
  std::optional<double> beta;  // grid search only
  double objective = 0.0;
};

struct SearchReport {
  std::vector<SearchCandidate> candidates;
  std::optional<double> best_beta;
  SparsityProfile best_profile;
  double best_objective = 0.0;
  ObjectiveKind objective_kind = ObjectiveKind::TotalReconError;
  std::chrono::duration<double> wall_time{0.0};
};

// Evaluates every grid_candidates(S, L, step) value, re-pruning from the
// dense net each time. The best candidate has the lowest objective, ties to
// the smaller beta.
SearchReport grid_search_beta(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity, double step,
                              const SearchSettings& settings = {});

struct StepAblationRow {
  double step = 0.0;
  std::size_t evaluations = 0;
  double best_beta = 0.0;
  double best_objective = 0.0;
  std::chrono::duration<double> wall_time{0.0};
};

std::vector<StepAblationRow> step_ablation(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity,
                                           const std::vector<double>& steps, const SearchSettings& settings = {});

// Shift-and-clip repair: returns clip(rates + t, 0, 1) with t chosen so the
// mean equals target_mean. DomainError if target_mean is outside [0,1].
std::vector<double> repair_mean(const std::vector<double>& rates, double target_mean);

// Uniform random profiles with mean S (repaired), best kept; ties to the
// earlier sample. Deterministic in seed.
SearchReport random_search_profiles(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity,
                                    std::size_t iterations, std::uint64_t seed, const SearchSettings& settings = {});

// CSV of (beta, objective) for grid reports, (iteration, objective) otherwise.
std::string search_to_csv(const SearchReport& report, const std::string& metadata);
// Full report as JSON (wall time excluded so reports are reproducible).
std::string search_to_json(const SearchReport& report);
std::string ablation_to_csv(const std::vector<StepAblationRow>& rows, const std::string& metadata);

}  // namespace sparsalloc
