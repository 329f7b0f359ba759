#include "sparsalloc/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "sparsalloc/csv.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/parallel.hpp"
#include "sparsalloc/reconerr.hpp"
#include "sparsalloc/rng.hpp"

namespace sparsalloc {

namespace {

using Clock = std::chrono::steady_clock;

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double clipped_mean(const std::vector<double>& rates, double shift) {
  double s = 0.0;
  for (double r : rates) s += std::clamp(r + shift, 0.0, 1.0);
  return s / static_cast<double>(rates.size());
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::HeldOutLoss ? "heldout" : "recon";
}

ObjectiveKind parse_objective(std::string_view s) {
  if (s == "recon") return ObjectiveKind::TotalReconError;
  if (s == "heldout") return ObjectiveKind::HeldOutLoss;
  throw DomainError("unknown objective '" + std::string(s) + "' (recon | heldout)");
}

double evaluate_profile(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& profile,
                        const SearchSettings& settings) {
  if (settings.objective == ObjectiveKind::TotalReconError) {
    const auto pruned = prune_net(net, calib, profile, settings.method, settings.prune);
    return trace_errors(net, pruned.sparse_net, calib).total;
  }
  const auto [fit, held_out] = split_samples(calib, (calib.samples() + 1) / 2);
  const auto pruned = prune_net(net, fit, profile, settings.method, settings.prune);
  const auto dense = forward(net, held_out.x0);
  const auto sparse = forward(pruned.sparse_net, held_out.x0);
  return frob_dist_sq(dense.back(), sparse.back());
}

SearchReport grid_search_beta(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity, double step,
                              const SearchSettings& settings) {
  const auto start = Clock::now();
  const auto betas = grid_candidates(mean_sparsity, net.depth(), step);
  std::vector<SparsityProfile> profiles;
  profiles.reserve(betas.size());
  for (double b : betas) profiles.push_back(allocate_arithmetic(mean_sparsity, net.depth(), b));

  std::vector<double> objective(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) { objective[i] = evaluate_profile(net, calib, profiles[i], settings); });

  SearchReport report;
  report.objective_kind = settings.objective;
  std::size_t best = 0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    report.candidates.push_back({betas[i], objective[i]});
    if (objective[i] < objective[best]) best = i;
  }
  report.best_beta = betas[best];
  report.best_profile = profiles[best];
  report.best_objective = objective[best];
  report.wall_time = Clock::now() - start;
  return report;
}

std::vector<StepAblationRow> step_ablation(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity,
                                           const std::vector<double>& steps, const SearchSettings& settings) {
  std::vector<StepAblationRow> rows;
  for (double step : steps) {
    if (!(step > 0.0)) throw DomainError("step_ablation: steps must be positive");
  }
  for (double step : steps) {
    const auto report = grid_search_beta(net, calib, mean_sparsity, step, settings);
    rows.push_back({step, report.candidates.size(), *report.best_beta, report.best_objective, report.wall_time});
  }
  return rows;
}

std::vector<double> repair_mean(const std::vector<double>& rates, double target_mean) {
  if (rates.empty()) throw DomainError("repair_mean: no rates");
  if (!(target_mean >= 0.0 && target_mean <= 1.0)) {
    throw DomainError("repair_mean: target mean " + std::to_string(target_mean) + " is infeasible");
  }
  // clipped_mean is continuous and non-decreasing in the shift.
  double lo = -1.0 - *std::max_element(rates.begin(), rates.end());
  double hi = 1.0 - *std::min_element(rates.begin(), rates.end());
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (clipped_mean(rates, mid) < target_mean ? lo : hi) = mid;
  }
  std::vector<double> out(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) out[i] = std::clamp(rates[i] + hi, 0.0, 1.0);

  // Spread the rounding residue over the unclipped entries.
  const double residue = (target_mean - mean_of(out)) * static_cast<double>(out.size());
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] > 0.0 && out[i] < 1.0) interior.push_back(i);
  }
  if (!interior.empty()) {
    const double each = residue / static_cast<double>(interior.size());
    for (std::size_t i : interior) out[i] = std::clamp(out[i] + each, 0.0, 1.0);
  }
  if (std::abs(mean_of(out) - target_mean) > kProfileTolerance) {
    throw DomainError("repair_mean: could not reach the target mean");
  }
  return out;
}

SearchReport random_search_profiles(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity,
                                    std::size_t iterations, std::uint64_t seed, const SearchSettings& settings) {
  if (iterations == 0) throw DomainError("random search needs at least one iteration");
  if (!(mean_sparsity > 0.0 && mean_sparsity < 1.0)) throw DomainError("average sparsity must lie in (0,1)");
  const auto start = Clock::now();

  CounterRng rng(seed);
  std::vector<SparsityProfile> profiles;
  profiles.reserve(iterations);
  std::vector<double> raw(net.depth());
  for (std::size_t it = 0; it < iterations; ++it) {
    for (double& r : raw) r = rng.uniform01();
    profiles.emplace_back(repair_mean(raw, mean_sparsity), mean_sparsity, ProfileOrigin::RandomSearch);
  }

  std::vector<double> objective(iterations);
  parallel_for(iterations, [&](std::size_t i) { objective[i] = evaluate_profile(net, calib, profiles[i], settings); });

  SearchReport report;
  report.objective_kind = settings.objective;
  std::size_t best = 0;
  for (std::size_t i = 0; i < iterations; ++i) {
    report.candidates.push_back({std::nullopt, objective[i]});
    if (objective[i] < objective[best]) best = i;
  }
  report.best_profile = profiles[best];
  report.best_objective = objective[best];
  report.wall_time = Clock::now() - start;
  return report;
}

std::string search_to_csv(const SearchReport& report, const std::string& metadata) {
  const bool grid = !report.candidates.empty() && report.candidates.front().beta.has_value();
  CsvWriter csv({grid ? "beta" : "iteration", "objective"});
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& c = report.candidates[i];
    csv.row({c.beta ? format_double(*c.beta) : std::to_string(i + 1), format_double(c.objective)});
  }
  return csv.finish(metadata);
}

std::string search_to_json(const SearchReport& report) {
  nlohmann::ordered_json j;
  j["objective_kind"] = std::string(to_string(report.objective_kind));
  j["best_objective"] = report.best_objective;
  j["best_beta"] = report.best_beta ? nlohmann::ordered_json(*report.best_beta) : nlohmann::ordered_json(nullptr);
  j["best_profile"] = nlohmann::ordered_json::parse(profile_to_json(report.best_profile));
  auto& cands = j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : report.candidates) {
    nlohmann::ordered_json e;
    if (c.beta) e["beta"] = *c.beta;
    e["objective"] = c.objective;
    cands.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string ablation_to_csv(const std::vector<StepAblationRow>& rows, const std::string& metadata) {
  CsvWriter csv({"step", "evaluations", "best_beta", "best_objective"});
  for (const auto& r : rows) {
    csv.row({format_double(r.step), std::to_string(r.evaluations), format_double(r.best_beta),
             format_double(r.best_objective)});
  }
  return csv.finish(metadata);
}

}  // namespace sparsalloc
