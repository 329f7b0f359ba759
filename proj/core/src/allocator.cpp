#include "sparsalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsalloc/errors.hpp"
#include "sparsalloc/pruner.hpp"

namespace sparsalloc {

namespace {

constexpr double kBoundSlack = 1e-12;

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double snap(double v) { return std::round(v * 1e12) / 1e12; }

void check_mean_sparsity(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("average sparsity must lie in (0,1), got " + std::to_string(s));
}

// Per-layer pruned fractions when all scores are ranked against a single
// network-wide threshold that prunes round(S * N) entries. Entries tied at
// the threshold are shared in proportion to each layer's tie count.
std::vector<double> global_threshold_rates(const std::vector<DenseMatrix>& scores, double mean_sparsity) {
  std::vector<double> all;
  for (const auto& s : scores) all.insert(all.end(), s.values().begin(), s.values().end());
  const auto k = static_cast<std::size_t>(std::llround(mean_sparsity * static_cast<double>(all.size())));
  std::vector<double> rates(scores.size(), 0.0);
  if (k == 0) return rates;
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k - 1), all.end());
  const double threshold = all[k - 1];

  std::vector<std::size_t> below(scores.size(), 0), ties(scores.size(), 0);
  std::size_t below_total = 0, tie_total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (double v : scores[i].values()) {
      if (v < threshold) ++below[i];
      else if (v == threshold) ++ties[i];
    }
    below_total += below[i];
    tie_total += ties[i];
  }
  const double need = static_cast<double>(k - below_total);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double pruned = static_cast<double>(below[i]) +
                          (tie_total == 0 ? 0.0 : need * static_cast<double>(ties[i]) / static_cast<double>(tie_total));
    rates[i] = std::clamp(pruned / static_cast<double>(scores[i].size()), 0.0, 1.0);
  }
  return rates;
}

}  // namespace

std::string_view to_string(ProfileOrigin origin) {
  switch (origin) {
    case ProfileOrigin::Uniform: return "uniform";
    case ProfileOrigin::Arithmetic: return "arithmetic";
    case ProfileOrigin::ERK: return "erk";
    case ProfileOrigin::LAMP: return "lamp";
    case ProfileOrigin::Global: return "global";
    case ProfileOrigin::RandomSearch: return "random_search";
    case ProfileOrigin::Explicit: return "explicit";
  }
  return "explicit";
}

ProfileOrigin parse_profile_origin(std::string_view s) {
  for (auto o : {ProfileOrigin::Uniform, ProfileOrigin::Arithmetic, ProfileOrigin::ERK, ProfileOrigin::LAMP,
                 ProfileOrigin::Global, ProfileOrigin::RandomSearch, ProfileOrigin::Explicit}) {
    if (to_string(o) == s) return o;
  }
  throw DomainError("unknown profile origin '" + std::string(s) + "'");
}

SparsityProfile::SparsityProfile(std::vector<double> rates, double mean, ProfileOrigin origin,
                                 std::optional<double> beta)
    : rates_(std::move(rates)), mean_(mean), origin_(origin), beta_(beta) {
  if (rates_.empty()) throw DomainError("SparsityProfile: no rates");
  for (double s : rates_) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("SparsityProfile: rate " + std::to_string(s) + " outside [0,1]");
  }
  if (std::abs(mean_of(rates_) - mean_) > kProfileTolerance) {
    throw DomainError("SparsityProfile: mean of rates differs from S=" + std::to_string(mean_));
  }
  if (beta_.has_value() != (origin_ == ProfileOrigin::Arithmetic)) {
    throw DomainError("SparsityProfile: beta is present iff the origin is arithmetic");
  }
  if (beta_) {
    for (std::size_t i = 0; i + 1 < rates_.size(); ++i) {
      if (std::abs(rates_[i + 1] - rates_[i] - *beta_) > kProfileTolerance) {
        throw DomainError("SparsityProfile: rates are not an arithmetic progression with the stated beta");
      }
    }
  }
}

SparsityProfile SparsityProfile::from_rates(std::vector<double> rates, ProfileOrigin origin) {
  const double m = mean_of(rates);
  return SparsityProfile(std::move(rates), m, origin);
}

double beta_upper_bound(double mean_sparsity, std::size_t layers) {
  check_mean_sparsity(mean_sparsity);
  if (layers < 2) throw DomainError("beta_upper_bound: need at least 2 layers");
  const double span = static_cast<double>(layers - 1);
  return std::min(2.0 * mean_sparsity / span, 2.0 * (1.0 - mean_sparsity) / span);
}

SparsityProfile allocate_arithmetic(double mean_sparsity, std::size_t layers, double beta) {
  if (layers == 0) throw DomainError("allocate_arithmetic: no layers");
  if (layers == 1 || beta == 0.0) {
    if (beta != 0.0) throw DomainError("allocate_arithmetic: a single layer admits only beta = 0");
    if (!(mean_sparsity >= 0.0 && mean_sparsity <= 1.0)) throw DomainError("allocate_arithmetic: S outside [0,1]");
    return SparsityProfile(std::vector<double>(layers, mean_sparsity), mean_sparsity, ProfileOrigin::Arithmetic, 0.0);
  }
  const double bound = beta_upper_bound(mean_sparsity, layers);
  if (!(beta >= 0.0) || beta > bound + kBoundSlack) {
    throw DomainError("beta " + std::to_string(beta) + " outside [0, " + std::to_string(bound) + "]");
  }
  const double start = mean_sparsity - beta * static_cast<double>(layers - 1) / 2.0;
  std::vector<double> rates(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    double s = start + beta * static_cast<double>(i);
    if (s < 0.0 && s > -kBoundSlack) s = 0.0;
    if (s > 1.0 && s < 1.0 + kBoundSlack) s = 1.0;
    rates[i] = s;
  }
  return SparsityProfile(std::move(rates), mean_sparsity, ProfileOrigin::Arithmetic, beta);
}

std::vector<double> grid_candidates(double mean_sparsity, std::size_t layers, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  const double bound = beta_upper_bound(mean_sparsity, layers);
  std::vector<double> out{0.0};
  for (std::size_t k = 1;; ++k) {
    const double beta = snap(static_cast<double>(k) * step);
    if (beta > bound + kBoundSlack) break;
    out.push_back(std::min(beta, bound));
  }
  return out;
}

SparsityProfile allocate_uniform(double mean_sparsity, std::size_t layers) {
  if (layers == 0) throw DomainError("allocate_uniform: no layers");
  return SparsityProfile(std::vector<double>(layers, mean_sparsity), mean_sparsity, ProfileOrigin::Uniform);
}

std::vector<double> water_fill(const std::vector<double>& weights, double target_mean) {
  const std::size_t n = weights.size();
  if (n == 0) throw DomainError("water_fill: no weights");
  if (!(target_mean >= 0.0 && target_mean <= 1.0)) throw DomainError("water_fill: target outside [0,1]");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("water_fill: weights must be finite and non-negative");
  }
  const double target_sum = target_mean * static_cast<double>(n);
  std::vector<bool> saturated(n, false);
  std::vector<double> out(n, 0.0);
  constexpr int kMaxRounds = 100;
  for (int round = 0; round < kMaxRounds; ++round) {
    double fixed = 0.0, free_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (saturated[i]) fixed += 1.0;
      else free_weight += weights[i];
    }
    const double remaining = target_sum - fixed;
    if (remaining < -1e-12) throw DomainError("water_fill: target mean infeasible");
    if (free_weight == 0.0) {
      if (std::abs(remaining) > 1e-9) throw DomainError("water_fill: target mean infeasible after clipping");
      for (std::size_t i = 0; i < n; ++i) out[i] = saturated[i] ? 1.0 : 0.0;
      return out;
    }
    const double lambda = std::max(remaining, 0.0) / free_weight;
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (saturated[i]) {
        out[i] = 1.0;
        continue;
      }
      out[i] = lambda * weights[i];
      if (out[i] > 1.0) {
        saturated[i] = true;
        clipped = true;
      }
    }
    if (!clipped) return out;
  }
  throw DomainError("water_fill: did not converge");
}

SparsityProfile allocate_erk(const LayerNet& net, double mean_sparsity) {
  check_mean_sparsity(mean_sparsity);
  std::vector<double> raw;
  for (const auto& w : net.layers()) {
    const auto c_in = static_cast<double>(w.cols());
    const auto c_out = static_cast<double>(w.rows());
    raw.push_back((c_in + c_out) / (c_in * c_out));
  }
  const auto density = water_fill(raw, 1.0 - mean_sparsity);
  std::vector<double> rates(density.size());
  for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = std::clamp(1.0 - density[i], 0.0, 1.0);
  return SparsityProfile(std::move(rates), mean_sparsity, ProfileOrigin::ERK);
}

SparsityProfile allocate_lamp(const LayerNet& net, double mean_sparsity) {
  check_mean_sparsity(mean_sparsity);
  std::vector<DenseMatrix> scores;
  for (const auto& w : net.layers()) {
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto wv = w.values();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(wv[a]) < std::abs(wv[b]); });
    DenseMatrix s(w.rows(), w.cols());
    auto sv = s.values();
    double suffix = 0.0;
    for (std::size_t r = order.size(); r-- > 0;) {
      const double sq = wv[order[r]] * wv[order[r]];
      suffix += sq;
      sv[order[r]] = suffix > 0.0 ? sq / suffix : 0.0;
    }
    scores.push_back(std::move(s));
  }
  return SparsityProfile(water_fill(global_threshold_rates(scores, mean_sparsity), mean_sparsity), mean_sparsity,
                         ProfileOrigin::LAMP);
}

SparsityProfile allocate_global(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity) {
  check_mean_sparsity(mean_sparsity);
  const auto xs = forward(net, calib.x0);
  std::vector<DenseMatrix> scores;
  scores.reserve(net.depth());
  for (std::size_t i = 0; i < net.depth(); ++i) scores.push_back(score_layer(net.layer(i), xs[i], PruneMethod::wanda()));
  return SparsityProfile(water_fill(global_threshold_rates(scores, mean_sparsity), mean_sparsity), mean_sparsity,
                         ProfileOrigin::Global);
}

void for_each_permutation(std::vector<double> rates, const std::function<void(const std::vector<double>&)>& visit) {
  if (rates.size() > kMaxExhaustiveLayers) {
    throw SizeError("exhaustive permutation needs at most " + std::to_string(kMaxExhaustiveLayers) + " layers");
  }
  std::sort(rates.begin(), rates.end());
  do {
    visit(rates);
  } while (std::next_permutation(rates.begin(), rates.end()));
}

std::vector<SparsityProfile> permutations_of(const SparsityProfile& profile) {
  std::vector<SparsityProfile> out;
  for_each_permutation(profile.rates(), [&](const std::vector<double>& r) {
    out.emplace_back(r, profile.mean(), ProfileOrigin::Explicit);
  });
  return out;
}

NmAllocation nm_from_profile(const SparsityProfile& profile, std::size_t group) {
  if (group == 0) throw DomainError("N:M group size must be >= 1");
  const std::size_t layers = profile.depth();
  const double m = static_cast<double>(group);
  const double total_exact = static_cast<double>(layers) * m * (1.0 - profile.mean());
  const double total_rounded = std::round(total_exact);
  if (std::abs(total_exact - total_rounded) > 1e-9) {
    throw DomainError("mean sparsity does not correspond to a whole number of kept entries per group");
  }
  const auto total = static_cast<std::size_t>(total_rounded);

  std::vector<double> target(layers);
  std::vector<std::size_t> keep(layers);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < layers; ++i) {
    target[i] = m * (1.0 - profile.rate(i));
    keep[i] = std::min(group, static_cast<std::size_t>(std::floor(target[i] + 1e-12)));
    assigned += keep[i];
  }
  std::vector<std::size_t> order(layers);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (assigned < total) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return target[a] - static_cast<double>(keep[a]) > target[b] - static_cast<double>(keep[b]);
    });
    for (std::size_t j = 0; assigned < total; j = (j + 1) % layers) {
      if (keep[order[j]] < group) {
        ++keep[order[j]];
        ++assigned;
      }
    }
  } else if (assigned > total) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return target[a] - static_cast<double>(keep[a]) < target[b] - static_cast<double>(keep[b]);
    });
    for (std::size_t j = 0; assigned > total; j = (j + 1) % layers) {
      if (keep[order[j]] > 0) {
        --keep[order[j]];
        --assigned;
      }
    }
  }

  std::vector<double> rates(layers);
  for (std::size_t i = 0; i < layers; ++i) rates[i] = 1.0 - static_cast<double>(keep[i]) / m;
  const double mean = 1.0 - static_cast<double>(total) / (static_cast<double>(layers) * m);
  return {group, std::move(keep), SparsityProfile(std::move(rates), mean, ProfileOrigin::Explicit)};
}

NmAllocation allocate_nm(double mean_sparsity, std::size_t layers, std::size_t group, double beta) {
  return nm_from_profile(allocate_arithmetic(mean_sparsity, layers, beta), group);
}

}  // namespace sparsalloc
