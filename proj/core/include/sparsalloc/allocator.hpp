#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsalloc/netmodel.hpp"

namespace sparsalloc {

enum class ProfileOrigin { Uniform, Arithmetic, ERK, LAMP, Global, RandomSearch, Explicit };

std::string_view to_string(ProfileOrigin origin);
ProfileOrigin parse_profile_origin(std::string_view s);

// Tolerance on |mean(rates) - S| and on the arithmetic step.
inline constexpr double kProfileTolerance = 1e-12;

// Per-layer sparsity rates s_1..s_L with their target mean S.
class SparsityProfile {
 public:
  SparsityProfile() = default;
  // Validates every invariant; DomainError on violation.
  SparsityProfile(std::vector<double> rates, double mean, ProfileOrigin origin,
                  std::optional<double> beta = std::nullopt);

  // Explicit profile whose mean is taken from the rates.
  static SparsityProfile from_rates(std::vector<double> rates, ProfileOrigin origin = ProfileOrigin::Explicit);

  const std::vector<double>& rates() const { return rates_; }
  double rate(std::size_t i) const { return rates_.at(i); }
  std::size_t depth() const { return rates_.size(); }
  double mean() const { return mean_; }
  const std::optional<double>& beta() const { return beta_; }
  ProfileOrigin origin() const { return origin_; }

  friend bool operator==(const SparsityProfile&, const SparsityProfile&) = default;

 private:
  std::vector<double> rates_;
  double mean_ = 0.0;
  ProfileOrigin origin_ = ProfileOrigin::Explicit;
  std::optional<double> beta_;
};

// min(2S/(L-1), 2(1-S)/(L-1)); DomainError unless 0 < S < 1 and L >= 2.
double beta_upper_bound(double mean_sparsity, std::size_t layers);

// s_i = S - beta(L-1)/2 + beta(i-1). beta = 0 gives the uniform profile.
// beta may exceed the bound by at most 1e-12; rates within 1e-12 of [0,1]
// are clamped onto it.
SparsityProfile allocate_arithmetic(double mean_sparsity, std::size_t layers, double beta);

// {0} followed by k*step for k = 1, 2, ... while k*step <= bound + 1e-12.
// Candidates are snapped to a 1e-12 lattice so nested step sizes produce
// bit-identical shared values.
std::vector<double> grid_candidates(double mean_sparsity, std::size_t layers, double step);

SparsityProfile allocate_uniform(double mean_sparsity, std::size_t layers);

// Finds lambda with mean(clip(lambda * weights[i], 0, 1)) = target_mean by
// iterated clipping (at most 100 rounds). DomainError when infeasible.
std::vector<double> water_fill(const std::vector<double>& weights, double target_mean);

// ERK: layer density proportional to (c_in + c_out) / (c_in * c_out).
SparsityProfile allocate_erk(const LayerNet& net, double mean_sparsity);
// LAMP scores (w_u^2 / sum of w_v^2 over v not smaller than u within the
// layer) ranked network-wide at one threshold, then water-filled to mean S.
SparsityProfile allocate_lamp(const LayerNet& net, double mean_sparsity);
// Wanda-style scores on the dense activations of calib ranked network-wide
// at one threshold, then water-filled to mean S.
SparsityProfile allocate_global(const LayerNet& net, const CalibrationSet& calib, double mean_sparsity);

// Largest exhaustive enumeration supported by permutations_of.
inline constexpr std::size_t kMaxExhaustiveLayers = 8;

// Every distinct ordering of the profile's rates (lexicographic over the
// sorted multiset). SizeError when depth > kMaxExhaustiveLayers.
std::vector<SparsityProfile> permutations_of(const SparsityProfile& profile);
// Same enumeration without materialising profiles.
void for_each_permutation(std::vector<double> rates, const std::function<void(const std::vector<double>&)>& visit);

struct NmAllocation {
  std::size_t group = 0;          // m
  std::vector<std::size_t> keep;  // N_i per layer
  SparsityProfile profile;        // s_i = 1 - N_i / m
};

// Mixed N:M allocation from an arithmetic profile: N_i are the largest-
// remainder rounding of m(1 - s_i) with sum(N_i) = round(L m (1 - S)), ties
// toward earlier layers. DomainError when L m (1 - S) is not an integer.
NmAllocation allocate_nm(double mean_sparsity, std::size_t layers, std::size_t group, double beta);
NmAllocation nm_from_profile(const SparsityProfile& profile, std::size_t group);

// JSON document {"origin", "S", "beta"?, "rates"}.
std::string profile_to_json(const SparsityProfile& profile);
SparsityProfile profile_from_json(std::string_view json);

}  // namespace sparsalloc
