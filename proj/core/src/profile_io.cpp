#include <json.hpp>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/errors.hpp"

namespace sparsalloc {

std::string profile_to_json(const SparsityProfile& profile) {
  nlohmann::ordered_json j;
  j["origin"] = std::string(to_string(profile.origin()));
  j["S"] = profile.mean();
  if (profile.beta()) j["beta"] = *profile.beta();
  j["rates"] = profile.rates();
  return j.dump(2) + "\n";
}

SparsityProfile profile_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const auto origin = parse_profile_origin(j.at("origin").get<std::string>());
    auto rates = j.at("rates").get<std::vector<double>>();
    std::optional<double> beta;
    if (j.contains("beta") && !j["beta"].is_null()) beta = j["beta"].get<double>();
    const double mean = j.at("S").get<double>();
    return SparsityProfile(std::move(rates), mean, origin, beta);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("profile JSON: ") + e.what());
  }
}

}  // namespace sparsalloc
