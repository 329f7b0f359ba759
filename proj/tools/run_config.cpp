#include "run_config.hpp"

#include <set>
#include <type_traits>

#include <json.hpp>

#include "config_fields.hpp"
#include "sparsalloc/errors.hpp"

namespace sparsalloc::cli {

namespace {

using json = nlohmann::ordered_json;

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

template <class Config>
std::string render_impl(const Config& config) {
  json j = json::object();
  Config copy = config;
  visit(copy, [&](const char* key, auto& member, const char*) {
    using M = std::decay_t<decltype(member)>;
    if constexpr (is_optional<M>::value) {
      j[key] = member ? json(*member) : json(nullptr);
    } else {
      j[key] = member;
    }
  });
  return j.dump(2) + "\n";
}

template <class Config>
Config parse_impl(const std::string& text) {
  Config config;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config: top level must be an object");
  std::set<std::string> known;
  visit(config, [&](const char* key, auto&, const char*) { known.insert(key); });
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw DomainError("config: unknown key '" + item.key() + "'");
  }
  visit(config, [&](const char* key, auto& member, const char*) {
    if (!j.contains(key)) return;
    using M = std::decay_t<decltype(member)>;
    try {
      if constexpr (is_optional<M>::value) {
        if (j[key].is_null()) member.reset();
        else member = j[key].template get<typename M::value_type>();
      } else {
        member = j[key].template get<M>();
      }
    } catch (const json::exception& e) {
      throw DomainError(std::string("config: key '") + key + "': " + e.what());
    }
  });
  return config;
}

}  // namespace

std::string render(const GenNetConfig& c) { return render_impl(c); }
std::string render(const GenCalibConfig& c) { return render_impl(c); }
std::string render(const SearchConfig& c) { return render_impl(c); }
std::string render(const PruneConfig& c) { return render_impl(c); }
std::string render(const ValidateConfig& c) { return render_impl(c); }
std::string render(const AblationConfig& c) { return render_impl(c); }
std::string render(const RandomSearchConfig& c) { return render_impl(c); }
std::string render(const ReportConfig& c) { return render_impl(c); }

template <class Config>
Config parse_config(const std::string& text) {
  return parse_impl<Config>(text);
}

template GenNetConfig parse_config<GenNetConfig>(const std::string&);
template GenCalibConfig parse_config<GenCalibConfig>(const std::string&);
template SearchConfig parse_config<SearchConfig>(const std::string&);
template PruneConfig parse_config<PruneConfig>(const std::string&);
template ValidateConfig parse_config<ValidateConfig>(const std::string&);
template AblationConfig parse_config<AblationConfig>(const std::string&);
template RandomSearchConfig parse_config<RandomSearchConfig>(const std::string&);
template ReportConfig parse_config<ReportConfig>(const std::string&);

}  // namespace sparsalloc::cli
