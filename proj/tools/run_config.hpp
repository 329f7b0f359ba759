#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sparsalloc::cli {

// Where a command gets its network and calibration data: files when paths
// are set, otherwise generated from the shape fields and the seed.
struct NetSource {
  std::string net;    // NetFile path
  std::string calib;  // calibration container path
  std::size_t layers = 32;
  std::size_t dim = 64;
  std::vector<std::size_t> dims;  // overrides layers/dim when non-empty
  std::string activation = "linear";
  std::size_t samples = 128;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const NetSource&, const NetSource&) = default;
};

struct GenNetConfig {
  std::size_t layers = 32;
  std::size_t dim = 64;
  std::vector<std::size_t> dims;
  std::string activation = "linear";
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string label;

  friend bool operator==(const GenNetConfig&, const GenNetConfig&) = default;
};

struct GenCalibConfig {
  std::size_t features = 64;
  std::size_t samples = 128;
  std::optional<std::uint64_t> seed;
  std::string output;

  friend bool operator==(const GenCalibConfig&, const GenCalibConfig&) = default;
};

struct PruneSettingsConfig {
  std::string method = "wanda";
  std::string objective = "recon";
  bool per_row = false;
  bool dense_scoring = false;

  friend bool operator==(const PruneSettingsConfig&, const PruneSettingsConfig&) = default;
};

struct SearchConfig {
  NetSource source;
  PruneSettingsConfig prune;
  double sparsity = 0.7;
  double step = 0.002;
  std::string out_csv;
  std::string out_profile;
  std::string out_json;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct PruneConfig {
  NetSource source;
  PruneSettingsConfig prune;
  std::string profile;
  std::string out_net;
  std::string out_masks;
  std::string out_trace;

  friend bool operator==(const PruneConfig&, const PruneConfig&) = default;
};

struct ValidateConfig {
  std::string theorem = "all";  // all | lemma1 | 1 | 2 | 3 | 4
  std::size_t layers = 0;       // theorem 4 table size; 0 skips the table
  bool nested = false;          // theorem 1 with magnitude (nested) masks only
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  friend bool operator==(const ValidateConfig&, const ValidateConfig&) = default;
};

struct AblationConfig {
  NetSource source;
  PruneSettingsConfig prune;
  double sparsity = 0.7;
  std::vector<double> steps{0.008, 0.004, 0.002, 0.001, 0.0005};
  std::string out_csv;

  friend bool operator==(const AblationConfig&, const AblationConfig&) = default;
};

struct RandomSearchConfig {
  NetSource source;
  PruneSettingsConfig prune;
  double sparsity = 0.7;
  std::size_t iters = 1000;
  double compare_step = 0.0;  // > 0 also runs the ATP grid at this step
  std::string out_csv;
  std::string out_json;
  std::string out_profile;

  friend bool operator==(const RandomSearchConfig&, const RandomSearchConfig&) = default;
};

struct ReportConfig {
  std::size_t nets = 20;
  std::size_t layers = 32;
  std::size_t dim = 64;
  std::size_t samples = 128;
  std::string activation = "linear";
  std::optional<std::uint64_t> seed;
  PruneSettingsConfig prune;
  double sparsity = 0.7;
  double step = 0.002;
  std::size_t random_iters = 0;  // 0 leaves random search out
  std::string from;              // re-render a stored comparison CSV
  std::string out_csv;

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

// JSON rendering of each config; parse(render(c)) == c. Missing keys keep
// their defaults, unknown keys are rejected.
std::string render(const GenNetConfig& c);
std::string render(const GenCalibConfig& c);
std::string render(const SearchConfig& c);
std::string render(const PruneConfig& c);
std::string render(const ValidateConfig& c);
std::string render(const AblationConfig& c);
std::string render(const RandomSearchConfig& c);
std::string render(const ReportConfig& c);

template <class Config>
Config parse_config(const std::string& json);

}  // namespace sparsalloc::cli
