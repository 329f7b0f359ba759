#pragma once

#include <ostream>
#include <stdexcept>

#include "run_config.hpp"

namespace sparsalloc::cli {

// Bad or missing flags; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitValidation = 4;

// Each command returns its exit code; errors propagate as exceptions.
int cmd_gen_net(const GenNetConfig& config, std::ostream& out);
int cmd_gen_calib(const GenCalibConfig& config, std::ostream& out);
int cmd_search(const SearchConfig& config, std::ostream& out);
int cmd_prune(const PruneConfig& config, std::ostream& out);
int cmd_validate(const ValidateConfig& config, std::ostream& out);
int cmd_step_ablation(const AblationConfig& config, std::ostream& out);
int cmd_random_search(const RandomSearchConfig& config, std::ostream& out);
int cmd_report(const ReportConfig& config, std::ostream& out);

}  // namespace sparsalloc::cli
