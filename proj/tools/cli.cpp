#include "cli.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <type_traits>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config_fields.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/netfile.hpp"
#include "sparsalloc/version.hpp"

namespace sparsalloc::cli {

namespace {

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};
template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "output") return "-o,--output";
  return "--" + key;
}

template <class M>
CLI::Option* add_field(CLI::App* app, const std::string& key, M& member, const std::string& help) {
  auto name = flag_name(key);
  if constexpr (std::is_same_v<M, bool>) {
    return app->add_flag(name, member, help);
  } else if constexpr (is_optional<M>::value) {
    using T = typename M::value_type;
    return app->add_option_function<T>(name, [&member](const T& v) { member = v; }, help);
  } else if constexpr (is_vector<M>::value) {
    return app->add_option(name, member, help)->delimiter(',');
  } else {
    return app->add_option(name, member, help);
  }
}

struct Command {
  virtual ~Command() = default;
  virtual int run(std::ostream& out) = 0;
  CLI::App* app = nullptr;
};

// Flags are parsed into a shadow config; a field given on the command line
// replaces the value from --config (or the default).
template <class Config>
struct Bound : Command {
  using Runner = int (*)(const Config&, std::ostream&);

  Bound(CLI::App* parent, const std::string& name, const std::string& description, Runner runner)
      : runner(runner) {
    app = parent->add_subcommand(name, description);
    app->add_option("--config", config_path, "JSON config file; explicit flags override its values");
    visit(flags, [&](const char* key, auto& member, const char* help) {
      options.push_back(add_field(app, key, member, help));
    });
  }

  Config resolve() const {
    Config config;
    if (!config_path.empty()) {
      auto bytes = read_file(config_path);
      try {
        config = parse_config<Config>(std::string(bytes.begin(), bytes.end()));
      } catch (const DomainError& e) {
        throw UsageError(config_path + ": " + e.what());
      }
    }
    std::vector<const void*> shadow;
    Config copy = flags;
    visit(copy, [&](const char*, auto& member, const char*) { shadow.push_back(&member); });
    std::size_t k = 0;
    visit(config, [&](const char*, auto& member, const char*) {
      using M = std::decay_t<decltype(member)>;
      if (options[k]->count() > 0) member = *static_cast<const M*>(shadow[k]);
      ++k;
    });
    return config;
  }

  int run(std::ostream& out) override { return runner(resolve(), out); }

  Config flags;
  std::string config_path;
  std::vector<CLI::Option*> options;
  Runner runner;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer-wise sparsity allocation for layered networks", "sparsalloc"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<Bound<GenNetConfig>>(&app, "gen-net", "Generate a seeded layered network",
                                                           &cmd_gen_net));
  commands.push_back(std::make_unique<Bound<GenCalibConfig>>(&app, "gen-calib", "Generate seeded calibration data",
                                                             &cmd_gen_calib));
  commands.push_back(std::make_unique<Bound<SearchConfig>>(&app, "search", "Grid-search beta for the arithmetic profile",
                                                           &cmd_search));
  commands.push_back(std::make_unique<Bound<PruneConfig>>(&app, "prune", "Prune a network with a given profile",
                                                          &cmd_prune));
  commands.push_back(std::make_unique<Bound<ValidateConfig>>(&app, "validate", "Run the theorem validation sweeps",
                                                             &cmd_validate));
  commands.push_back(std::make_unique<Bound<AblationConfig>>(&app, "step-ablation", "Compare grid step sizes",
                                                             &cmd_step_ablation));
  commands.push_back(std::make_unique<Bound<RandomSearchConfig>>(
      &app, "random-search", "Seeded random search over profiles", &cmd_random_search));
  commands.push_back(std::make_unique<Bound<ReportConfig>>(
      &app, "report", "Compare allocation strategies over seeded networks", &cmd_report));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto& command : commands) {
      if (command->app->parsed()) return command->run(out);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace sparsalloc::cli
