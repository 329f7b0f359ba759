#include "commands.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>

#include "sparsalloc/abstract_model.hpp"
#include "sparsalloc/allocator.hpp"
#include "sparsalloc/csv.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/netfile.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/pruner.hpp"
#include "sparsalloc/reconerr.hpp"
#include "sparsalloc/rng.hpp"
#include "sparsalloc/search.hpp"
#include "sparsalloc/validation.hpp"

namespace sparsalloc::cli {

namespace {

namespace fs = std::filesystem;

// Streams reserved for values derived from a command's --seed.
constexpr std::uint64_t kCalibStream = 1;
constexpr std::uint64_t kRandomSearchStream = 2;

std::string strf(const char* format, ...) __attribute__((format(printf, 1, 2)));

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* what) {
  if (!seed) throw UsageError(std::string("--seed is required ") + what);
  return *seed;
}

std::vector<std::size_t> resolve_dims(std::size_t layers, std::size_t dim, const std::vector<std::size_t>& dims) {
  if (layers == 0) throw DomainError("--layers must be at least 1");
  if (dims.empty()) {
    if (dim == 0) throw DomainError("--dim must be positive");
    return std::vector<std::size_t>(layers + 1, dim);
  }
  if (dims.size() != layers + 1) {
    throw ShapeError(strf("--dims needs layers + 1 = %zu values, got %zu", layers + 1, dims.size()));
  }
  return dims;
}

struct Workload {
  LayerNet net;
  CalibrationSet calib;
};

Workload load_workload(const NetSource& source) {
  Workload w;
  if (!source.net.empty()) {
    w.net = load_net(source.net);
  } else {
    auto seed = require_seed(source.seed, "to generate a network (or pass --net)");
    w.net = generate_net(source.layers, resolve_dims(source.layers, source.dim, source.dims),
                         parse_activation(source.activation), seed);
  }
  if (!source.calib.empty()) {
    w.calib = load_calibration(source.calib);
    if (w.calib.features() != w.net.input_dim()) {
      throw ShapeError(strf("calibration has %zu features, network expects %zu", w.calib.features(),
                            w.net.input_dim()));
    }
  } else {
    auto seed = require_seed(source.seed, "to generate calibration data (or pass --calib)");
    if (source.samples == 0) throw DomainError("--samples must be positive");
    w.calib = generate_calibration(w.net.input_dim(), source.samples, derive_seed(seed, kCalibStream));
  }
  return w;
}

SearchSettings make_settings(const PruneSettingsConfig& p) {
  SearchSettings s;
  s.method = parse_prune_method(p.method);
  s.objective = parse_objective(p.objective);
  s.prune.per_row = p.per_row;
  s.prune.dense_input_scoring = p.dense_scoring;
  return s;
}

std::string settings_note(const PruneSettingsConfig& p) {
  return "method=" + p.method + ", objective=" + p.objective;
}

void write_if(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) return;
  write_file_atomic(path, text);
  out << "wrote " << path << "\n";
}

// Short form for metadata lines; CSV cells keep full precision.
std::string brief(double v) { return strf("%.10g", v); }

std::string beta_text(const std::optional<double>& beta) { return beta ? format_double(*beta) : "none"; }

// --- report -----------------------------------------------------------------

const std::vector<std::string> kBaselines{"uniform", "erk", "lamp", "global", "random"};

void render_comparison(const CsvTable& table, std::ostream& out) {
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - table.header.begin());
  };
  auto atp = column("atp");
  if (!atp) throw CorruptFileError("comparison CSV has no atp column");
  out << strf("%zu nets\n", table.rows.size());
  out << strf("%-8s %6s %6s %6s %14s\n", "vs", "wins", "ties", "losses", "mean atp/base");
  for (const auto& name : kBaselines) {
    auto col = column(name);
    if (!col) continue;
    std::size_t wins = 0, ties = 0, losses = 0;
    double ratio_sum = 0.0;
    for (const auto& row : table.rows) {
      double a = std::stod(row.at(*atp));
      double b = std::stod(row.at(*col));
      if (a < b) ++wins;
      else if (a == b) ++ties;
      else ++losses;
      ratio_sum += b > 0.0 ? a / b : 1.0;
    }
    double mean_ratio = table.rows.empty() ? 1.0 : ratio_sum / static_cast<double>(table.rows.size());
    out << strf("%-8s %6zu %6zu %6zu %14.6f\n", name.c_str(), wins, ties, losses, mean_ratio);
  }
}

// --- validate ---------------------------------------------------------------

struct CheckRow {
  std::string check;
  std::size_t cases = 0;
  std::size_t satisfied = 0;
  double required = 1.0;  // fraction needed to pass; negative for report-only rows
  std::string detail;

  double fraction() const { return cases ? static_cast<double>(satisfied) / static_cast<double>(cases) : 1.0; }
  bool asserted() const { return required >= 0.0; }
  bool passed() const { return !asserted() || fraction() >= required; }
};

std::vector<double> spread_rates(std::size_t layers) {
  std::vector<double> rates(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    rates[i] = layers == 1 ? 0.5 : 0.1 + 0.8 * static_cast<double>(i) / static_cast<double>(layers - 1);
  }
  return rates;
}

}  // namespace

int cmd_gen_net(const GenNetConfig& config, std::ostream& out) {
  auto seed = require_seed(config.seed, "for gen-net");
  if (config.output.empty()) throw UsageError("gen-net needs -o/--output");
  auto net = generate_net(config.layers, resolve_dims(config.layers, config.dim, config.dims),
                          parse_activation(config.activation), seed, config.label);
  auto bytes = encode_net(net);
  write_file_atomic(config.output, bytes.data(), bytes.size());
  out << config.output << " " << content_digest(bytes) << "\n";
  return kExitOk;
}

int cmd_gen_calib(const GenCalibConfig& config, std::ostream& out) {
  auto seed = require_seed(config.seed, "for gen-calib");
  if (config.output.empty()) throw UsageError("gen-calib needs -o/--output");
  if (config.features == 0 || config.samples == 0) throw DomainError("--features and --samples must be positive");
  auto calib = generate_calibration(config.features, config.samples, seed);
  save_calibration(calib, config.output);
  out << config.output << " " << content_digest(read_file(config.output)) << "\n";
  return kExitOk;
}

int cmd_search(const SearchConfig& config, std::ostream& out) {
  auto w = load_workload(config.source);
  auto settings = make_settings(config.prune);
  auto report = grid_search_beta(w.net, w.calib, config.sparsity, config.step, settings);
  auto meta = csv_metadata(config.source.seed, "S=" + brief(config.sparsity) + ", step=" + brief(config.step) + ", " +
                                                   settings_note(config.prune));
  write_if(config.out_csv, search_to_csv(report, meta), out);
  write_if(config.out_profile, profile_to_json(report.best_profile), out);
  write_if(config.out_json, search_to_json(report), out);
  out << "evaluations " << report.candidates.size() << "\n";
  out << "best_beta " << beta_text(report.best_beta) << "\n";
  out << "best_objective " << format_double(report.best_objective) << "\n";
  out << "uniform_objective " << format_double(report.candidates.front().objective) << "\n";
  return kExitOk;
}

int cmd_prune(const PruneConfig& config, std::ostream& out) {
  if (config.profile.empty()) throw UsageError("prune needs --profile");
  auto w = load_workload(config.source);
  auto bytes = read_file(config.profile);
  auto profile = profile_from_json(std::string(bytes.begin(), bytes.end()));
  if (profile.depth() != w.net.depth()) {
    throw ShapeError(strf("profile has %zu rates, network has %zu layers", profile.depth(), w.net.depth()));
  }
  auto settings = make_settings(config.prune);
  auto result = prune_net(w.net, w.calib, profile, settings.method, settings.prune);
  auto trace = trace_errors(w.net, result.sparse_net, w.calib);
  trace.profile = profile;
  trace.method = settings.method;

  if (!config.out_net.empty()) save_net(result.sparse_net, config.out_net);
  if (!config.out_masks.empty()) save_masks(result.masks, config.out_masks);
  write_if(config.out_trace,
           trace_to_csv(trace, result.sparse_net, csv_metadata(config.source.seed, settings_note(config.prune))), out);

  // Measured L_{i+1} / L_i is the desk counterpart of the constant c in the
  // abstract error model; printed, never asserted.
  out << strf("%-6s %10s %10s %14s %10s\n", "layer", "requested", "achieved", "error", "ratio");
  for (std::size_t i = 0; i < w.net.depth(); ++i) {
    std::string ratio = "-";
    if (i > 0 && trace.per_layer[i - 1] > 0.0) ratio = strf("%.4f", trace.per_layer[i] / trace.per_layer[i - 1]);
    out << strf("%-6zu %10.6f %10.6f %14.6g %10s\n", i + 1, profile.rate(i), result.masks[i].sparsity(),
                trace.per_layer[i], ratio.c_str());
  }
  out << "total_error " << format_double(trace.total) << "\n";
  out << "sparse_digest " << content_digest(encode_net(result.sparse_net)) << "\n";
  return kExitOk;
}

int cmd_validate(const ValidateConfig& config, std::ostream& out) {
  const std::string& which = config.theorem;
  if (which != "all" && which != "lemma1" && which != "1" && which != "2" && which != "3" && which != "4") {
    throw UsageError("--theorem must be one of all, lemma1, 1, 2, 3, 4");
  }
  if (config.layers != 0 && (config.layers < 2 || config.layers > kMaxExhaustiveLayers)) {
    throw UsageError(strf("--layers must be between 2 and %zu", kMaxExhaustiveLayers));
  }
  const std::uint64_t base = config.seed.value_or(kSeedManifestBase);
  auto wants = [&](const char* name) { return which == "all" || which == name; };
  std::vector<CheckRow> rows;

  if (wants("lemma1")) {
    auto s = lemma1_sweep(1000, 32, 1e-9, base, 200);
    rows.push_back({"lemma1", s.cases, s.satisfied, 1.0, "worst_margin=" + format_double(s.worst_margin)});
    rows.push_back({"lemma1_rank_deficient", s.rank_deficient_cases, s.rank_deficient_satisfied, -1.0, ""});
  }
  if (wants("1")) {
    auto s = theorem1_sweep(100, 64, 128, 0.05, PruneMethod::magnitude(), base);
    rows.push_back({"theorem1_magnitude", s.layers, s.fully_monotone, 1.0,
                    "monotone_fraction=" + format_double(s.mean_fraction)});
    if (!config.nested) {
      auto v = theorem1_sweep(100, 64, 128, 0.05, PruneMethod::wanda(), base);
      rows.push_back({"theorem1_wanda", v.layers, v.fully_monotone, 1.0,
                      "monotone_fraction=" + format_double(v.mean_fraction)});
    }
  }
  if (wants("2")) {
    auto s = theorem2_sweep(50, 8, 64, 128, 0.5, PruneMethod::wanda(), base);
    rows.push_back({"theorem2_bound", s.pairs, s.satisfied, 0.95,
                    "skipped=" + std::to_string(s.skipped) + " min_ratio=" + format_double(s.min_ratio)});
  }
  if (wants("3")) {
    auto s = theorem3_sweep(200, 8, 64, 128, 0.5, 0.1, PruneMethod::wanda(), base);
    rows.push_back({"theorem3_chain", s.trials, s.non_decreasing, 0.95, ""});
  }
  std::optional<Theorem4Report> table;
  if (wants("4")) {
    auto s = theorem4_sweep({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, 3, 6, {1.1, 1.5, 2.0, 4.0},
                            {ErrorFamily::square(), ErrorFamily::ratio(0.1), ErrorFamily::exp(2.0)});
    rows.push_back({"theorem4_orderings", s.instances, s.instances - std::min(s.instances, s.counterexamples), 1.0,
                    "orderings=" + std::to_string(s.orderings) + " counterexamples=" +
                        std::to_string(s.counterexamples)});
    if (config.layers != 0) table = verify_theorem4(spread_rates(config.layers), AbstractErrorParams{});
  }

  bool ok = true;
  CsvWriter csv({"check", "cases", "satisfied", "fraction", "required", "status", "detail"});
  for (const auto& r : rows) {
    const char* status = !r.asserted() ? "REPORTED" : r.passed() ? "PASS" : "FAIL";
    ok = ok && r.passed();
    out << strf("%-8s %-22s %zu/%zu (%.4f)%s%s\n", status, r.check.c_str(), r.satisfied, r.cases, r.fraction(),
                r.detail.empty() ? "" : " ", r.detail.c_str());
    csv.row({r.check, std::to_string(r.cases), std::to_string(r.satisfied), format_double(r.fraction()),
             r.asserted() ? format_double(r.required) : "", status, r.detail});
  }
  if (table) {
    out << strf("theorem4 table: %zu orderings of %zu layers, ascending strict minimum: %s\n",
                table->ranking.size(), config.layers, table->ascending_is_strict_minimum ? "yes" : "no");
  }
  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    auto meta = csv_metadata(base, "theorem=" + which);
    write_if((fs::path(config.out_dir) / "validation.csv").string(), csv.finish(meta), out);
    if (table) {
      write_if((fs::path(config.out_dir) / "theorem4_orderings.csv").string(), theorem4_to_csv(*table, meta), out);
    }
  }
  return ok ? kExitOk : kExitValidation;
}

int cmd_step_ablation(const AblationConfig& config, std::ostream& out) {
  auto w = load_workload(config.source);
  auto rows = step_ablation(w.net, w.calib, config.sparsity, config.steps, make_settings(config.prune));
  auto meta = csv_metadata(config.source.seed, "S=" + brief(config.sparsity) + ", " + settings_note(config.prune));
  write_if(config.out_csv, ablation_to_csv(rows, meta), out);
  out << strf("%-10s %12s %12s %16s\n", "step", "evaluations", "best_beta", "best_objective");
  for (const auto& r : rows) {
    out << strf("%-10g %12zu %12.6g %16.8g\n", r.step, r.evaluations, r.best_beta, r.best_objective);
  }
  return kExitOk;
}

int cmd_random_search(const RandomSearchConfig& config, std::ostream& out) {
  auto seed = require_seed(config.source.seed, "for random-search");
  auto w = load_workload(config.source);
  auto settings = make_settings(config.prune);
  auto report =
      random_search_profiles(w.net, w.calib, config.sparsity, config.iters, derive_seed(seed, kRandomSearchStream), settings);
  auto meta = csv_metadata(seed, "S=" + brief(config.sparsity) + ", " + settings_note(config.prune));
  write_if(config.out_csv, search_to_csv(report, meta), out);
  write_if(config.out_json, search_to_json(report), out);
  write_if(config.out_profile, profile_to_json(report.best_profile), out);
  out << "iterations " << report.candidates.size() << "\n";
  out << "random_best_objective " << format_double(report.best_objective) << "\n";
  if (config.compare_step > 0.0) {
    auto grid = grid_search_beta(w.net, w.calib, config.sparsity, config.compare_step, settings);
    out << "atp_best_beta " << beta_text(grid.best_beta) << "\n";
    out << "atp_best_objective " << format_double(grid.best_objective) << "\n";
    out << "atp_over_random " << format_double(grid.best_objective / report.best_objective) << "\n";
  }
  return kExitOk;
}

int cmd_report(const ReportConfig& config, std::ostream& out) {
  if (!config.from.empty()) {
    auto bytes = read_file(config.from);
    render_comparison(parse_csv(std::string(bytes.begin(), bytes.end())), out);
    return kExitOk;
  }
  auto base = require_seed(config.seed, "for report (or pass --from)");
  if (config.nets == 0) throw DomainError("--nets must be positive");
  auto settings = make_settings(config.prune);
  auto dims = resolve_dims(config.layers, config.dim, {});

  std::vector<std::string> header{"net", "seed", "uniform", "atp", "atp_beta", "erk", "lamp", "global"};
  if (config.random_iters > 0) header.push_back("random");
  CsvWriter csv(header);
  for (std::size_t k = 0; k < config.nets; ++k) {
    std::uint64_t seed = derive_seed(base, k);
    auto net = generate_net(config.layers, dims, parse_activation(config.activation), seed);
    auto calib = generate_calibration(net.input_dim(), config.samples, derive_seed(seed, kCalibStream));
    auto eval = [&](const SparsityProfile& p) { return evaluate_profile(net, calib, p, settings); };
    auto grid = grid_search_beta(net, calib, config.sparsity, config.step, settings);
    std::vector<std::string> row{std::to_string(k), std::to_string(seed),
                                 format_double(eval(allocate_uniform(config.sparsity, net.depth()))),
                                 format_double(grid.best_objective), beta_text(grid.best_beta),
                                 format_double(eval(allocate_erk(net, config.sparsity))),
                                 format_double(eval(allocate_lamp(net, config.sparsity))),
                                 format_double(eval(allocate_global(net, calib, config.sparsity)))};
    if (config.random_iters > 0) {
      auto random = random_search_profiles(net, calib, config.sparsity, config.random_iters,
                                           derive_seed(seed, kRandomSearchStream), settings);
      row.push_back(format_double(random.best_objective));
    }
    csv.row(row);
  }
  auto text = csv.finish(csv_metadata(base, "S=" + brief(config.sparsity) + ", " + settings_note(config.prune)));
  write_if(config.out_csv, text, out);
  render_comparison(parse_csv(text), out);
  return kExitOk;
}

}  // namespace sparsalloc::cli
