#pragma once

// Field tables shared by the JSON (de)serialiser and the flag binder. Each
// visit() calls v(key, member, help) once per field; keys double as long flag
// names with '_' spelled '-'.

#include "run_config.hpp"

namespace sparsalloc::cli {

template <class V>
void visit(NetSource& s, V&& v) {
  v("net", s.net, "Input NetFile (generated from --layers/--dim/--seed when omitted)");
  v("calib", s.calib, "Calibration container (generated from --samples/--seed when omitted)");
  v("layers", s.layers, "Layer count L for a generated net");
  v("dim", s.dim, "Square layer width for a generated net");
  v("dims", s.dims, "Explicit widths c_in,1,c_out,1,...,c_out,L (L+1 values)");
  v("activation", s.activation, "linear | relu");
  v("samples", s.samples, "Calibration sample count d for generated calibration data");
  v("seed", s.seed, "Seed for generated data");
}

template <class V>
void visit(PruneSettingsConfig& p, V&& v) {
  v("method", p.method, "magnitude | wanda | nm:N:M");
  v("objective", p.objective, "recon | heldout");
  v("per_row", p.per_row, "Rank weights within each output row");
  v("dense_scoring", p.dense_scoring, "Score with dense instead of propagated sparse activations");
}

template <class V>
void visit(GenNetConfig& c, V&& v) {
  v("layers", c.layers, "Layer count L");
  v("dim", c.dim, "Square layer width");
  v("dims", c.dims, "Explicit widths (L+1 values)");
  v("activation", c.activation, "linear | relu");
  v("seed", c.seed, "Generator seed (required)");
  v("output", c.output, "Output NetFile path (required)");
  v("label", c.label, "Display label");
}

template <class V>
void visit(GenCalibConfig& c, V&& v) {
  v("features", c.features, "Feature count c_in,1");
  v("samples", c.samples, "Sample count d");
  v("seed", c.seed, "Generator seed (required)");
  v("output", c.output, "Output container path (required)");
}

template <class V>
void visit(SearchConfig& c, V&& v) {
  visit(c.source, v);
  visit(c.prune, v);
  v("sparsity", c.sparsity, "Average sparsity S");
  v("step", c.step, "Grid step for beta");
  v("out_csv", c.out_csv, "Write (beta, objective) CSV");
  v("out_profile", c.out_profile, "Write the best profile as JSON");
  v("out_json", c.out_json, "Write the full search report as JSON");
}

template <class V>
void visit(PruneConfig& c, V&& v) {
  visit(c.source, v);
  visit(c.prune, v);
  v("profile", c.profile, "Sparsity profile JSON (required)");
  v("out_net", c.out_net, "Write the sparse NetFile");
  v("out_masks", c.out_masks, "Write the masks container");
  v("out_trace", c.out_trace, "Write the error trace CSV");
}

template <class V>
void visit(ValidateConfig& c, V&& v) {
  v("theorem", c.theorem, "all | lemma1 | 1 | 2 | 3 | 4");
  v("layers", c.layers, "Also emit the exhaustive ordering table for this many layers (theorem 4)");
  v("nested", c.nested, "Theorem 1 with magnitude (nested) masks only");
  v("seed", c.seed, "Base of the seed manifest");
  v("out_dir", c.out_dir, "Directory for validation CSVs");
}

template <class V>
void visit(AblationConfig& c, V&& v) {
  visit(c.source, v);
  visit(c.prune, v);
  v("sparsity", c.sparsity, "Average sparsity S");
  v("steps", c.steps, "Comma-separated grid steps");
  v("out_csv", c.out_csv, "Write the ablation table as CSV");
}

template <class V>
void visit(RandomSearchConfig& c, V&& v) {
  visit(c.source, v);
  visit(c.prune, v);
  v("sparsity", c.sparsity, "Average sparsity S");
  v("iters", c.iters, "Number of sampled profiles");
  v("compare_step", c.compare_step, "Also run the beta grid at this step and compare");
  v("out_csv", c.out_csv, "Write (iteration, objective) CSV");
  v("out_json", c.out_json, "Write the full report as JSON");
  v("out_profile", c.out_profile, "Write the best profile as JSON");
}

template <class V>
void visit(ReportConfig& c, V&& v) {
  v("nets", c.nets, "Number of seeded nets");
  v("layers", c.layers, "Layer count L");
  v("dim", c.dim, "Square layer width");
  v("samples", c.samples, "Calibration sample count");
  v("activation", c.activation, "linear | relu");
  v("seed", c.seed, "Base seed (required unless --from)");
  visit(c.prune, v);
  v("sparsity", c.sparsity, "Average sparsity S");
  v("step", c.step, "Grid step for beta");
  v("random_iters", c.random_iters, "Random-search iterations per net (0 skips)");
  v("from", c.from, "Render a stored comparison CSV instead of running");
  v("out_csv", c.out_csv, "Write the comparison CSV");
}

}  // namespace sparsalloc::cli
