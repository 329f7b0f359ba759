#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sparsalloc/linalg.hpp"
#include "sparsalloc/netmodel.hpp"

namespace sparsalloc {

class SparsityProfile;

// Binary keep-mask over a weight matrix; 1 keeps the weight, 0 prunes it.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, bool keep_all = true);
  // Throws DomainError if an entry is not 0 or 1.
  Mask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> keep);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return keep_.size(); }

  bool kept(std::size_t r, std::size_t c) const { return keep_[r * cols_ + c] != 0; }
  std::uint8_t operator[](std::size_t flat) const { return keep_[flat]; }
  void set(std::size_t flat, bool keep) { keep_[flat] = keep ? 1 : 0; }
  const std::vector<std::uint8_t>& entries() const { return keep_; }

  std::size_t zeros() const;
  // Fraction of pruned entries.
  double sparsity() const;

  // W ⊙ mask.
  DenseMatrix apply(const DenseMatrix& w) const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> keep_;
};

struct PruneMethod {
  enum class Kind { Magnitude, WandaStyle, NMGroup };

  Kind kind = Kind::WandaStyle;
  std::size_t n = 0;  // NMGroup only
  std::size_t m = 0;

  static PruneMethod magnitude() { return {Kind::Magnitude, 0, 0}; }
  static PruneMethod wanda() { return {Kind::WandaStyle, 0, 0}; }
  // Throws DomainError unless 0 <= n <= m and m >= 1.
  static PruneMethod nm_group(std::size_t n, std::size_t m);

  bool needs_activations() const { return kind != Kind::Magnitude; }

  friend bool operator==(const PruneMethod&, const PruneMethod&) = default;
};

// "magnitude", "wanda", "nm:N:M"
std::string to_string(const PruneMethod& method);
PruneMethod parse_prune_method(std::string_view text);

struct PruneOptions {
  // Rank within each output row instead of across the whole layer.
  bool per_row = false;
  // Score every layer with the dense activations X_i instead of the
  // propagated sparse activations.
  bool dense_input_scoring = false;
};

// Magnitude: |w_ij|. WandaStyle and NMGroup: |w_ij| * ||row j of x||_2.
// `x` is ignored for Magnitude and may be empty.
DenseMatrix score_layer(const DenseMatrix& w, const DenseMatrix& x, const PruneMethod& method);

// Prunes k = round(s * numel) entries with the smallest scores; equal scores
// are pruned in increasing flat (row-major) index order. With per_row set the
// ranking and the rounding happen independently in each row.
Mask prune_layer(const DenseMatrix& w, const DenseMatrix& score, double sparsity, bool per_row = false);

// Keeps the n highest-scoring entries of every contiguous group of m along
// each row (lower index wins ties). A trailing partial group of length len
// keeps ceil(n * len / m) entries.
Mask nm_mask(const DenseMatrix& w, const DenseMatrix& score, std::size_t n, std::size_t m);

// N kept per group of m for a layer whose rate is s = 1 - N/m. DomainError if
// s is not of that form within 1e-9.
std::size_t nm_keep_count(double sparsity, std::size_t m);

struct PruneResult {
  std::vector<Mask> masks;
  LayerNet sparse_net;
};

// Sequential post-training pruning: layer i is scored on X̃_i (or X_i with
// dense_input_scoring), masked at rate s_i, and X̃_{i+1} = act(W̃_i X̃_i).
// For NMGroup the method's n is ignored and each layer keeps
// nm_keep_count(s_i, m) per group.
PruneResult prune_net(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& profile,
                      const PruneMethod& method, const PruneOptions& options = {});

}  // namespace sparsalloc
