#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsalloc/linalg.hpp"

namespace sparsalloc {

enum class Activation : std::uint8_t { Linear = 0, ReLU = 1 };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);

// A chain of layer weights W_1..W_L with W_i of shape c_out,i x c_in,i and
// c_in,(i+1) = c_out,i. The label is a display name; it is not part of the
// serialised container and does not take part in equality.
class LayerNet {
 public:
  LayerNet() = default;
  // Throws ShapeError on an empty list or a broken chain.
  explicit LayerNet(std::vector<DenseMatrix> layers, Activation activation = Activation::Linear,
                    std::string label = {});

  std::size_t depth() const { return layers_.size(); }
  const std::vector<DenseMatrix>& layers() const { return layers_; }
  const DenseMatrix& layer(std::size_t i) const { return layers_.at(i); }
  Activation activation() const { return activation_; }
  const std::string& label() const { return label_; }

  std::size_t input_dim() const { return layers_.front().cols(); }
  std::size_t output_dim() const { return layers_.back().rows(); }
  std::size_t parameter_count() const;

  // Same activation and label, new weights (must keep the shapes).
  LayerNet with_layers(std::vector<DenseMatrix> layers) const;

  friend bool operator==(const LayerNet& a, const LayerNet& b) {
    return a.activation_ == b.activation_ && a.layers_ == b.layers_;
  }

 private:
  std::vector<DenseMatrix> layers_;
  Activation activation_ = Activation::Linear;
  std::string label_;
};

// Calibration inputs X_1, one column per sample.
struct CalibrationSet {
  DenseMatrix x0;

  std::size_t samples() const { return x0.cols(); }
  std::size_t features() const { return x0.rows(); }
};

// Uniform weights on [-sqrt(3/c_in), sqrt(3/c_in)], drawn layer by layer in
// row-major order from CounterRng(seed). dims has L+1 entries:
// dims[0] = c_in,1 and dims[i] = c_out,i.
LayerNet generate_net(std::size_t layers, const std::vector<std::size_t>& dims,
                      Activation activation, std::uint64_t seed, std::string label = {});

// Standard-normal calibration matrix (features x samples), row-major draws.
CalibrationSet generate_calibration(std::size_t features, std::size_t samples, std::uint64_t seed);

// Calibration split: the first `count` samples and the remainder.
std::pair<CalibrationSet, CalibrationSet> split_samples(const CalibrationSet& calib, std::size_t count);

DenseMatrix apply_activation(DenseMatrix m, Activation a);

// [X_1, ..., X_{L+1}] with X_1 = x0 and X_{i+1} = act(W_i X_i).
std::vector<DenseMatrix> forward(const LayerNet& net, const DenseMatrix& x0);

}  // namespace sparsalloc
