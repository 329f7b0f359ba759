#include "sparsalloc/netmodel.hpp"

#include <algorithm>
#include <cmath>

#include "sparsalloc/errors.hpp"
#include "sparsalloc/rng.hpp"

namespace sparsalloc {

std::string_view to_string(Activation a) {
  return a == Activation::ReLU ? "relu" : "linear";
}

Activation parse_activation(std::string_view s) {
  if (s == "linear") return Activation::Linear;
  if (s == "relu") return Activation::ReLU;
  throw DomainError("unknown activation '" + std::string(s) + "'");
}

LayerNet::LayerNet(std::vector<DenseMatrix> layers, Activation activation, std::string label)
    : layers_(std::move(layers)), activation_(activation), label_(std::move(label)) {
  if (layers_.empty()) throw ShapeError("LayerNet: at least one layer is required");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].empty()) throw ShapeError("LayerNet: layer " + std::to_string(i) + " is empty");
    if (i > 0 && layers_[i].cols() != layers_[i - 1].rows()) {
      throw ShapeError("LayerNet: layer " + std::to_string(i) + " expects " +
                       std::to_string(layers_[i].cols()) + " inputs but layer " + std::to_string(i - 1) +
                       " produces " + std::to_string(layers_[i - 1].rows()));
    }
  }
}

std::size_t LayerNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : layers_) n += w.size();
  return n;
}

LayerNet LayerNet::with_layers(std::vector<DenseMatrix> layers) const {
  if (layers.size() != layers_.size()) throw ShapeError("with_layers: depth mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].same_shape(layers_[i])) throw ShapeError("with_layers: shape mismatch at layer " + std::to_string(i));
  }
  return LayerNet(std::move(layers), activation_, label_);
}

LayerNet generate_net(std::size_t layers, const std::vector<std::size_t>& dims, Activation activation,
                      std::uint64_t seed, std::string label) {
  if (layers == 0) throw ShapeError("generate_net: L must be at least 1");
  if (dims.size() != layers + 1) {
    throw ShapeError("generate_net: expected " + std::to_string(layers + 1) + " dims, got " +
                     std::to_string(dims.size()));
  }
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; })) {
    throw ShapeError("generate_net: every dim must be >= 1");
  }
  CounterRng rng(seed);
  std::vector<DenseMatrix> ws;
  ws.reserve(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    const std::size_t c_in = dims[i];
    const std::size_t c_out = dims[i + 1];
    const double a = std::sqrt(3.0 / static_cast<double>(c_in));
    DenseMatrix w(c_out, c_in);
    for (double& v : w.values()) v = rng.uniform(-a, a);
    ws.push_back(std::move(w));
  }
  return LayerNet(std::move(ws), activation, std::move(label));
}

CalibrationSet generate_calibration(std::size_t features, std::size_t samples, std::uint64_t seed) {
  if (features == 0 || samples == 0) throw ShapeError("generate_calibration: empty calibration set");
  CounterRng rng(seed);
  DenseMatrix x(features, samples);
  for (double& v : x.values()) v = rng.normal();
  return {std::move(x)};
}

std::pair<CalibrationSet, CalibrationSet> split_samples(const CalibrationSet& calib, std::size_t count) {
  if (count == 0 || count >= calib.samples()) {
    throw DomainError("split_samples: both halves need at least one sample");
  }
  return {{column_block(calib.x0, 0, count)}, {column_block(calib.x0, count, calib.samples() - count)}};
}

DenseMatrix apply_activation(DenseMatrix m, Activation a) {
  if (a == Activation::ReLU) {
    for (double& v : m.values()) v = std::max(v, 0.0);
  }
  return m;
}

std::vector<DenseMatrix> forward(const LayerNet& net, const DenseMatrix& x0) {
  if (x0.rows() != net.input_dim()) {
    throw ShapeError("forward: input has " + std::to_string(x0.rows()) + " features, net expects " +
                     std::to_string(net.input_dim()));
  }
  std::vector<DenseMatrix> xs;
  xs.reserve(net.depth() + 1);
  xs.push_back(x0);
  for (const auto& w : net.layers()) {
    xs.push_back(apply_activation(matmul(w, xs.back()), net.activation()));
  }
  return xs;
}

}  // namespace sparsalloc
