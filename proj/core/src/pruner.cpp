#include "sparsalloc/pruner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/errors.hpp"

namespace sparsalloc {

Mask::Mask(std::size_t rows, std::size_t cols, bool keep_all)
    : rows_(rows), cols_(cols), keep_(rows * cols, keep_all ? 1 : 0) {}

Mask::Mask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> keep)
    : rows_(rows), cols_(cols), keep_(std::move(keep)) {
  if (keep_.size() != rows * cols) throw ShapeError("Mask: entry count does not match shape");
  for (auto v : keep_) {
    if (v > 1) throw DomainError("Mask: entries must be 0 or 1");
  }
}

std::size_t Mask::zeros() const {
  return static_cast<std::size_t>(std::count(keep_.begin(), keep_.end(), std::uint8_t{0}));
}

double Mask::sparsity() const {
  return keep_.empty() ? 0.0 : static_cast<double>(zeros()) / static_cast<double>(keep_.size());
}

DenseMatrix Mask::apply(const DenseMatrix& w) const {
  if (w.rows() != rows_ || w.cols() != cols_) throw ShapeError("Mask::apply: shape mismatch");
  DenseMatrix out = w;
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (keep_[i] == 0) v[i] = 0.0;
  }
  return out;
}

PruneMethod PruneMethod::nm_group(std::size_t n, std::size_t m) {
  if (m == 0 || n > m) throw DomainError("N:M method needs 0 <= n <= m and m >= 1");
  return {Kind::NMGroup, n, m};
}

std::string to_string(const PruneMethod& method) {
  switch (method.kind) {
    case PruneMethod::Kind::Magnitude:
      return "magnitude";
    case PruneMethod::Kind::WandaStyle:
      return "wanda";
    case PruneMethod::Kind::NMGroup:
      return "nm:" + std::to_string(method.n) + ":" + std::to_string(method.m);
  }
  return "unknown";
}

PruneMethod parse_prune_method(std::string_view text) {
  if (text == "magnitude") return PruneMethod::magnitude();
  if (text == "wanda") return PruneMethod::wanda();
  if (text.starts_with("nm:")) {
    const auto rest = text.substr(3);
    const auto colon = rest.find(':');
    std::size_t n = 0, m = 0;
    if (colon != std::string_view::npos) {
      const auto a = rest.substr(0, colon);
      const auto b = rest.substr(colon + 1);
      const auto ra = std::from_chars(a.data(), a.data() + a.size(), n);
      const auto rb = std::from_chars(b.data(), b.data() + b.size(), m);
      if (ra.ec == std::errc{} && ra.ptr == a.data() + a.size() && rb.ec == std::errc{} &&
          rb.ptr == b.data() + b.size()) {
        return PruneMethod::nm_group(n, m);
      }
    }
  }
  throw DomainError("unknown prune method '" + std::string(text) + "' (magnitude | wanda | nm:N:M)");
}

DenseMatrix score_layer(const DenseMatrix& w, const DenseMatrix& x, const PruneMethod& method) {
  DenseMatrix score(w.rows(), w.cols());
  if (method.kind == PruneMethod::Kind::Magnitude) {
    auto s = score.values();
    auto wv = w.values();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::abs(wv[i]);
    return score;
  }
  if (x.rows() != w.cols() || x.cols() == 0) {
    throw ShapeError("score_layer: activation-aware scoring needs a " + std::to_string(w.cols()) +
                     "-feature calibration input");
  }
  std::vector<double> feature_norm(x.rows());
  for (std::size_t j = 0; j < x.rows(); ++j) {
    double acc = 0.0;
    for (double v : x.row(j)) acc += v * v;
    feature_norm[j] = std::sqrt(acc);
  }
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) score(i, j) = std::abs(w(i, j)) * feature_norm[j];
  return score;
}

namespace {

void check_rate(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("sparsity rate " + std::to_string(s) + " outside [0,1]");
}

// Prunes the k lowest-scoring entries among flat indices [first, first+count).
void prune_lowest(const DenseMatrix& score, std::size_t first, std::size_t count, std::size_t k, Mask& mask) {
  if (k == 0) return;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), first);
  auto sv = score.values();
  auto less = [&](std::size_t a, std::size_t b) { return sv[a] < sv[b] || (sv[a] == sv[b] && a < b); };
  if (k < count) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
  }
  for (std::size_t i = 0; i < k; ++i) mask.set(order[i], false);
}

}  // namespace

Mask prune_layer(const DenseMatrix& w, const DenseMatrix& score, double sparsity, bool per_row) {
  if (!w.same_shape(score)) throw ShapeError("prune_layer: score shape differs from weight shape");
  check_rate(sparsity);
  Mask mask(w.rows(), w.cols(), true);
  if (per_row) {
    const auto k = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(w.cols())));
    for (std::size_t r = 0; r < w.rows(); ++r) prune_lowest(score, r * w.cols(), w.cols(), k, mask);
  } else {
    const auto k = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(w.size())));
    prune_lowest(score, 0, w.size(), k, mask);
  }
  return mask;
}

Mask nm_mask(const DenseMatrix& w, const DenseMatrix& score, std::size_t n, std::size_t m) {
  if (!w.same_shape(score)) throw ShapeError("nm_mask: score shape differs from weight shape");
  if (m == 0 || n > m) throw DomainError("nm_mask: need 0 <= n <= m and m >= 1");
  Mask mask(w.rows(), w.cols(), false);
  std::vector<std::size_t> idx;
  for (std::size_t r = 0; r < w.rows(); ++r) {
    for (std::size_t start = 0; start < w.cols(); start += m) {
      const std::size_t len = std::min(m, w.cols() - start);
      const std::size_t keep = len == m ? n : (n * len + m - 1) / m;
      idx.resize(len);
      std::iota(idx.begin(), idx.end(), start);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return score(r, a) > score(r, b); });
      for (std::size_t i = 0; i < keep; ++i) mask.set(r * w.cols() + idx[i], true);
    }
  }
  return mask;
}

std::size_t nm_keep_count(double sparsity, std::size_t m) {
  check_rate(sparsity);
  const double n = static_cast<double>(m) * (1.0 - sparsity);
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9) {
    throw DomainError("rate " + std::to_string(sparsity) + " is not of the form 1 - N/" + std::to_string(m));
  }
  return static_cast<std::size_t>(rounded);
}

PruneResult prune_net(const LayerNet& net, const CalibrationSet& calib, const SparsityProfile& profile,
                      const PruneMethod& method, const PruneOptions& options) {
  if (profile.depth() != net.depth()) {
    throw ShapeError("prune_net: profile has " + std::to_string(profile.depth()) + " rates for a " +
                     std::to_string(net.depth()) + "-layer net");
  }
  const bool need_x = method.needs_activations();
  if (need_x && calib.features() != net.input_dim()) {
    throw ShapeError("prune_net: calibration features do not match the net input");
  }

  std::vector<DenseMatrix> dense_inputs;
  if (need_x && options.dense_input_scoring) dense_inputs = forward(net, calib.x0);

  PruneResult result;
  result.masks.reserve(net.depth());
  std::vector<DenseMatrix> sparse_layers;
  sparse_layers.reserve(net.depth());
  DenseMatrix x_sparse = need_x ? calib.x0 : DenseMatrix{};

  for (std::size_t i = 0; i < net.depth(); ++i) {
    const DenseMatrix& w = net.layer(i);
    const DenseMatrix& x_score = !need_x ? x_sparse : options.dense_input_scoring ? dense_inputs[i] : x_sparse;
    const DenseMatrix score = score_layer(w, x_score, method);
    Mask mask = method.kind == PruneMethod::Kind::NMGroup
                    ? nm_mask(w, score, nm_keep_count(profile.rate(i), method.m), method.m)
                    : prune_layer(w, score, profile.rate(i), options.per_row);
    DenseMatrix w_sparse = mask.apply(w);
    if (need_x && !options.dense_input_scoring && i + 1 < net.depth()) {
      x_sparse = apply_activation(matmul(w_sparse, x_sparse), net.activation());
    }
    sparse_layers.push_back(std::move(w_sparse));
    result.masks.push_back(std::move(mask));
  }
  result.sparse_net = net.with_layers(std::move(sparse_layers));
  return result;
}

}  // namespace sparsalloc
