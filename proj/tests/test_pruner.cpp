#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sparsalloc/allocator.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/pruner.hpp"

using namespace sparsalloc;

namespace {

// Full stable sort by (score, flat index); the first k are pruned.
Mask sort_oracle(const DenseMatrix& score, double s) {
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto vals = score.values();
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  auto k = static_cast<std::size_t>(std::llround(s * static_cast<double>(score.size())));
  Mask m(score.rows(), score.cols(), true);
  for (std::size_t i = 0; i < k; ++i) m.set(idx[i], false);
  return m;
}

// Per-group selection of the n largest, lower index first among equals.
Mask group_oracle(const DenseMatrix& score, std::size_t n, std::size_t m) {
  Mask mask(score.rows(), score.cols(), false);
  for (std::size_t r = 0; r < score.rows(); ++r) {
    for (std::size_t g = 0; g < score.cols(); g += m) {
      std::size_t len = std::min(m, score.cols() - g);
      std::size_t keep = len == m ? n : static_cast<std::size_t>(std::ceil(static_cast<double>(n * len) / static_cast<double>(m)));
      std::vector<std::size_t> idx(len);
      std::iota(idx.begin(), idx.end(), g);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score(r, a) > score(r, b); });
      for (std::size_t i = 0; i < keep; ++i) mask.set(r * score.cols() + idx[i], true);
    }
  }
  return mask;
}

}  // namespace

TEST(Mask, SparsityApplyIdempotent) {
  Mask m(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1});
  EXPECT_EQ(m.zeros(), 2u);
  EXPECT_DOUBLE_EQ(m.sparsity(), 0.5);
  auto w = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  auto once = m.apply(w);
  EXPECT_EQ(once, DenseMatrix::from_rows({{1, 0}, {0, 4}}));
  EXPECT_EQ(m.apply(once), once);
  EXPECT_THROW(Mask(1, 2, std::vector<std::uint8_t>{1, 2}), DomainError);
}

TEST(ScoreLayer, Magnitude) {
  auto w = DenseMatrix::from_rows({{1, -2}, {3, -4}});
  EXPECT_EQ(score_layer(w, {}, PruneMethod::magnitude()), DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(ScoreLayer, WandaUnitNorms) {
  auto w = DenseMatrix::from_rows({{1, -2}, {3, -4}});
  EXPECT_EQ(score_layer(w, DenseMatrix::identity(2), PruneMethod::wanda()), DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(ScoreLayer, WandaScalarOracle) {
  auto w = test::random_matrix(4, 4, 1);
  auto x = test::random_matrix(4, 16, 2);
  auto s = score_layer(w, x, PruneMethod::wanda());
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double norm = 0.0;
      for (std::size_t k = 0; k < 16; ++k) norm += x(j, k) * x(j, k);
      EXPECT_NEAR(s(i, j), std::abs(w(i, j)) * std::sqrt(norm), 1e-12);
    }
  }
  EXPECT_THROW(score_layer(w, DenseMatrix(3, 16), PruneMethod::wanda()), ShapeError);
}

TEST(PruneLayer, Endpoints) {
  auto w = test::random_matrix(3, 5, 4);
  auto score = score_layer(w, {}, PruneMethod::magnitude());
  EXPECT_EQ(prune_layer(w, score, 0.0).zeros(), 0u);
  EXPECT_EQ(prune_layer(w, score, 1.0).zeros(), 15u);
  EXPECT_THROW(prune_layer(w, score, 1.5), DomainError);
  EXPECT_THROW(prune_layer(w, score, -0.1), DomainError);
}

TEST(PruneLayer, HandExample) {
  auto w = DenseMatrix::from_rows({{1, -2}, {3, -4}});
  auto mask = prune_layer(w, score_layer(w, {}, PruneMethod::magnitude()), 0.5);
  EXPECT_EQ(mask.apply(w), DenseMatrix::from_rows({{0, 0}, {3, -4}}));
}

TEST(PruneLayer, MatchesSortOracle) {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    auto w = test::random_matrix(5, 7, seed);
    auto score = score_layer(w, {}, PruneMethod::magnitude());
    double s = 0.03 * seed;
    EXPECT_EQ(prune_layer(w, score, s), sort_oracle(score, s)) << "seed " << seed;
  }
}

TEST(PruneLayer, TiesPruneLowerIndexFirst) {
  DenseMatrix w(2, 3, 1.0);
  auto mask = prune_layer(w, w, 0.5);
  EXPECT_EQ(mask.entries(), (std::vector<std::uint8_t>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(mask, sort_oracle(w, 0.5));
}

TEST(PruneLayer, PerRowRounding) {
  auto w = test::random_matrix(4, 10, 5);
  auto mask = prune_layer(w, score_layer(w, {}, PruneMethod::magnitude()), 0.3, true);
  for (std::size_t r = 0; r < 4; ++r) {
    std::size_t zeros = 0;
    for (std::size_t c = 0; c < 10; ++c) zeros += mask.kept(r, c) ? 0 : 1;
    EXPECT_EQ(zeros, 3u);
  }
}

TEST(PruneLayer, MasksAreNested) {
  auto w = test::random_matrix(6, 6, 12);
  auto x = test::random_matrix(6, 20, 13);
  for (auto method : {PruneMethod::magnitude(), PruneMethod::wanda()}) {
    auto score = score_layer(w, x, method);
    Mask prev = prune_layer(w, score, 0.0);
    for (int k = 1; k <= 20; ++k) {
      Mask next = prune_layer(w, score, 0.05 * k);
      for (std::size_t i = 0; i < next.size(); ++i) ASSERT_LE(next[i], prev[i]);
      prev = next;
    }
  }
}

TEST(PruneLayer, RoundingBound) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    std::size_t rows = 1 + seed % 7, cols = 1 + (seed * 3) % 11;
    auto w = test::random_matrix(rows, cols, seed);
    double s = std::fmod(0.137 * seed, 1.0);
    auto mask = prune_layer(w, score_layer(w, {}, PruneMethod::magnitude()), s);
    EXPECT_LE(std::abs(mask.sparsity() - s), 1.0 / static_cast<double>(rows * cols));
  }
}

TEST(NmMask, Endpoints) {
  auto w = test::random_matrix(3, 8, 1);
  EXPECT_EQ(nm_mask(w, w, 4, 4).zeros(), 0u);
  EXPECT_EQ(nm_mask(w, w, 0, 4).zeros(), 24u);
  EXPECT_THROW(nm_mask(w, w, 5, 4), DomainError);
}

TEST(NmMask, HandExample) {
  auto score = DenseMatrix::from_rows({{5, 1, 4, 2, 9, 9, 1, 1}});
  auto mask = nm_mask(score, score, 2, 4);
  EXPECT_EQ(mask.entries(), (std::vector<std::uint8_t>{1, 0, 1, 0, 1, 1, 0, 0}));
}

TEST(NmMask, MatchesGroupOracleIncludingPartialGroups) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    std::size_t cols = 5 + seed % 9;
    auto w = test::random_matrix(3, cols, seed);
    auto score = score_layer(w, {}, PruneMethod::magnitude());
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(nm_mask(w, score, n, 4), group_oracle(score, n, 4));
  }
}

TEST(NmKeepCount, Rates) {
  EXPECT_EQ(nm_keep_count(0.75, 8), 2u);
  EXPECT_EQ(nm_keep_count(0.5, 4), 2u);
  EXPECT_EQ(nm_keep_count(1.0, 8), 0u);
  EXPECT_THROW(nm_keep_count(0.3, 8), DomainError);
}

TEST(PruneMethod, ParseAndRender) {
  for (std::string text : {"magnitude", "wanda", "nm:2:4"}) EXPECT_EQ(to_string(parse_prune_method(text)), text);
  EXPECT_EQ(parse_prune_method("nm:2:8"), PruneMethod::nm_group(2, 8));
  EXPECT_THROW(parse_prune_method("nm:5:4"), DomainError);
  EXPECT_THROW(parse_prune_method("sparsegpt"), DomainError);
}

TEST(PruneNet, ZeroProfileIsIdentity) {
  auto net = generate_net(3, {5, 5, 5, 5}, Activation::Linear, 3);
  auto calib = generate_calibration(5, 8, 4);
  auto r = prune_net(net, calib, SparsityProfile::from_rates({0, 0, 0}), PruneMethod::wanda());
  EXPECT_EQ(r.sparse_net, net);
}

TEST(PruneNet, FullProfileZeroesEverything) {
  auto net = generate_net(3, {5, 5, 5, 5}, Activation::Linear, 3);
  auto calib = generate_calibration(5, 8, 4);
  auto r = prune_net(net, calib, SparsityProfile::from_rates({1, 1, 1}), PruneMethod::magnitude());
  for (const auto& w : r.sparse_net.layers()) EXPECT_TRUE(w.all_zero());
}

TEST(PruneNet, AchievedSparsityIsRoundedCount) {
  auto net = generate_net(3, {7, 5, 9, 3}, Activation::Linear, 8);
  auto calib = generate_calibration(7, 12, 9);
  auto r = prune_net(net, calib, allocate_uniform(0.5, 3), PruneMethod::wanda());
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t nonzero = 0;
    for (double v : r.sparse_net.layer(i).values()) nonzero += v != 0.0;
    double numel = static_cast<double>(net.layer(i).size());
    EXPECT_DOUBLE_EQ(r.masks[i].sparsity(), std::round(0.5 * numel) / numel);
    EXPECT_EQ(numel - static_cast<double>(nonzero), std::round(0.5 * numel));
  }
}

TEST(PruneNet, ScoresUseSparsePropagatedInput) {
  auto net = generate_net(3, {6, 6, 6, 6}, Activation::ReLU, 30);
  auto calib = generate_calibration(6, 10, 31);
  auto profile = SparsityProfile::from_rates({0.4, 0.5, 0.6});
  auto r = prune_net(net, calib, profile, PruneMethod::wanda());

  DenseMatrix x = calib.x0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& w = net.layer(i);
    auto expected = sort_oracle(score_layer(w, x, PruneMethod::wanda()), profile.rate(i));
    EXPECT_EQ(r.masks[i], expected) << "layer " << i;
    x = apply_activation(test::naive_product(expected.apply(w), x), Activation::ReLU);
  }
}

TEST(PruneNet, DenseScoringOption) {
  auto net = generate_net(3, {6, 6, 6, 6}, Activation::Linear, 40);
  auto calib = generate_calibration(6, 10, 41);
  auto profile = SparsityProfile::from_rates({0.4, 0.5, 0.6});
  PruneOptions opts;
  opts.dense_input_scoring = true;
  auto r = prune_net(net, calib, profile, PruneMethod::wanda(), opts);
  auto xs = forward(net, calib.x0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.masks[i], sort_oracle(score_layer(net.layer(i), xs[i], PruneMethod::wanda()), profile.rate(i)));
  }
}

TEST(PruneNet, Deterministic) {
  auto net = generate_net(4, {8, 8, 8, 8, 8}, Activation::Linear, 50);
  auto calib = generate_calibration(8, 16, 51);
  auto p = allocate_arithmetic(0.6, 4, 0.1);
  auto a = prune_net(net, calib, p, PruneMethod::wanda());
  auto b = prune_net(net, calib, p, PruneMethod::wanda());
  EXPECT_EQ(a.masks, b.masks);
  EXPECT_EQ(a.sparse_net, b.sparse_net);
}

TEST(PruneNet, LengthMismatch) {
  auto net = generate_net(3, {5, 5, 5, 5}, Activation::Linear, 3);
  auto calib = generate_calibration(5, 8, 4);
  EXPECT_THROW(prune_net(net, calib, allocate_uniform(0.5, 2), PruneMethod::wanda()), ShapeError);
}

TEST(PruneNet, NmGroupUsesPerLayerKeepCount) {
  auto net = generate_net(2, {8, 8, 8}, Activation::Linear, 60);
  auto calib = generate_calibration(8, 10, 61);
  auto profile = SparsityProfile::from_rates({0.5, 0.75});
  auto r = prune_net(net, calib, profile, PruneMethod::nm_group(2, 4));
  EXPECT_DOUBLE_EQ(r.masks[0].sparsity(), 0.5);
  EXPECT_DOUBLE_EQ(r.masks[1].sparsity(), 0.75);
  EXPECT_THROW(prune_net(net, calib, SparsityProfile::from_rates({0.3, 0.7}), PruneMethod::nm_group(2, 4)),
               DomainError);
}
