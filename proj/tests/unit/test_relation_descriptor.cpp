#include <gtest/gtest.h>

#include <cmath>

#include "rhi/error.hpp"
#include "rhi/relation_descriptor.hpp"
#include "test_support.hpp"

namespace rhi {
namespace {

using testing::brute_distance;
using testing::random_joints;
using testing::random_patch;

TEST(JointRelation, UnitDisplacement) {
  JointSet a{{{0, 0, 0}, {1, 0, 0}}, 0, "A"};
  const RelationMatrix r = joint_relation_matrix(a, a);
  EXPECT_EQ(r.values(0, 0), 0.0);
  EXPECT_EQ(r.values(0, 1), 1.0);
  EXPECT_EQ(r.values(1, 0), 1.0);
  EXPECT_EQ(r.values(1, 1), 0.0);
}

TEST(JointRelation, MatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const JointSet a = random_joints(rng, 25, 7, "A");
    const JointSet b = random_joints(rng, 25, 7, "B");
    const RelationMatrix r = joint_relation_matrix(a, b);
    EXPECT_EQ(r.row_source, "A");
    EXPECT_EQ(r.col_source, "B");
    for (std::size_t i = 0; i < 25; ++i) {
      for (std::size_t j = 0; j < 25; ++j) {
        EXPECT_NEAR(r.values(i, j), brute_distance(a.positions[i], b.positions[j]), 1e-12);
      }
    }
  }
}

TEST(JointRelation, SelfIsSymmetricWithZeroDiagonal) {
  std::mt19937_64 rng(12);
  const JointSet a = random_joints(rng, 25, 0, "A");
  const RelationMatrix r = joint_relation_matrix(a, a);
  EXPECT_TRUE(r.values.is_symmetric(0.0));
  for (std::size_t i = 0; i < 25; ++i) EXPECT_EQ(r.values(i, i), 0.0);
}

TEST(JointRelation, TriangleInequality) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const JointSet a = random_joints(rng, 25, 0, "A");
    const Matrix& m = joint_relation_matrix(a, a).values;
    for (std::size_t i = 0; i < 25; ++i) {
      for (std::size_t j = 0; j < 25; ++j) {
        for (std::size_t k = 0; k < 25; ++k) EXPECT_LE(m(i, k), m(i, j) + m(j, k) + 1e-12);
      }
    }
  }
}

TEST(JointRelation, TranslationInvariant) {
  std::mt19937_64 rng(14);
  JointSet a = random_joints(rng, 25, 3, "A");
  JointSet b = random_joints(rng, 25, 3, "B");
  const RelationMatrix before = joint_relation_matrix(a, b);
  const Vec3 shift{0.7, -1.3, 2.1};
  for (Vec3& v : a.positions) v = v + shift;
  for (Vec3& v : b.positions) v = v + shift;
  EXPECT_LE(max_abs_difference(joint_relation_matrix(a, b).values, before.values), 1e-12);
}

TEST(JointRelation, MismatchErrors) {
  std::mt19937_64 rng(15);
  const JointSet a = random_joints(rng, 25, 3, "A");
  EXPECT_THROW(joint_relation_matrix(a, random_joints(rng, 24, 3, "B")), Error);
  EXPECT_THROW(joint_relation_matrix(a, random_joints(rng, 25, 4, "B")), Error);
}

TEST(TauTests, Examples) {
  EXPECT_EQ(tau_test(5, 3), 1);
  EXPECT_EQ(tau_test(3, 5), 0);
  EXPECT_EQ(tau_test(4, 4), 0);
  EXPECT_EQ(tau2_test(5, 3, 1.0), 0);
  EXPECT_EQ(tau2_test(4.1, 4.0, 0.5), 1);
  EXPECT_EQ(tau2_test(4, 4, 0.01), 1);
  EXPECT_THROW(tau2_test(4, 4, 0.0), Error);
  EXPECT_THROW(tau2_test(4, 4, -1.0), Error);
  EXPECT_THROW(tau_test(std::nan(""), 1.0), Error);
  EXPECT_THROW(tau_test(1.0, INFINITY), Error);
}

PixelPairPattern one_pair(PixelOffset a, PixelOffset b) {
  PixelPairPattern p;
  p.pairs.push_back({a, b});
  return p;
}

TEST(CellString, ConstantPatchAlternates) {
  DepthPatch patch{8, 8, std::vector<std::uint16_t>(64, 1200)};
  const PixelPairPattern pattern = make_pixel_pair_pattern(16, 0.25, 5);
  const BitString s = cell_binary_string(whole_patch(patch), pattern, 30.0);
  std::string expected;
  for (int k = 0; k < 16; ++k) expected += "01";
  EXPECT_EQ(s.to_string(), expected);
}

TEST(CellString, KnownPixels) {
  // 3x1 patch: left pixel 7, right pixel 2.
  DepthPatch patch{3, 1, {7, 5, 2}};
  const auto pattern = one_pair({-0.5, 0.0}, {0.5, 0.0});
  EXPECT_EQ(cell_binary_string(whole_patch(patch), pattern, 1.0).to_string(), "10");
}

TEST(CellString, ZeroDepthReadsAsFar) {
  DepthPatch patch{3, 1, {0, 5, 2}};
  const auto pattern = one_pair({-0.5, 0.0}, {0.5, 0.0});
  EXPECT_EQ(cell_binary_string(whole_patch(patch), pattern, 1.0).to_string(), "10");
  DepthPatch far{3, 1, {65535, 5, 0}};
  EXPECT_EQ(cell_binary_string(whole_patch(far), pattern, 1.0).to_string(), "01");
}

TEST(CellString, MatchesPerPairOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 30);
    const int h = 1 + static_cast<int>(rng() % 30);
    const DepthPatch patch = random_patch(rng, w, h, 300, 0.1);
    const PixelPairPattern pattern = make_pixel_pair_pattern(32, 0.25, rng());
    const double eps = testing::uniform(rng, 1.0, 80.0);
    const BitString s = cell_binary_string(whole_patch(patch), pattern, eps);
    ASSERT_EQ(s.size(), 64u);
    auto pixel = [](double off, int extent) {
      long v = std::lround((extent - 1) * 0.5 + off * extent);
      if (v < 0) v = 0;
      if (v > extent - 1) v = extent - 1;
      return static_cast<int>(v);
    };
    auto depth = [&](int x, int y) {
      const std::uint16_t d = patch.depth[static_cast<std::size_t>(y * w + x)];
      return d == 0 ? 65535.0 : static_cast<double>(d);
    };
    for (std::size_t k = 0; k < 32; ++k) {
      const PixelPair& p = pattern.pairs[k];
      const double di = depth(pixel(p.first.x, w), pixel(p.first.y, h));
      const double dj = depth(pixel(p.second.x, w), pixel(p.second.y, h));
      EXPECT_EQ(s.test(2 * k), di > dj);
      EXPECT_EQ(s.test(2 * k + 1), std::fabs(di - dj) < eps);
    }
    EXPECT_EQ(s, cell_binary_string(whole_patch(patch), pattern, eps));
  }
}

TEST(CellString, Errors) {
  DepthPatch empty{0, 0, {}};
  const auto pattern = make_pixel_pair_pattern(4, 0.25, 1);
  EXPECT_THROW(cell_binary_string(whole_patch(empty), pattern, 1.0), Error);
  DepthPatch one{1, 1, {5}};
  EXPECT_THROW(cell_binary_string(whole_patch(one), pattern, 0.0), Error);
  EXPECT_EQ(cell_binary_string(whole_patch(one), pattern, 1.0).size(), 8u);
}

TEST(PixelPattern, DeterministicClampedAndScaled) {
  const PixelPairPattern a = make_pixel_pair_pattern(20000, 0.25, 99);
  EXPECT_EQ(a, make_pixel_pair_pattern(20000, 0.25, 99));
  EXPECT_NE(a, make_pixel_pair_pattern(20000, 0.25, 100));
  ASSERT_EQ(a.size(), 20000u);
  double sum2 = 0.0;
  for (const PixelPair& p : a.pairs) {
    for (double v : {p.first.x, p.first.y, p.second.x, p.second.y}) {
      EXPECT_LE(std::fabs(v), 0.5);
      sum2 += v * v;
    }
  }
  // Variance sigma^2 / 25 = 0.01; clamping at 5 sd is negligible.
  EXPECT_NEAR(sum2 / 80000.0, 0.01, 0.0005);
}

TEST(BitStrings, Hamming) {
  EXPECT_EQ(hamming(BitString::from_string("1010"), BitString::from_string("1110")), 1u);
  const std::string long_a(130, '1');
  std::string long_b = long_a;
  long_b[0] = '0';
  long_b[64] = '0';
  long_b[129] = '0';
  EXPECT_EQ(hamming(BitString::from_string(long_a), BitString::from_string(long_b)), 3u);
  EXPECT_EQ(BitString::from_string("0110").to_string(), "0110");
}

TEST(GridCells, TileWithoutOverlap) {
  for (auto [w, h] : {std::pair{4, 4}, std::pair{17, 33}, std::pair{100, 7}}) {
    const auto cells = grid_cells(w, h, 4, 4);
    ASSERT_EQ(cells.size(), 16u);
    std::vector<int> cover(static_cast<std::size_t>(w * h), 0);
    for (const CellExtent& c : cells) {
      EXPECT_LT(c.x0, c.x1);
      EXPECT_LT(c.y0, c.y1);
      for (int y = c.y0; y < c.y1; ++y) {
        for (int x = c.x0; x < c.x1; ++x) ++cover[static_cast<std::size_t>(y * w + x)];
      }
    }
    for (int v : cover) EXPECT_EQ(v, 1);
  }
  EXPECT_THROW(grid_cells(3, 10, 4, 4), Error);
}

TEST(DepthRelation, MatchesXorPopcountOracle) {
  std::mt19937_64 rng(31);
  const PixelPairPattern pattern = make_pixel_pair_pattern(64, 0.25, 7);
  for (int trial = 0; trial < 20; ++trial) {
    const DepthGridConfig cfg;
    const DepthPatchGrid a = build_depth_grid(random_patch(rng, 40, 80), pattern, cfg, 5, "A");
    const DepthPatchGrid b = build_depth_grid(random_patch(rng, 30, 60), pattern, cfg, 5, "B");
    ASSERT_EQ(a.cell_strings.size(), 16u);
    const RelationMatrix r = depth_relation_matrix(a, b);
    const RelationMatrix rt = depth_relation_matrix(b, a);
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t j = 0; j < 16; ++j) {
        const std::string x = a.cell_strings[i].to_string();
        const std::string y = b.cell_strings[j].to_string();
        ASSERT_EQ(x.size(), 128u);
        int diff = 0;
        for (std::size_t k = 0; k < x.size(); ++k) diff += x[k] != y[k] ? 1 : 0;
        EXPECT_EQ(r.values(i, j), diff);
        EXPECT_LE(r.values(i, j), 128.0);
        EXPECT_EQ(r.values(i, j), rt.values(j, i));
      }
    }
    const RelationMatrix self = depth_relation_matrix(a, a);
    EXPECT_TRUE(self.values.is_symmetric(0.0));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(self.values(i, i), 0.0);
  }
}

TEST(DepthRelation, MismatchedConfigurationErrors) {
  std::mt19937_64 rng(32);
  const DepthGridConfig cfg;
  const DepthPatch patch = random_patch(rng, 20, 20);
  const auto a = build_depth_grid(patch, make_pixel_pair_pattern(64, 0.25, 1), cfg, 0, "A");
  EXPECT_THROW(depth_relation_matrix(a, build_depth_grid(patch, make_pixel_pair_pattern(64, 0.25, 2), cfg, 0, "B")),
               Error);
  EXPECT_THROW(depth_relation_matrix(a, build_depth_grid(patch, make_pixel_pair_pattern(32, 0.25, 1), cfg, 0, "B")),
               Error);
  EXPECT_THROW(depth_relation_matrix(a, build_depth_grid(patch, make_pixel_pair_pattern(64, 0.25, 1), cfg, 1, "B")),
               Error);
  DepthGridConfig small;
  small.rows = 2;
  EXPECT_THROW(
      depth_relation_matrix(a, build_depth_grid(patch, make_pixel_pair_pattern(64, 0.25, 1), small, 0, "B")), Error);
}

}  // namespace
}  // namespace rhi
