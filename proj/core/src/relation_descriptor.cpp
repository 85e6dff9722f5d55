#include "rhi/relation_descriptor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "rhi/error.hpp"

namespace rhi {

void BitString::set(std::size_t k, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (value) {
    words_[k / 64] |= mask;
  } else {
    words_[k / 64] &= ~mask;
  }
}

std::string BitString::to_string() const {
  std::string s(bits_, '0');
  for (std::size_t k = 0; k < bits_; ++k) {
    if (test(k)) s[k] = '1';
  }
  return s;
}

BitString BitString::from_string(const std::string& bits) {
  BitString out(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1') ThrowInvalid("bit string may only contain 0 and 1");
    out.set(k, bits[k] == '1');
  }
  return out;
}

std::size_t hamming(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) ThrowInvalid("hamming: bit strings differ in length");
  std::size_t count = 0;
  auto aw = a.words();
  auto bw = b.words();
  for (std::size_t i = 0; i < aw.size(); ++i) count += static_cast<std::size_t>(std::popcount(aw[i] ^ bw[i]));
  return count;
}

PixelPairPattern make_pixel_pair_pattern(std::size_t pair_count, double sigma2, std::uint64_t seed) {
  if (pair_count == 0) ThrowInvalid("pixel pair pattern needs at least one pair");
  if (!(sigma2 > 0.0)) ThrowInvalid("pixel pair pattern variance must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 25.0));
  auto draw = [&] { return std::clamp(gauss(rng), -0.5, 0.5); };
  PixelPairPattern pattern;
  pattern.seed = seed;
  pattern.sigma2 = sigma2;
  pattern.pairs.reserve(pair_count);
  for (std::size_t k = 0; k < pair_count; ++k) {
    PixelPair p;
    p.first.x = draw();
    p.first.y = draw();
    p.second.x = draw();
    p.second.y = draw();
    pattern.pairs.push_back(p);
  }
  return pattern;
}

double DepthView::at(int x, int y) const {
  const std::uint16_t d = data[static_cast<std::size_t>(y0 + y) * stride + (x0 + x)];
  return d == 0 ? kMaxDepth : static_cast<double>(d);
}

DepthView whole_patch(const DepthPatch& patch) {
  if (patch.depth.size() != static_cast<std::size_t>(patch.width) * patch.height) {
    ThrowInvalid("depth patch size does not match its dimensions");
  }
  return DepthView{patch.depth, patch.width, patch.height, patch.width, 0, 0};
}

RelationMatrix joint_relation_matrix(const JointSet& a, const JointSet& b) {
  if (a.joint_count() != b.joint_count()) ThrowInvalid("joint_relation_matrix: joint count mismatch");
  if (a.timestamp != b.timestamp) ThrowInvalid("joint_relation_matrix: timestamp mismatch");
  const std::size_t m = a.joint_count();
  RelationMatrix r{Matrix(m, m), a.person_id, b.person_id, a.timestamp};
  if (a.person_id == b.person_id) {
    // Intra-person: fill the upper triangle and mirror, keeping exact symmetry.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double d = distance(a.positions[i], a.positions[j]);
        r.values(i, j) = d;
        r.values(j, i) = d;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) r.values(i, j) = distance(a.positions[i], b.positions[j]);
    }
  }
  return r;
}

int tau_test(double depth_i, double depth_j) {
  if (!std::isfinite(depth_i) || !std::isfinite(depth_j)) ThrowInvalid("tau_test: non-finite depth");
  return depth_i > depth_j ? 1 : 0;
}

int tau2_test(double depth_i, double depth_j, double epsilon) {
  if (!(epsilon > 0.0)) ThrowInvalid("tau2_test: epsilon must be positive");
  if (!std::isfinite(depth_i) || !std::isfinite(depth_j)) ThrowInvalid("tau2_test: non-finite depth");
  return std::abs(depth_i - depth_j) < epsilon ? 1 : 0;
}

namespace {

int to_pixel(double offset, int extent) {
  const double centre = (extent - 1) / 2.0;
  const auto px = static_cast<int>(std::lround(centre + offset * extent));
  return std::clamp(px, 0, extent - 1);
}

}  // namespace

BitString cell_binary_string(const DepthView& cell, const PixelPairPattern& pattern, double epsilon) {
  if (cell.width < 1 || cell.height < 1) ThrowInvalid("cell_binary_string: patch smaller than 1x1");
  if (pattern.pairs.empty()) ThrowInvalid("cell_binary_string: empty pattern");
  if (!(epsilon > 0.0)) ThrowInvalid("cell_binary_string: epsilon must be positive");
  BitString bits(2 * pattern.pairs.size());
  for (std::size_t k = 0; k < pattern.pairs.size(); ++k) {
    const PixelPair& p = pattern.pairs[k];
    const double di = cell.at(to_pixel(p.first.x, cell.width), to_pixel(p.first.y, cell.height));
    const double dj = cell.at(to_pixel(p.second.x, cell.width), to_pixel(p.second.y, cell.height));
    bits.set(2 * k, di > dj);
    bits.set(2 * k + 1, std::abs(di - dj) < epsilon);
  }
  return bits;
}

std::vector<CellExtent> grid_cells(int width, int height, int rows, int cols) {
  if (rows < 1 || cols < 1) ThrowInvalid("grid_cells: grid must be at least 1x1");
  if (width < cols || height < rows) ThrowInvalid("grid_cells: crop smaller than the cell grid");
  std::vector<CellExtent> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      cells.push_back(CellExtent{c * width / cols, r * height / rows, (c + 1) * width / cols,
                                 (r + 1) * height / rows});
    }
  }
  return cells;
}

DepthPatchGrid build_depth_grid(const DepthPatch& patch, const PixelPairPattern& pattern,
                                const DepthGridConfig& config, std::int64_t timestamp,
                                const PersonId& person) {
  const DepthView whole = whole_patch(patch);
  DepthPatchGrid grid;
  grid.cells = grid_cells(patch.width, patch.height, config.rows, config.cols);
  grid.timestamp = timestamp;
  grid.person_id = person;
  grid.pattern_pairs = pattern.size();
  grid.pattern_seed = pattern.seed;
  grid.cell_strings.reserve(grid.cells.size());
  for (const CellExtent& c : grid.cells) {
    DepthView view = whole;
    view.x0 = c.x0;
    view.y0 = c.y0;
    view.width = c.x1 - c.x0;
    view.height = c.y1 - c.y0;
    grid.cell_strings.push_back(cell_binary_string(view, pattern, config.epsilon));
  }
  return grid;
}

RelationMatrix depth_relation_matrix(const DepthPatchGrid& a, const DepthPatchGrid& b) {
  if (a.cell_strings.size() != b.cell_strings.size() || a.cell_strings.empty()) {
    ThrowInvalid("depth_relation_matrix: cell count mismatch");
  }
  if (a.pattern_pairs != b.pattern_pairs || a.pattern_seed != b.pattern_seed) {
    ThrowInvalid("depth_relation_matrix: grids built with different pixel patterns");
  }
  if (a.timestamp != b.timestamp) ThrowInvalid("depth_relation_matrix: timestamp mismatch");
  const std::size_t m = a.cell_strings.size();
  RelationMatrix r{Matrix(m, m), a.person_id, b.person_id, a.timestamp};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      r.values(i, j) = static_cast<double>(hamming(a.cell_strings[i], b.cell_strings[j]));
    }
  }
  return r;
}

}  // namespace rhi
