#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rhi/core_model.hpp"
#include "rhi/matrix.hpp"

namespace rhi {

// Pairwise relations between the m local regions of two persons at one frame.
struct RelationMatrix {
  Matrix values;
  PersonId row_source;
  PersonId col_source;
  std::int64_t timestamp = 0;
};

// Fixed-length bit string; bit k lives in word k / 64, position k % 64.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  bool test(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
  void set(std::size_t k, bool value);
  std::span<const std::uint64_t> words() const { return words_; }
  std::string to_string() const;  // "1010...", bit 0 first

  static BitString from_string(const std::string& bits);

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming(const BitString& a, const BitString& b);

struct PixelOffset {
  double x = 0.0;  // fraction of cell width, relative to the cell centre
  double y = 0.0;  // fraction of cell height
  friend bool operator==(const PixelOffset&, const PixelOffset&) = default;
};

struct PixelPair {
  PixelOffset first;
  PixelOffset second;
  friend bool operator==(const PixelPair&, const PixelPair&) = default;
};

// P ordered pixel pairs shared by every cell, frame and video.
struct PixelPairPattern {
  std::vector<PixelPair> pairs;
  std::uint64_t seed = 0;
  double sigma2 = 0.25;

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const PixelPairPattern&, const PixelPairPattern&) = default;
};

// Offsets i.i.d. N(0, sigma2 / 25) in cell units, clamped to the cell.
PixelPairPattern make_pixel_pair_pattern(std::size_t pair_count, double sigma2, std::uint64_t seed);

// Read-only view of a rectangular depth region (row stride in pixels).
struct DepthView {
  std::span<const std::uint16_t> data;
  int width = 0;
  int height = 0;
  int stride = 0;
  int x0 = 0;
  int y0 = 0;

  double at(int x, int y) const;  // 0 (invalid) reads as kMaxDepth
};

inline constexpr double kMaxDepth = 65535.0;

DepthView whole_patch(const DepthPatch& patch);

// Extent of one grid cell inside a person crop.
struct CellExtent {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // exclusive
  int y1 = 0;  // exclusive
  friend bool operator==(const CellExtent&, const CellExtent&) = default;
};

// Binary strings for the m cells of one person's depth crop.
struct DepthPatchGrid {
  std::vector<CellExtent> cells;
  std::vector<BitString> cell_strings;
  std::int64_t timestamp = 0;
  PersonId person_id;
  std::size_t pattern_pairs = 0;
  std::uint64_t pattern_seed = 0;
};

struct DepthGridConfig {
  int rows = 4;
  int cols = 4;
  double epsilon = 30.0;
};

// R[i][j] = |a_i - b_j| over joints.
RelationMatrix joint_relation_matrix(const JointSet& a, const JointSet& b);

int tau_test(double depth_i, double depth_j);
int tau2_test(double depth_i, double depth_j, double epsilon);

// For every pattern pair emits the tau bit then the tau2 bit: 2P bits.
BitString cell_binary_string(const DepthView& cell, const PixelPairPattern& pattern, double epsilon);

std::vector<CellExtent> grid_cells(int width, int height, int rows, int cols);

DepthPatchGrid build_depth_grid(const DepthPatch& patch, const PixelPairPattern& pattern,
                                const DepthGridConfig& config, std::int64_t timestamp,
                                const PersonId& person);

// R[i][j] = Hamming(a.cell_i, b.cell_j).
RelationMatrix depth_relation_matrix(const DepthPatchGrid& a, const DepthPatchGrid& b);

}  // namespace rhi
