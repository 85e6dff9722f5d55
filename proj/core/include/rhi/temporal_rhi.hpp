#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rhi/core_model.hpp"
#include "rhi/matrix.hpp"
#include "rhi/relation_descriptor.hpp"

namespace rhi {

inline constexpr int kFilterCount = 3;

// slices[f] = R[t + f + 1] - R[t] for f in [0, F - 2].
struct DifferenceTensor {
  std::vector<Matrix> slices;
  std::int64_t window_start = 0;
  int window_length = 0;
};

// Three unnormalised 1D Gaussians over the slice axis, centred at (F - 1) / 2.
struct GaussianFilterBank {
  std::array<double, kFilterCount> sigmas{};  // variances, each in (0, 1)
  std::vector<std::vector<double>> taps;      // kFilterCount x (F - 1)
  int window_length = 0;

  // Sum of the three filters' taps; assemble_rhi collapses to this.
  std::vector<double> combined_taps() const;
};

struct RhiDescriptor {
  Matrix matrix;
  std::optional<Matrix> mean_block;  // joint-based descriptors only
  CandidatePair pair;
  std::int64_t window_start = 0;

  std::size_t feature_length() const;
  // Row-major matrix, then row-major mean block.
  std::vector<double> flatten() const;
  void append_to(std::vector<double>& out) const;
};

enum class RelationKind { kJoints, kDepth };

struct RhiConfig {
  RelationKind kind = RelationKind::kJoints;
  int window = 5;
  std::array<double, kFilterCount> sigmas{0.2, 0.5, 0.8};
  std::vector<int> mean_subset;  // joint indices; joints only
  // Depth only.
  DepthGridConfig depth_grid;
  const PixelPairPattern* pattern = nullptr;
};

DifferenceTensor difference_tensor(std::span<const RelationMatrix> window);

GaussianFilterBank build_filter_bank(int window_length, const std::array<double, kFilterCount>& sigmas);

Matrix assemble_rhi(const DifferenceTensor& tensor, const GaussianFilterBank& bank);

Matrix mean_configuration(std::span<const RelationMatrix> window, std::span<const int> subset);

// `size` distinct joint indices from [0, joint_count), sorted, drawn from `seed`.
std::vector<int> choose_joint_subset(int joint_count, int size, std::uint64_t seed);

// Per-frame relation matrices for `pair` over the whole segment.
std::vector<RelationMatrix> relation_sequence(const Segment& segment, const CandidatePair& pair,
                                              const RhiConfig& config);

// One descriptor per window start t in [0, T - F); empty when T == F.
std::vector<RhiDescriptor> extract_rhi_stream(const Segment& segment, const CandidatePair& pair,
                                              const RhiConfig& config);

}  // namespace rhi
