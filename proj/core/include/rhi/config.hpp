#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "rhi/binary_svm.hpp"
#include "rhi/synth_scene.hpp"
#include "rhi/temporal_rhi.hpp"

namespace rhi {

enum class DescriptorKind { kJoints, kDepth, kBoth };

std::string to_string(DescriptorKind k);
DescriptorKind parse_descriptor_kind(const std::string& s);

// Everything that determines pipeline output. Serialised verbatim into model
// files and reports.
struct PipelineConfig {
  DescriptorKind descriptor = DescriptorKind::kJoints;
  int window = 5;
  std::array<double, kFilterCount> sigmas{0.2, 0.5, 0.8};
  // Depth grid.
  int grid_rows = 4;
  int grid_cols = 4;
  int pixel_pairs = 64;
  double epsilon = 30.0;
  double pattern_sigma2 = 0.25;
  std::uint64_t pattern_seed = 7;
  // Mean-configuration block.
  int subset_size = 8;
  std::uint64_t subset_seed = 11;
  // Classifier.
  SvmParams svm;
  int train_stride = 3;  // window stride when collecting training samples
  // Benchmark and evaluation.
  std::uint64_t seed = 42;
  int groups = 5;
  int sequences = 12;
  double noise = 0.015;
  int bootstrap = 1000;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Flat "key = value" text with a leading "rhi-config 1" line; '#' starts a
// comment. Missing keys keep their defaults.
void write_config(std::ostream& os, const PipelineConfig& config);
std::string config_to_string(const PipelineConfig& config);
PipelineConfig read_config(std::istream& is, const std::string& source = "config");
PipelineConfig load_config(const std::string& path);

// Throws kInvalidArgument on out-of-range values.
void validate_config(const PipelineConfig& config);

BenchmarkOptions benchmark_options(const PipelineConfig& config);

}  // namespace rhi
