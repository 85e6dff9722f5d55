#include "rhi/features.hpp"

#include "rhi/error.hpp"
#include "rhi/temporal_rhi.hpp"

namespace rhi {

FeatureExtractor::FeatureExtractor(const PipelineConfig& config)
    : FeatureExtractor(config, choose_joint_subset(kDefaultJointCount, config.subset_size, config.subset_seed)) {}

FeatureExtractor::FeatureExtractor(const PipelineConfig& config, std::vector<int> mean_subset)
    : config_(config),
      mean_subset_(std::move(mean_subset)),
      pattern_(make_pixel_pair_pattern(static_cast<std::size_t>(config.pixel_pairs), config.pattern_sigma2,
                                       config.pattern_seed)) {
  validate_config(config_);
  if (mean_subset_.empty()) ThrowInvalid("mean-configuration subset is empty");
}

RhiConfig FeatureExtractor::rhi_config(RelationKind kind) const {
  RhiConfig c;
  c.kind = kind;
  c.window = config_.window;
  c.sigmas = config_.sigmas;
  if (kind == RelationKind::kJoints) c.mean_subset = mean_subset_;
  c.depth_grid.rows = config_.grid_rows;
  c.depth_grid.cols = config_.grid_cols;
  c.depth_grid.epsilon = config_.epsilon;
  c.pattern = &pattern_;
  return c;
}

std::size_t FeatureExtractor::feature_length() const {
  const std::size_t joints = kDefaultJointCount * kDefaultJointCount + mean_subset_.size() * mean_subset_.size();
  const auto cells = static_cast<std::size_t>(config_.grid_rows * config_.grid_cols);
  switch (config_.descriptor) {
    case DescriptorKind::kJoints: return joints;
    case DescriptorKind::kDepth: return cells * cells;
    case DescriptorKind::kBoth: return joints + cells * cells;
  }
  return 0;
}

std::vector<FeatureVector> FeatureExtractor::extract(const Segment& segment, const CandidatePair& pair,
                                                     const LabelSet* labels, int stride) const {
  if (stride < 1) ThrowInvalid("window stride must be positive");
  int label = -1;
  if (labels != nullptr) {
    if (!segment.ground_truth) ThrowData("segment " + segment.id + " has no ground truth");
    const auto it = segment.ground_truth->find(pair);
    if (it == segment.ground_truth->end()) {
      ThrowData("segment " + segment.id + ": no ground truth for pair " + pair.to_string());
    }
    label = labels->id_of(it->second);
  }

  std::vector<RhiDescriptor> joints;
  std::vector<RhiDescriptor> depth;
  if (config_.descriptor != DescriptorKind::kDepth) {
    joints = extract_rhi_stream(segment, pair, rhi_config(RelationKind::kJoints));
  }
  if (config_.descriptor != DescriptorKind::kJoints) {
    depth = extract_rhi_stream(segment, pair, rhi_config(RelationKind::kDepth));
  }
  const std::size_t windows = config_.descriptor == DescriptorKind::kDepth ? depth.size() : joints.size();

  std::vector<FeatureVector> out;
  out.reserve(windows / static_cast<std::size_t>(stride) + 1);
  for (std::size_t w = 0; w < windows; w += static_cast<std::size_t>(stride)) {
    FeatureVector fv;
    fv.values.reserve(feature_length());
    if (!joints.empty()) joints[w].append_to(fv.values);
    if (!depth.empty()) depth[w].append_to(fv.values);
    fv.label = label;
    fv.pair = pair;
    fv.segment_id = segment.id;
    fv.window_start = segment.start + static_cast<std::int64_t>(w);
    out.push_back(std::move(fv));
  }
  return out;
}

std::vector<std::vector<FeatureVector>> FeatureExtractor::extract_all(const Segment& segment, const LabelSet* labels,
                                                                      int stride) const {
  std::vector<std::vector<FeatureVector>> out;
  for (const CandidatePair& pair : enumerate_pairs(segment.persons)) out.push_back(extract(segment, pair, labels, stride));
  return out;
}

}  // namespace rhi
