#pragma once

#include <vector>

#include "rhi/classifier.hpp"
#include "rhi/config.hpp"
#include "rhi/relation_descriptor.hpp"

namespace rhi {

// Turns segment/pair windows into classifier feature vectors for the
// configured descriptor kind ("both" concatenates joints then depth).
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const PipelineConfig& config);
  FeatureExtractor(const PipelineConfig& config, std::vector<int> mean_subset);

  const std::vector<int>& mean_subset() const { return mean_subset_; }
  const PixelPairPattern& pattern() const { return pattern_; }
  std::size_t feature_length() const;

  // One vector per window (stride 1 keeps every window start). Labels come
  // from the segment's ground truth when `labels` is given.
  std::vector<FeatureVector> extract(const Segment& segment, const CandidatePair& pair,
                                     const LabelSet* labels = nullptr, int stride = 1) const;

  // Columns in enumerate_pairs order.
  std::vector<std::vector<FeatureVector>> extract_all(const Segment& segment, const LabelSet* labels = nullptr,
                                                      int stride = 1) const;

 private:
  RhiConfig rhi_config(RelationKind kind) const;

  PipelineConfig config_;
  std::vector<int> mean_subset_;
  PixelPairPattern pattern_;
};

}  // namespace rhi
