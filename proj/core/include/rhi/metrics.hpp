#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rhi/classifier.hpp"
#include "rhi/core_model.hpp"
#include "rhi/stream_io.hpp"

namespace rhi {

using PairLabels = std::map<CandidatePair, int>;

// Detection outcome counts over candidate pairs.
//   tp        truth valid, predicted the same valid class
//   fp_class  truth valid, predicted a different valid class
//   fp_null   truth null, predicted valid
//   fn        truth valid, predicted null
//   tn        truth null, predicted null
struct DetectionCounts {
  std::int64_t tp = 0;
  std::int64_t fp_class = 0;
  std::int64_t fp_null = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  DetectionCounts& operator+=(const DetectionCounts& o);
  friend bool operator==(const DetectionCounts&, const DetectionCounts&) = default;
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const PrfScores&, const PrfScores&) = default;
};

// F1 = 2PR / (P + R), F2 = 5PR / (4P + R); zero when the denominator is zero.
double f1_score(double precision, double recall);
double f2_score(double precision, double recall);

// Precision tp / (tp + fp), recall tp / (tp + fn); an empty denominator gives 0.
PrfScores prf_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct DetectionResult {
  DetectionCounts counts;
  PrfScores standard;       // fp = fp_class + fp_null
  PrfScores literal;  // fp = fp_class only

  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

DetectionResult detection_result(const DetectionCounts& counts);

// Both maps must cover the same pairs.
DetectionCounts count_detections(const PairLabels& predicted, const PairLabels& truth, int null_class);

DetectionResult evaluate_detection(std::span<const PairLabels> predictions, std::span<const PairLabels> truth,
                                   int null_class);

// Rows are truth, columns predictions.
struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<std::int64_t> counts;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t n) : classes(n), counts(n * n, 0) {}

  std::int64_t& at(std::size_t truth, std::size_t predicted) { return counts.at(truth * classes + predicted); }
  std::int64_t at(std::size_t truth, std::size_t predicted) const { return counts.at(truth * classes + predicted); }
  std::int64_t row_sum(std::size_t truth) const;
  std::int64_t total() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Vote argmax over the valid classes of one column; ties go to the smallest id.
int known_pair_label(const VoteMatrix& votes, std::size_t column, int null_class);

struct AccuracyEstimate {
  std::int64_t correct = 0;
  std::int64_t total = 0;
  double accuracy = 0.0;
  double ci_low = 0.0;   // 2.5th bootstrap percentile
  double ci_high = 0.0;  // 97.5th bootstrap percentile

  friend bool operator==(const AccuracyEstimate&, const AccuracyEstimate&) = default;
};

// Percentile bootstrap over per-sample outcomes (1 correct, 0 wrong).
AccuracyEstimate bootstrap_accuracy(std::span<const std::uint8_t> outcomes, int resamples, std::uint64_t seed);

// Intersection over the larger box's area.
double box_overlap(const BoundingBox& a, const BoundingBox& b);

// Maximum box_overlap over frames and person pairs of one recording.
double video_occlusion(std::span<const Segment> segments);

// Mean of video_occlusion over recordings.
double occlusion_level(std::span<const Scene> videos);

}  // namespace rhi
