#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rhi/classifier.hpp"
#include "rhi/config.hpp"
#include "rhi/features.hpp"
#include "rhi/model_file.hpp"
#include "rhi/pair_assignment.hpp"
#include "rhi/report.hpp"
#include "rhi/stream_io.hpp"

namespace rhi {

// Recordings grouped for leave-one-group-out evaluation.
struct Dataset {
  std::uint64_t seed = 0;
  std::vector<int> group_ids;
  std::vector<std::vector<Scene>> groups;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

using Logger = std::function<void(const std::string&)>;

std::vector<Scene> generate_group_scenes(const BenchmarkGroup& group);
Dataset generate_dataset(const PipelineConfig& config);

// Writes group<k>.rhis files plus manifest.txt into `dir`.
void save_dataset(const std::string& dir, const Dataset& dataset);
// Accepts a manifest or a single stream file (loaded as group 0).
Dataset load_dataset(const std::string& path);

// Sorted valid label names found in the ground truth.
std::vector<std::string> collect_label_names(const std::vector<const Scene*>& scenes);

// Segments too short for a single window are skipped.
TrainedModel train_model(const PipelineConfig& config, const std::vector<const Scene*>& scenes,
                         const Logger& log = {}, std::int64_t* sample_count = nullptr);

struct SegmentAnalysis {
  VoteMatrix votes;
  AssignmentSolution solution;
  std::int64_t windows = 0;
};

SegmentAnalysis analyze_segment(const TrainedModel& model, const FeatureExtractor& extractor, const Segment& segment);

// Usable for both annotated and unannotated scenes; metrics need truth.
FoldReport evaluate_model(const TrainedModel& model, const std::vector<const Scene*>& scenes, int test_group,
                          const Logger& log = {});

// Leave-one-group-out over the first `max_folds` groups (all when <= 0).
EvaluationReport evaluate_logo(const PipelineConfig& config, const Dataset& dataset, int max_folds = 0,
                               const Logger& log = {});

// A fixed model applied to every scene of the dataset.
EvaluationReport evaluate_fixed(const TrainedModel& model, const Dataset& dataset, const Logger& log = {});

}  // namespace rhi
