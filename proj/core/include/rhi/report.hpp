#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhi/config.hpp"
#include "rhi/metrics.hpp"

namespace rhi {

struct PairTranscript {
  CandidatePair pair;
  int truth = -1;      // -1 on unannotated data
  int predicted = 0;   // assignment output
  int known = -1;      // vote argmax over valid classes; truth-valid pairs only

  friend bool operator==(const PairTranscript&, const PairTranscript&) = default;
};

struct SegmentTranscript {
  std::string segment_id;
  std::int64_t windows = 0;
  std::int64_t objective = 0;
  std::vector<PairTranscript> pairs;

  friend bool operator==(const SegmentTranscript&, const SegmentTranscript&) = default;
};

struct FoldReport {
  int test_group = -1;  // -1 when evaluating a fixed model
  std::int64_t train_samples = 0;
  DetectionResult detection;
  AccuracyEstimate known_pairs;
  ConfusionMatrix confusion;  // all candidate pairs, null included
  std::vector<SegmentTranscript> transcripts;

  friend bool operator==(const FoldReport&, const FoldReport&) = default;
};

struct EvaluationReport {
  PipelineConfig config;
  std::vector<std::string> labels;  // id order, null first
  std::vector<FoldReport> folds;
  DetectionResult detection;  // pooled over folds
  AccuracyEstimate known_pairs;
  ConfusionMatrix confusion;
  std::optional<double> occlusion;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

inline constexpr const char* kReportFormat = "rhi-report 1";

// Machine-readable form; stable key order and shortest round-trip numbers.
std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json);

// Human-readable summary table.
std::string render_report_table(const EvaluationReport& report);

}  // namespace rhi
