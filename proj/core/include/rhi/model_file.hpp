#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rhi/classifier.hpp"
#include "rhi/config.hpp"

namespace rhi {

// Everything needed to reproduce inference: the descriptor and training
// config, the persisted mean-configuration subset, and the classifier.
struct TrainedModel {
  PipelineConfig config;
  std::vector<int> mean_subset;
  PairwiseModel classifier;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

// "rhi-model 1" text container closed by an FNV-1a checksum line, so
// truncation and corruption are both rejected on load.
void write_model(std::ostream& os, const TrainedModel& model);
std::string model_to_string(const TrainedModel& model);
TrainedModel read_model(std::istream& is, const std::string& source = "model");

void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

}  // namespace rhi
