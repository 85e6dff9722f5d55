#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhi/core_model.hpp"

namespace rhi {

enum class ActivityType { kSingle, kInteraction, kRobotDirected };

std::string to_string(ActivityType t);

// Kinematic sketch of one activity. Interaction templates drive two persons.
struct MotionTemplate {
  std::string name;
  ActivityType type = ActivityType::kSingle;
  int min_frames = 40;
  int max_frames = 80;

  int persons() const { return type == ActivityType::kInteraction ? 2 : 1; }
};

const std::vector<MotionTemplate>& standard_templates();
const MotionTemplate& find_template(const std::string& name);
std::vector<std::string> standard_label_names();

// Group-level variation applied on top of every template.
struct MotionStyle {
  double amplitude_scale = 1.0;
  double frequency_scale = 1.0;
  double body_scale = 1.0;
  double noise_sigma = 0.015;  // per-joint Gaussian noise, metres
};

struct TimelineEntry {
  CandidatePair pair;
  std::string template_name;
  std::int64_t start = 0;  // inclusive frame
  std::int64_t end = 0;    // exclusive frame
};

struct SceneScript {
  std::string id = "scene";
  std::vector<PersonId> persons;
  std::vector<TimelineEntry> timeline;
  std::uint64_t seed = 0;
  double frame_rate = 20.0;
  MotionStyle style;
  bool with_depth = false;
  bool with_boxes = true;
};

// Segments split at every timeline change point, each with full per-person
// data and ground truth for every candidate pair (unlisted pairs are null).
std::vector<Segment> generate_scene(const SceneScript& script);

// Number of distinct segments generate_scene will produce.
std::size_t timeline_segment_count(const SceneScript& script);

struct BenchmarkOptions {
  int groups = 5;
  int persons_per_group = 5;
  int sequences = 12;  // every group performs the same sequences
  int min_persons = 2;
  int max_persons = 5;
  int min_phases = 2;
  int max_phases = 4;
  int min_phase_frames = 40;
  int max_phase_frames = 80;
  double noise_sigma = 0.015;
  bool with_depth = false;
  bool with_boxes = true;
};

struct BenchmarkGroup {
  int index = 0;
  MotionStyle style;
  std::vector<PersonId> persons;
  std::vector<SceneScript> scenes;
};

struct Fold {
  int test_group = 0;
  std::vector<int> train_groups;
};

struct Benchmark {
  std::uint64_t seed = 0;
  BenchmarkOptions options;
  std::vector<BenchmarkGroup> groups;

  // Leave-one-group-out.
  std::vector<Fold> folds() const;
};

Benchmark standard_benchmark(std::uint64_t seed, const BenchmarkOptions& options = {});

// Camera model used for boxes and depth crops (512 x 424 depth frame).
struct CameraModel {
  double fx = 365.0;
  double fy = 365.0;
  double cx = 256.0;
  double cy = 212.0;
  double floor_y = -1.2;  // camera height above the floor, negated
  int width = 512;
  int height = 424;
};

}  // namespace rhi
