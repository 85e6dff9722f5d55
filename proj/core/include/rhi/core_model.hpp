#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rhi {

inline constexpr int kDefaultJointCount = 25;
inline constexpr const char* kNullLabelName = "null";

using PersonId = std::string;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double norm(Vec3 v);
double distance(Vec3 a, Vec3 b);

// 3D joint positions of one person at one frame.
struct JointSet {
  std::vector<Vec3> positions;
  std::int64_t timestamp = 0;
  PersonId person_id;

  std::size_t joint_count() const { return positions.size(); }
  bool all_finite() const;

  friend bool operator==(const JointSet&, const JointSet&) = default;
};

// Axis-aligned 2D box in image pixels, [x0, x1) x [y0, y1).
struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double area() const;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b);

// Depth crop of one person's bounding box. Depth in millimetres; 0 = invalid.
struct DepthPatch {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> depth;

  std::uint16_t at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
  friend bool operator==(const DepthPatch&, const DepthPatch&) = default;
};

// Unordered pair of persons; self-pairs (a, a) stand for single-person
// activities. Canonical form keeps the smaller id first.
class CandidatePair {
 public:
  CandidatePair() = default;
  CandidatePair(PersonId a, PersonId b);

  const PersonId& first() const { return first_; }
  const PersonId& second() const { return second_; }
  bool is_self() const { return first_ == second_; }
  bool contains(const PersonId& p) const { return first_ == p || second_ == p; }
  std::string to_string() const;

  friend auto operator<=>(const CandidatePair&, const CandidatePair&) = default;

 private:
  PersonId first_;
  PersonId second_;
};

struct ClassLabel {
  int id = 0;
  std::string name;
  bool is_null = false;

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

// Ordered label set; label i has id i and exactly one label is null.
class LabelSet {
 public:
  LabelSet() = default;
  // The null label is inserted at id 0; `names` must not contain it.
  explicit LabelSet(const std::vector<std::string>& names);

  std::size_t size() const { return labels_.size(); }
  const ClassLabel& operator[](std::size_t id) const { return labels_.at(id); }
  const std::vector<ClassLabel>& labels() const { return labels_; }
  int null_id() const { return null_id_; }
  std::optional<int> find(const std::string& name) const;
  int id_of(const std::string& name) const;  // throws on unknown name

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<ClassLabel> labels_;
  int null_id_ = 0;
};

// Per-person data for every frame of a segment.
struct PersonTrack {
  std::vector<JointSet> joints;
  std::vector<DepthPatch> depth;     // empty or one per frame
  std::vector<BoundingBox> boxes;    // empty or one per frame

  friend bool operator==(const PersonTrack&, const PersonTrack&) = default;
};

// Contiguous frame range over which the person set and every pair's activity
// stay constant.
struct Segment {
  std::string id;
  std::int64_t start = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  std::vector<PersonId> persons;  // sorted ascending
  std::map<PersonId, PersonTrack> tracks;
  // Label name for every candidate pair; absent on unannotated data.
  std::optional<std::map<CandidatePair, std::string>> ground_truth;

  std::int64_t length() const { return end - start; }
  const PersonTrack& track(const PersonId& p) const;
  bool has_depth() const;
  bool has_boxes() const;

  // Checks complete per-person coverage and consistent shapes; throws a data
  // error describing the first problem found.
  void validate() const;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Self-pairs first (ascending id), then the cross pairs in lexicographic order.
std::vector<CandidatePair> enumerate_pairs(const std::set<PersonId>& persons);
std::vector<CandidatePair> enumerate_pairs(const std::vector<PersonId>& persons);

// n + n(n-1)/2 candidate descriptors for n persons.
std::int64_t descriptor_count(std::int64_t n);

}  // namespace rhi
