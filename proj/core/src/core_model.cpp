#include "rhi/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "rhi/error.hpp"

namespace rhi {

double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double distance(Vec3 a, Vec3 b) { return norm(a - b); }

bool JointSet::all_finite() const {
  return std::all_of(positions.begin(), positions.end(), [](const Vec3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
  });
}

double BoundingBox::area() const {
  return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0);
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

CandidatePair::CandidatePair(PersonId a, PersonId b) {
  if (b < a) std::swap(a, b);
  first_ = std::move(a);
  second_ = std::move(b);
}

std::string CandidatePair::to_string() const { return "(" + first_ + "," + second_ + ")"; }

LabelSet::LabelSet(const std::vector<std::string>& names) {
  labels_.push_back(ClassLabel{0, kNullLabelName, true});
  for (const auto& name : names) {
    if (name == kNullLabelName) ThrowInvalid("label set: the null label is implicit");
    if (find(name)) ThrowInvalid("label set: duplicate label '" + name + "'");
    labels_.push_back(ClassLabel{static_cast<int>(labels_.size()), name, false});
  }
}

std::optional<int> LabelSet::find(const std::string& name) const {
  for (const auto& l : labels_) {
    if (l.name == name) return l.id;
  }
  return std::nullopt;
}

int LabelSet::id_of(const std::string& name) const {
  auto id = find(name);
  if (!id) ThrowData("unknown activity label '" + name + "'");
  return *id;
}

const PersonTrack& Segment::track(const PersonId& p) const {
  auto it = tracks.find(p);
  if (it == tracks.end()) ThrowData("segment " + id + ": no track for person " + p);
  return it->second;
}

bool Segment::has_depth() const {
  return !tracks.empty() && std::all_of(tracks.begin(), tracks.end(), [](const auto& kv) {
    return !kv.second.depth.empty();
  });
}

bool Segment::has_boxes() const {
  return !tracks.empty() && std::all_of(tracks.begin(), tracks.end(), [](const auto& kv) {
    return !kv.second.boxes.empty();
  });
}

void Segment::validate() const {
  const std::string where = "segment " + id + ": ";
  if (end <= start) ThrowData(where + "empty frame range");
  if (persons.empty()) ThrowData(where + "no persons");
  if (!std::is_sorted(persons.begin(), persons.end()) ||
      std::adjacent_find(persons.begin(), persons.end()) != persons.end()) {
    ThrowData(where + "person list must be sorted and unique");
  }
  if (tracks.size() != persons.size()) ThrowData(where + "track count does not match person count");
  const auto frames = static_cast<std::size_t>(length());
  std::size_t joint_count = 0;
  for (const auto& p : persons) {
    const PersonTrack& t = track(p);
    if (t.joints.size() != frames) {
      ThrowData(where + "person " + p + " has " + std::to_string(t.joints.size()) +
                " joint frames, expected " + std::to_string(frames));
    }
    for (std::size_t f = 0; f < frames; ++f) {
      const JointSet& js = t.joints[f];
      const auto expected = start + static_cast<std::int64_t>(f);
      if (js.timestamp != expected) {
        ThrowData(where + "person " + p + " missing frame " + std::to_string(expected));
      }
      if (js.person_id != p) ThrowData(where + "joint set person id mismatch for " + p);
      if (!js.all_finite()) {
        ThrowData(where + "non-finite joint for person " + p + " at frame " + std::to_string(expected));
      }
      if (joint_count == 0) joint_count = js.joint_count();
      if (js.joint_count() != joint_count || joint_count == 0) {
        ThrowData(where + "inconsistent joint count for person " + p);
      }
    }
    if (!t.depth.empty() && t.depth.size() != frames) ThrowData(where + "incomplete depth for " + p);
    if (!t.boxes.empty() && t.boxes.size() != frames) ThrowData(where + "incomplete boxes for " + p);
  }
  if (ground_truth) {
    const auto pairs = enumerate_pairs(persons);
    if (ground_truth->size() != pairs.size()) ThrowData(where + "ground truth does not cover every pair");
    for (const auto& pair : pairs) {
      if (!ground_truth->contains(pair)) ThrowData(where + "ground truth missing pair " + pair.to_string());
    }
  }
}

std::vector<CandidatePair> enumerate_pairs(const std::set<PersonId>& persons) {
  if (persons.empty()) ThrowInvalid("no persons");
  std::vector<CandidatePair> out;
  out.reserve(static_cast<std::size_t>(descriptor_count(static_cast<std::int64_t>(persons.size()))));
  for (const auto& p : persons) out.emplace_back(p, p);
  for (auto i = persons.begin(); i != persons.end(); ++i) {
    for (auto j = std::next(i); j != persons.end(); ++j) out.emplace_back(*i, *j);
  }
  return out;
}

std::vector<CandidatePair> enumerate_pairs(const std::vector<PersonId>& persons) {
  std::set<PersonId> s(persons.begin(), persons.end());
  if (s.size() != persons.size()) ThrowInvalid("duplicate person id");
  return enumerate_pairs(s);
}

std::int64_t descriptor_count(std::int64_t n) {
  if (n < 1) ThrowInvalid("descriptor_count requires n >= 1");
  return n + n * (n - 1) / 2;
}

}  // namespace rhi
