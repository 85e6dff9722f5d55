#include "rhi/synth_scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "rhi/body_model.hpp"
#include "rhi/error.hpp"

namespace rhi {

namespace {

using body::BodyPose;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Random helpers. Plain arithmetic on the engine output keeps integer and
// uniform draws identical across standard library implementations.

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ull * (a + 1)) ^ (0xC2B2AE3D27D4EB4Full * (b + 7));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// ---------------------------------------------------------------------------
// Templates.

enum class Motion {
  kSit, kStandUp, kWalk, kRun,
  kWaveRobot, kPointRobot, kGrabRobot, kTalkRobot,
  kApproach, kHug, kShakeHands, kPush,
};

struct TemplateEntry {
  MotionTemplate info;
  Motion motion;
};

const std::vector<TemplateEntry>& template_table() {
  static const std::vector<TemplateEntry> kTable = {
      {{"sit", ActivityType::kSingle}, Motion::kSit},
      {{"stand_up", ActivityType::kSingle}, Motion::kStandUp},
      {{"walk", ActivityType::kSingle}, Motion::kWalk},
      {{"run", ActivityType::kSingle}, Motion::kRun},
      {{"wave_robot", ActivityType::kRobotDirected}, Motion::kWaveRobot},
      {{"point_robot", ActivityType::kRobotDirected}, Motion::kPointRobot},
      {{"grab_robot", ActivityType::kRobotDirected}, Motion::kGrabRobot},
      {{"talk_robot", ActivityType::kRobotDirected}, Motion::kTalkRobot},
      {{"approach", ActivityType::kInteraction}, Motion::kApproach},
      {{"hug", ActivityType::kInteraction}, Motion::kHug},
      {{"shake_hands", ActivityType::kInteraction}, Motion::kShakeHands},
      {{"push", ActivityType::kInteraction}, Motion::kPush},
  };
  return kTable;
}

const TemplateEntry& find_entry(const std::string& name) {
  for (const auto& e : template_table()) {
    if (e.info.name == name) return e;
  }
  ThrowInvalid("unknown motion template '" + name + "'");
}

// Per-execution parameters of one timeline entry.
struct Execution {
  Motion motion;
  double duration = 1.0;  // seconds
  double amp = 1.0;
  double freq = 1.0;
  double phase = 0.0;
  Vec3 anchor;            // floor position (y = 0)
  double facing = 0.0;    // heading of person 0 (or of the pair axis)
  std::array<double, 2> scale{1.0, 1.0};
};

Vec3 heading_dir(double h) { return {std::sin(h), 0.0, std::cos(h)}; }

BodyPose standing(const Execution& e, int who, Vec3 floor_pos, double heading) {
  BodyPose p;
  p.scale = e.scale[static_cast<std::size_t>(who)];
  p.root = floor_pos;
  p.root.y = body::standing_height(p.scale);
  p.heading = heading;
  p.left_arm.raise = 0.05;
  p.right_arm.raise = 0.05;
  p.left_arm.spread = 0.08;
  p.right_arm.spread = 0.08;
  return p;
}

void gait(BodyPose& p, double theta, double leg, double knee, double arm, double elbow) {
  p.left_leg.hip = leg * std::sin(theta);
  p.right_leg.hip = -leg * std::sin(theta);
  p.left_leg.knee = knee * (0.5 + 0.5 * std::sin(theta + 1.2));
  p.right_leg.knee = knee * (0.5 + 0.5 * std::sin(theta + 1.2 + kPi));
  p.left_arm.raise = -arm * std::sin(theta);
  p.right_arm.raise = arm * std::sin(theta);
  p.left_arm.elbow = elbow;
  p.right_arm.elbow = elbow;
}

// Circular path around the anchor so locomotion stays inside the scene.
void circle(BodyPose& p, const Execution& e, double radius, double speed, double t) {
  const double psi0 = e.facing;
  const double psi = psi0 + speed * t / radius;
  p.root.x = e.anchor.x + radius * (std::cos(psi) - std::cos(psi0));
  p.root.z = e.anchor.z + radius * (std::sin(psi) - std::sin(psi0));
  p.heading = std::atan2(-std::sin(psi), std::cos(psi));
}

void seat(BodyPose& p, double c, double t, const Execution& e) {
  p.root.y = (1.0 - c) * body::standing_height(p.scale) + c * 0.55 * p.scale;
  p.root = p.root - (0.12 * c) * heading_dir(p.heading);
  p.lean = 0.4 * std::sin(kPi * c) + 0.1 * c + 0.03 * e.amp * std::sin(kTwoPi * 0.3 * t + e.phase);
  p.left_leg.hip = p.right_leg.hip = 1.5 * c;
  p.left_leg.knee = p.right_leg.knee = 1.55 * c;
  p.left_arm.raise = p.right_arm.raise = 0.25 + 0.35 * c;
  p.left_arm.elbow = p.right_arm.elbow = 0.3 + 0.5 * c;
}

// Fills poses[0] (and poses[1] for interactions) at time t seconds.
void evaluate(const Execution& e, double t, std::array<BodyPose, 2>& poses) {
  const double a = e.amp;
  const double f = e.freq;
  const double ph = e.phase;
  BodyPose& p = poses[0];
  switch (e.motion) {
    case Motion::kSit:
    case Motion::kStandUp: {
      p = standing(e, 0, e.anchor, e.facing);
      const double s = smoothstep(t / e.duration);
      seat(p, e.motion == Motion::kSit ? s : 1.0 - s, t, e);
      return;
    }
    case Motion::kWalk: {
      p = standing(e, 0, e.anchor, e.facing);
      const double theta = kTwoPi * 0.9 * f * t + ph;
      gait(p, theta, 0.42 * a, 0.6 * a, 0.35 * a, 0.25);
      circle(p, e, 1.2, 1.1 * f, t);
      p.root.y += 0.02 * std::cos(2.0 * theta);
      return;
    }
    case Motion::kRun: {
      p = standing(e, 0, e.anchor, e.facing);
      const double theta = kTwoPi * 1.45 * f * t + ph;
      gait(p, theta, 0.75 * a, 1.2 * a, 0.55 * a, 1.4);
      circle(p, e, 1.6, 2.6 * f, t);
      p.lean = 0.22;
      p.root.y += 0.05 * std::cos(2.0 * theta) - 0.04;
      return;
    }
    case Motion::kWaveRobot: {
      p = standing(e, 0, e.anchor, e.facing);
      const double r = smoothstep(t / 0.5);
      const double w = kTwoPi * 1.7 * f * t + ph;
      p.right_arm.raise = 2.6 * r;
      p.right_arm.spread = 0.15 + 0.4 * a * std::sin(w) * r;
      p.right_arm.elbow = 0.35 + 0.25 * a * std::sin(w + 1.0);
      p.left_arm.raise = 0.05 + 0.04 * std::sin(w);
      return;
    }
    case Motion::kPointRobot: {
      p = standing(e, 0, e.anchor, e.facing);
      const double r = smoothstep(t / 0.6);
      const double w = kTwoPi * 1.1 * f * t + ph;
      p.right_arm.raise = 1.5 * r;
      p.right_arm.elbow = 0.15 + 0.2 * a * (0.5 + 0.5 * std::sin(w));
      p.right_arm.spread = -0.1;
      p.lean = 0.06 + 0.04 * a * std::sin(w + 0.5);
      p.head_nod = 0.1;
      return;
    }
    case Motion::kGrabRobot: {
      p = standing(e, 0, e.anchor, e.facing);
      const double w = kTwoPi * 0.8 * f * t + ph;
      p.left_arm.raise = p.right_arm.raise = 1.25 + 0.2 * a * std::sin(w);
      p.left_arm.elbow = p.right_arm.elbow = 0.75 + 0.55 * a * std::sin(w + kPi / 2);
      p.left_arm.spread = p.right_arm.spread = 0.0;
      p.lean = 0.25 + 0.08 * a * std::sin(w);
      p.root = p.root + (0.1 * a * std::sin(w)) * heading_dir(p.heading);
      return;
    }
    case Motion::kTalkRobot: {
      p = standing(e, 0, e.anchor, e.facing);
      const double w = kTwoPi * 1.3 * f * t + ph;
      p.right_arm.raise = 0.35 + 0.15 * a * std::sin(w);
      p.left_arm.raise = 0.35 + 0.15 * a * std::sin(w + kPi);
      p.right_arm.elbow = 1.3 + 0.35 * a * std::sin(w + 0.7);
      p.left_arm.elbow = 1.3 + 0.35 * a * std::sin(w + 0.7 + kPi);
      p.left_arm.spread = p.right_arm.spread = 0.1;
      p.head_nod = 0.12 * a * std::sin(kTwoPi * 2.1 * f * t);
      return;
    }
    default:
      break;
  }

  // Two-person templates: person 0 faces along the pair axis, person 1 faces back.
  const Vec3 axis = heading_dir(e.facing);
  auto place = [&](double d0, double d1) {
    poses[0] = standing(e, 0, e.anchor - d0 * axis, e.facing);
    poses[1] = standing(e, 1, e.anchor + d1 * axis, e.facing + kPi);
  };
  switch (e.motion) {
    case Motion::kApproach: {
      const double d = 3.0 - 2.0 * std::clamp(t / e.duration, 0.0, 1.0);
      place(d / 2, d / 2);
      for (int who = 0; who < 2; ++who) {
        const double theta = kTwoPi * 0.8 * f * t + ph + who * 1.9;
        gait(poses[who], theta, 0.3 * a, 0.45 * a, 0.05 * a, 0.5);
        poses[who].left_arm.raise += 0.1;
        poses[who].right_arm.raise += 0.1;
      }
      return;
    }
    case Motion::kHug: {
      const double c = smoothstep(t / (0.45 * e.duration));
      const double d = 1.0 - 0.6 * c;
      place(d / 2, d / 2);
      const double rock = 0.06 * a * std::sin(kTwoPi * 0.6 * f * t + ph);
      for (int who = 0; who < 2; ++who) {
        BodyPose& q = poses[who];
        const double lift = who == 0 ? 1.2 : 1.0;
        q.left_arm.raise = q.right_arm.raise = 0.3 + lift * c;
        q.left_arm.spread = q.right_arm.spread = 0.5 * c;
        q.left_arm.elbow = q.right_arm.elbow = 1.3 * c;
        q.lean = 0.12 * c + (who == 0 ? rock : -rock);
      }
      return;
    }
    case Motion::kShakeHands: {
      place(0.4, 0.4);
      const double pump = 0.14 * a * std::sin(kTwoPi * 2.4 * f * t + ph);
      for (int who = 0; who < 2; ++who) {
        BodyPose& q = poses[who];
        q.right_arm.raise = 0.85 + pump;
        q.right_arm.elbow = 0.6;
        q.right_arm.spread = -0.15;
        q.lean = 0.05;
        q.head_nod = 0.05 * std::sin(kTwoPi * 0.7 * f * t);
      }
      return;
    }
    case Motion::kPush: {
      const double period = 1.4 / f;
      const double u = std::fmod(t / period + ph / kTwoPi, 1.0);
      const double pulse = std::exp(-std::pow((u - 0.3) / 0.09, 2.0)) * a;
      const double d = 0.65 + 0.35 * pulse;
      place(0.325, d - 0.325);
      BodyPose& pusher = poses[0];
      pusher.left_arm.raise = pusher.right_arm.raise = 1.35;
      pusher.left_arm.elbow = pusher.right_arm.elbow = 1.5 * (1.0 - std::min(1.0, pulse));
      pusher.lean = 0.15 + 0.1 * pulse;
      BodyPose& pushed = poses[1];
      pushed.lean = -0.25 * pulse;
      pushed.left_arm.raise = pushed.right_arm.raise = 0.05 + 0.3 * pulse;
      pushed.left_arm.spread = pushed.right_arm.spread = 0.08 + 0.3 * pulse;
      return;
    }
    default:
      ThrowInvariant("unhandled motion template");
  }
}

// ---------------------------------------------------------------------------
// Rendering helpers.

struct Projected {
  double u;
  double v;
  double z;
};

Projected project(const CameraModel& cam, Vec3 p) {
  const double z = std::max(p.z, 0.3);
  return {cam.cx + cam.fx * p.x / z, cam.cy - cam.fy * p.y / z, z};
}

BoundingBox person_box(const CameraModel& cam, const std::vector<Vec3>& joints) {
  BoundingBox b{1e300, 1e300, -1e300, -1e300};
  double zsum = 0.0;
  for (const Vec3& j : joints) {
    const Projected q = project(cam, j);
    b.x0 = std::min(b.x0, q.u);
    b.y0 = std::min(b.y0, q.v);
    b.x1 = std::max(b.x1, q.u);
    b.y1 = std::max(b.y1, q.v);
    zsum += q.z;
  }
  const double pad = 0.12 * cam.fx / (zsum / static_cast<double>(joints.size()));
  b.x0 = std::clamp(b.x0 - pad, 0.0, static_cast<double>(cam.width - 1));
  b.y0 = std::clamp(b.y0 - pad, 0.0, static_cast<double>(cam.height - 1));
  b.x1 = std::clamp(b.x1 + pad, b.x0 + 4.0, static_cast<double>(cam.width) + 4.0);
  b.y1 = std::clamp(b.y1 + pad, b.y0 + 4.0, static_cast<double>(cam.height) + 4.0);
  return b;
}

// Procedural depth crop: every bone is splatted as a capsule; background is 0.
DepthPatch render_depth(const CameraModel& cam, const std::vector<Vec3>& joints, const BoundingBox& box,
                        double scale) {
  DepthPatch patch;
  const int x0 = static_cast<int>(std::floor(box.x0));
  const int y0 = static_cast<int>(std::floor(box.y0));
  patch.width = std::max(4, static_cast<int>(std::ceil(box.x1)) - x0);
  patch.height = std::max(4, static_cast<int>(std::ceil(box.y1)) - y0);
  patch.depth.assign(static_cast<std::size_t>(patch.width) * patch.height, 0);
  for (const body::Bone& bone : body::bones()) {
    const Projected a = project(cam, joints[static_cast<std::size_t>(bone.a)]);
    const Projected b = project(cam, joints[static_cast<std::size_t>(bone.b)]);
    const double radius_m = bone.radius * scale;
    const double r = radius_m * cam.fx / (0.5 * (a.z + b.z));
    const int bx0 = std::max(0, static_cast<int>(std::floor(std::min(a.u, b.u) - r)) - x0);
    const int bx1 = std::min(patch.width - 1, static_cast<int>(std::ceil(std::max(a.u, b.u) + r)) - x0);
    const int by0 = std::max(0, static_cast<int>(std::floor(std::min(a.v, b.v) - r)) - y0);
    const int by1 = std::min(patch.height - 1, static_cast<int>(std::ceil(std::max(a.v, b.v) + r)) - y0);
    const double du = b.u - a.u;
    const double dv = b.v - a.v;
    const double len2 = du * du + dv * dv;
    for (int y = by0; y <= by1; ++y) {
      for (int x = bx0; x <= bx1; ++x) {
        const double pu = x + x0 + 0.5 - a.u;
        const double pv = y + y0 + 0.5 - a.v;
        const double s = len2 > 0.0 ? std::clamp((pu * du + pv * dv) / len2, 0.0, 1.0) : 0.0;
        const double eu = pu - s * du;
        const double ev = pv - s * dv;
        const double d2 = eu * eu + ev * ev;
        if (d2 >= r * r) continue;
        const double z = a.z + s * (b.z - a.z) - radius_m * std::sqrt(1.0 - d2 / (r * r));
        const auto mm = static_cast<std::uint16_t>(std::clamp(z * 1000.0, 1.0, 65534.0));
        std::uint16_t& cell = patch.depth[static_cast<std::size_t>(y) * patch.width + x];
        if (cell == 0 || mm < cell) cell = mm;
      }
    }
  }
  return patch;
}

// ---------------------------------------------------------------------------
// Script validation and placement.

struct ScriptLayout {
  std::vector<PersonId> persons;  // sorted
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::vector<std::int64_t> boundaries;  // sorted, includes start and end
};

ScriptLayout validate_script(const SceneScript& script) {
  if (script.persons.empty()) ThrowInvalid("scene " + script.id + ": no persons");
  if (script.timeline.empty()) ThrowInvalid("scene " + script.id + ": empty timeline");
  if (!(script.frame_rate > 0.0)) ThrowInvalid("scene " + script.id + ": frame rate must be positive");
  ScriptLayout layout;
  layout.persons = script.persons;
  std::sort(layout.persons.begin(), layout.persons.end());
  if (std::adjacent_find(layout.persons.begin(), layout.persons.end()) != layout.persons.end()) {
    ThrowInvalid("scene " + script.id + ": duplicate person id");
  }
  std::set<std::int64_t> cuts;
  layout.start = script.timeline.front().start;
  layout.end = script.timeline.front().end;
  for (const auto& e : script.timeline) {
    const TemplateEntry& t = find_entry(e.template_name);
    if (e.end <= e.start) ThrowInvalid("scene " + script.id + ": empty timeline entry");
    if ((t.info.persons() == 2) == e.pair.is_self()) {
      ThrowInvalid("scene " + script.id + ": template '" + e.template_name + "' used with pair " +
                   e.pair.to_string() + " of the wrong arity");
    }
    for (const PersonId& p : {e.pair.first(), e.pair.second()}) {
      if (!std::binary_search(layout.persons.begin(), layout.persons.end(), p)) {
        ThrowInvalid("scene " + script.id + ": timeline names unknown person " + p);
      }
    }
    layout.start = std::min(layout.start, e.start);
    layout.end = std::max(layout.end, e.end);
    cuts.insert(e.start);
    cuts.insert(e.end);
  }
  // Exactly one active template per person per frame.
  for (const PersonId& p : layout.persons) {
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
    for (const auto& e : script.timeline) {
      if (e.pair.contains(p)) spans.emplace_back(e.start, e.end);
    }
    std::sort(spans.begin(), spans.end());
    std::int64_t cursor = layout.start;
    for (const auto& [s, t] : spans) {
      if (s < cursor) {
        ThrowInvalid("scene " + script.id + ": overlapping templates on person " + p + " at frame " +
                     std::to_string(s));
      }
      if (s > cursor) {
        ThrowInvalid("scene " + script.id + ": person " + p + " has no activity at frame " + std::to_string(cursor));
      }
      cursor = t;
    }
    if (cursor != layout.end) {
      ThrowInvalid("scene " + script.id + ": person " + p + " has no activity at frame " + std::to_string(cursor));
    }
  }
  layout.boundaries.assign(cuts.begin(), cuts.end());
  return layout;
}

const std::array<Vec3, 8> kSpots = {Vec3{-1.8, 0, 2.5}, Vec3{-0.6, 0, 2.5}, Vec3{0.6, 0, 2.5},
                                    Vec3{1.8, 0, 2.5},  Vec3{-1.8, 0, 4.0}, Vec3{-0.6, 0, 4.0},
                                    Vec3{0.6, 0, 4.0},  Vec3{1.8, 0, 4.0}};

std::vector<Execution> plan_executions(const SceneScript& script, const ScriptLayout& layout,
                                       std::mt19937_64& rng) {
  std::map<PersonId, double> body_scale;
  for (const PersonId& p : layout.persons) body_scale[p] = script.style.body_scale * uniform(rng, 0.96, 1.04);

  std::vector<Execution> plan;
  std::vector<int> spot_of(script.timeline.size(), -1);
  for (std::size_t i = 0; i < script.timeline.size(); ++i) {
    const TimelineEntry& e = script.timeline[i];
    Execution x;
    x.motion = find_entry(e.template_name).motion;
    x.duration = static_cast<double>(e.end - e.start) / script.frame_rate;
    x.amp = script.style.amplitude_scale * uniform(rng, 0.9, 1.1);
    x.freq = script.style.frequency_scale * uniform(rng, 0.9, 1.1);
    x.phase = uniform(rng, 0.0, kTwoPi);
    x.scale = {body_scale[e.pair.first()], body_scale[e.pair.second()]};

    std::vector<int> free;
    for (int s = 0; s < static_cast<int>(kSpots.size()); ++s) {
      bool taken = false;
      for (std::size_t j = 0; j < i; ++j) {
        const TimelineEntry& o = script.timeline[j];
        if (spot_of[j] == s && o.start < e.end && e.start < o.end) taken = true;
      }
      if (!taken) free.push_back(s);
    }
    if (free.empty()) ThrowInvalid("scene " + script.id + ": too many concurrent activities to place");
    spot_of[i] = free[rng() % free.size()];
    x.anchor = kSpots[static_cast<std::size_t>(spot_of[i])] +
               Vec3{uniform(rng, -0.2, 0.2), 0.0, uniform(rng, -0.2, 0.2)};
    const double toward_robot = std::atan2(-x.anchor.x, -x.anchor.z);
    x.facing = find_entry(e.template_name).info.type == ActivityType::kRobotDirected
                   ? toward_robot + uniform(rng, -0.15, 0.15)
                   : uniform(rng, -kPi, kPi);
    plan.push_back(x);
  }
  return plan;
}

}  // namespace

std::string to_string(ActivityType t) {
  switch (t) {
    case ActivityType::kSingle: return "single";
    case ActivityType::kInteraction: return "interaction";
    case ActivityType::kRobotDirected: return "robot-directed";
  }
  return "unknown";
}

const std::vector<MotionTemplate>& standard_templates() {
  static const std::vector<MotionTemplate> kTemplates = [] {
    std::vector<MotionTemplate> out;
    for (const auto& e : template_table()) out.push_back(e.info);
    return out;
  }();
  return kTemplates;
}

const MotionTemplate& find_template(const std::string& name) { return find_entry(name).info; }

std::vector<std::string> standard_label_names() {
  std::vector<std::string> names;
  for (const auto& t : standard_templates()) names.push_back(t.name);
  return names;
}

std::size_t timeline_segment_count(const SceneScript& script) {
  return validate_script(script).boundaries.size() - 1;
}

std::vector<Segment> generate_scene(const SceneScript& script) {
  const ScriptLayout layout = validate_script(script);
  std::mt19937_64 rng(derive_seed(script.seed, 0));
  std::mt19937_64 noise_rng(derive_seed(script.seed, 1));
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::vector<Execution> plan = plan_executions(script, layout, rng);
  const CameraModel cam;
  const double sigma = script.style.noise_sigma;

  std::map<PersonId, PersonTrack> tracks;
  std::map<PersonId, double> scale_of;
  for (const PersonId& p : layout.persons) tracks[p];

  std::array<BodyPose, 2> poses;
  for (std::int64_t frame = layout.start; frame < layout.end; ++frame) {
    std::map<PersonId, std::vector<Vec3>> frame_joints;
    for (std::size_t i = 0; i < script.timeline.size(); ++i) {
      const TimelineEntry& e = script.timeline[i];
      if (frame < e.start || frame >= e.end) continue;
      const double t = static_cast<double>(frame - e.start) / script.frame_rate;
      evaluate(plan[i], t, poses);
      const int count = e.pair.is_self() ? 1 : 2;
      for (int who = 0; who < count; ++who) {
        const PersonId& pid = who == 0 ? e.pair.first() : e.pair.second();
        const auto fk = body::forward_kinematics(poses[static_cast<std::size_t>(who)]);
        std::vector<Vec3>& out = frame_joints[pid];
        out.assign(fk.begin(), fk.end());
        for (Vec3& j : out) j.y += cam.floor_y;
        scale_of[pid] = poses[static_cast<std::size_t>(who)].scale;
      }
    }
    for (const PersonId& p : layout.persons) {
      std::vector<Vec3>& joints = frame_joints.at(p);
      for (Vec3& j : joints) {
        j.x += sigma * noise(noise_rng);
        j.y += sigma * noise(noise_rng);
        j.z += sigma * noise(noise_rng);
      }
      PersonTrack& track = tracks[p];
      if (script.with_boxes || script.with_depth) {
        const BoundingBox box = person_box(cam, joints);
        if (script.with_boxes) track.boxes.push_back(box);
        if (script.with_depth) track.depth.push_back(render_depth(cam, joints, box, scale_of[p]));
      }
      track.joints.push_back(JointSet{std::move(joints), frame, p});
    }
  }

  std::vector<Segment> segments;
  for (std::size_t k = 0; k + 1 < layout.boundaries.size(); ++k) {
    Segment seg;
    seg.id = script.id + "/" + std::to_string(k);
    seg.start = layout.boundaries[k];
    seg.end = layout.boundaries[k + 1];
    seg.persons = layout.persons;
    const auto lo = static_cast<std::size_t>(seg.start - layout.start);
    const auto hi = static_cast<std::size_t>(seg.end - layout.start);
    for (const PersonId& p : layout.persons) {
      const PersonTrack& all = tracks.at(p);
      PersonTrack& t = seg.tracks[p];
      t.joints.assign(all.joints.begin() + lo, all.joints.begin() + hi);
      if (!all.boxes.empty()) t.boxes.assign(all.boxes.begin() + lo, all.boxes.begin() + hi);
      if (!all.depth.empty()) t.depth.assign(all.depth.begin() + lo, all.depth.begin() + hi);
    }
    std::map<CandidatePair, std::string> truth;
    for (const auto& pair : enumerate_pairs(seg.persons)) truth[pair] = kNullLabelName;
    for (const auto& e : script.timeline) {
      if (e.start <= seg.start && seg.end <= e.end) truth[e.pair] = e.template_name;
    }
    seg.ground_truth = std::move(truth);
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<Fold> Benchmark::folds() const {
  std::vector<Fold> out;
  for (const auto& g : groups) {
    Fold f;
    f.test_group = g.index;
    for (const auto& other : groups) {
      if (other.index != g.index) f.train_groups.push_back(other.index);
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

struct PhaseShape {
  std::vector<std::array<int, 2>> pairs;  // roles
  std::vector<std::string> pair_templates;
  std::vector<int> solos;
  std::vector<std::string> solo_templates;
};

struct SequenceShape {
  int persons = 0;
  std::vector<PhaseShape> phases;
};

class Deck {
 public:
  Deck(std::vector<std::string> names, std::mt19937_64& rng) : names_(std::move(names)), rng_(rng) {}
  std::string draw() {
    if (cards_.empty()) {
      cards_ = names_;
      shuffle(cards_, rng_);
    }
    std::string c = cards_.back();
    cards_.pop_back();
    return c;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::string> cards_;
  std::mt19937_64& rng_;
};

std::vector<SequenceShape> make_sequences(std::uint64_t seed, const BenchmarkOptions& o) {
  std::mt19937_64 rng(derive_seed(seed, 1000));
  std::vector<std::string> duo;
  std::vector<std::string> solo;
  for (const auto& t : standard_templates()) (t.persons() == 2 ? duo : solo).push_back(t.name);
  Deck duo_deck(duo, rng);
  Deck solo_deck(solo, rng);
  const int max_persons = std::min(o.max_persons, o.persons_per_group);
  std::vector<SequenceShape> seqs;
  for (int s = 0; s < o.sequences; ++s) {
    SequenceShape shape;
    shape.persons = uniform_int(rng, o.min_persons, max_persons);
    const int phases = uniform_int(rng, o.min_phases, o.max_phases);
    for (int ph = 0; ph < phases; ++ph) {
      PhaseShape phase;
      std::vector<int> roles(static_cast<std::size_t>(shape.persons));
      for (int r = 0; r < shape.persons; ++r) roles[static_cast<std::size_t>(r)] = r;
      shuffle(roles, rng);
      const int pairs = uniform_int(rng, 0, shape.persons / 2);
      for (int k = 0; k < pairs; ++k) {
        phase.pairs.push_back({roles[static_cast<std::size_t>(2 * k)], roles[static_cast<std::size_t>(2 * k + 1)]});
        phase.pair_templates.push_back(duo_deck.draw());
      }
      for (int r = 2 * pairs; r < shape.persons; ++r) {
        phase.solos.push_back(roles[static_cast<std::size_t>(r)]);
        phase.solo_templates.push_back(solo_deck.draw());
      }
      shape.phases.push_back(std::move(phase));
    }
    seqs.push_back(std::move(shape));
  }
  return seqs;
}

}  // namespace

Benchmark standard_benchmark(std::uint64_t seed, const BenchmarkOptions& options) {
  if (options.groups < 2) ThrowInvalid("benchmark needs at least two groups");
  if (options.min_persons < 1 || options.max_persons < options.min_persons ||
      options.persons_per_group < options.min_persons) {
    ThrowInvalid("benchmark: inconsistent person counts");
  }
  if (options.min_phases < 1 || options.max_phases < options.min_phases || options.min_phase_frames < 2 ||
      options.max_phase_frames < options.min_phase_frames || options.sequences < 1) {
    ThrowInvalid("benchmark: inconsistent phase settings");
  }
  Benchmark bench;
  bench.seed = seed;
  bench.options = options;
  const std::vector<SequenceShape> seqs = make_sequences(seed, options);
  for (int g = 0; g < options.groups; ++g) {
    std::mt19937_64 rng(derive_seed(seed, 2000, static_cast<std::uint64_t>(g)));
    BenchmarkGroup group;
    group.index = g;
    group.style.amplitude_scale = uniform(rng, 0.85, 1.15);
    group.style.frequency_scale = uniform(rng, 0.85, 1.15);
    group.style.body_scale = uniform(rng, 0.93, 1.07);
    group.style.noise_sigma = options.noise_sigma;
    for (int p = 0; p < options.persons_per_group; ++p) {
      group.persons.push_back("g" + std::to_string(g + 1) + "p" + std::to_string(p + 1));
    }
    for (std::size_t s = 0; s < seqs.size(); ++s) {
      const SequenceShape& shape = seqs[s];
      std::vector<PersonId> cast = group.persons;
      shuffle(cast, rng);
      cast.resize(static_cast<std::size_t>(shape.persons));
      SceneScript script;
      script.id = "g" + std::to_string(g + 1) + "s" + std::to_string(s + 1);
      script.persons = cast;
      std::sort(script.persons.begin(), script.persons.end());
      script.seed = derive_seed(seed, 3000 + static_cast<std::uint64_t>(g), s);
      script.style = group.style;
      script.with_depth = options.with_depth;
      script.with_boxes = options.with_boxes;
      std::int64_t frame = 0;
      for (const PhaseShape& phase : shape.phases) {
        const std::int64_t len = uniform_int(rng, options.min_phase_frames, options.max_phase_frames);
        for (std::size_t k = 0; k < phase.pairs.size(); ++k) {
          const auto& r = phase.pairs[k];
          script.timeline.push_back(
              {CandidatePair(cast[static_cast<std::size_t>(r[0])], cast[static_cast<std::size_t>(r[1])]),
               phase.pair_templates[k], frame, frame + len});
        }
        for (std::size_t k = 0; k < phase.solos.size(); ++k) {
          const PersonId& p = cast[static_cast<std::size_t>(phase.solos[k])];
          script.timeline.push_back({CandidatePair(p, p), phase.solo_templates[k], frame, frame + len});
        }
        frame += len;
      }
      group.scenes.push_back(std::move(script));
    }
    bench.groups.push_back(std::move(group));
  }
  return bench;
}

}  // namespace rhi
