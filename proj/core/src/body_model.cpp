#include "rhi/body_model.hpp"

#include <cmath>

namespace rhi::body {

namespace {

constexpr double kThigh = 0.43;
constexpr double kShin = 0.42;
constexpr double kAnkle = 0.08;
constexpr double kUpperArm = 0.28;
constexpr double kForearm = 0.25;

Vec3 combine(double a, Vec3 u, double b, Vec3 v) { return a * u + b * v; }

}  // namespace

double standing_height(double scale) { return (kThigh + kShin + kAnkle + 0.04) * scale; }

std::array<Vec3, kJointCount> forward_kinematics(const BodyPose& p) {
  const double s = p.scale;
  const Vec3 up{0.0, 1.0, 0.0};
  const Vec3 fwd{std::sin(p.heading), 0.0, std::cos(p.heading)};
  const Vec3 side{std::cos(p.heading), 0.0, -std::sin(p.heading)};  // body right

  const Vec3 torso_up = combine(std::cos(p.lean), up, std::sin(p.lean), fwd);
  const Vec3 torso_fwd = combine(std::cos(p.lean), fwd, -std::sin(p.lean), up);

  std::array<Vec3, kJointCount> j{};
  j[kSpineBase] = p.root;
  j[kSpineMid] = p.root + (0.28 * s) * torso_up;
  j[kSpineShoulder] = p.root + (0.52 * s) * torso_up;
  j[kNeck] = p.root + (0.58 * s) * torso_up;
  j[kHead] = j[kNeck] + (0.16 * s) * combine(std::cos(p.head_nod), torso_up, std::sin(p.head_nod), torso_fwd);

  auto arm = [&](const ArmPose& a, double out, int shoulder, int elbow, int wrist, int hand, int tip, int thumb) {
    const Vec3 outward = out * side;
    j[shoulder] = j[kSpineShoulder] + (0.18 * s) * outward;
    auto dir = [&](double pitch) {
      const Vec3 d = combine(std::cos(pitch), Vec3{0, 0, 0} - torso_up, std::sin(pitch), torso_fwd);
      return combine(std::cos(a.spread), d, std::sin(a.spread), outward);
    };
    const Vec3 d1 = dir(a.raise);
    const Vec3 d2 = dir(a.raise + a.elbow);
    j[elbow] = j[shoulder] + (kUpperArm * s) * d1;
    j[wrist] = j[elbow] + (kForearm * s) * d2;
    j[hand] = j[wrist] + (0.07 * s) * d2;
    j[tip] = j[hand] + (0.06 * s) * d2;
    j[thumb] = j[hand] + (0.04 * s) * combine(0.3, d2, -0.95, outward);
  };
  arm(p.left_arm, -1.0, kShoulderLeft, kElbowLeft, kWristLeft, kHandLeft, kHandTipLeft, kThumbLeft);
  arm(p.right_arm, 1.0, kShoulderRight, kElbowRight, kWristRight, kHandRight, kHandTipRight, kThumbRight);

  auto leg = [&](const LegPose& l, double out, int hip, int knee, int ankle, int foot) {
    j[hip] = p.root + (0.09 * s * out) * side - (0.04 * s) * up;
    const Vec3 thigh = combine(-std::cos(l.hip), up, std::sin(l.hip), fwd);
    const Vec3 shin = combine(-std::cos(l.hip - l.knee), up, std::sin(l.hip - l.knee), fwd);
    j[knee] = j[hip] + (kThigh * s) * thigh;
    j[ankle] = j[knee] + (kShin * s) * shin;
    j[foot] = j[ankle] + (0.12 * s) * fwd - (0.03 * s) * up;
  };
  leg(p.left_leg, -1.0, kHipLeft, kKneeLeft, kAnkleLeft, kFootLeft);
  leg(p.right_leg, 1.0, kHipRight, kKneeRight, kAnkleRight, kFootRight);
  return j;
}

const std::vector<Bone>& bones() {
  static const std::vector<Bone> kBones = {
      {kSpineBase, kSpineMid, 0.14},       {kSpineMid, kSpineShoulder, 0.15},
      {kSpineShoulder, kNeck, 0.06},       {kNeck, kHead, 0.10},
      {kSpineShoulder, kShoulderLeft, 0.07}, {kShoulderLeft, kElbowLeft, 0.05},
      {kElbowLeft, kWristLeft, 0.04},      {kWristLeft, kHandTipLeft, 0.04},
      {kSpineShoulder, kShoulderRight, 0.07}, {kShoulderRight, kElbowRight, 0.05},
      {kElbowRight, kWristRight, 0.04},    {kWristRight, kHandTipRight, 0.04},
      {kSpineBase, kHipLeft, 0.10},        {kHipLeft, kKneeLeft, 0.07},
      {kKneeLeft, kAnkleLeft, 0.05},       {kAnkleLeft, kFootLeft, 0.04},
      {kSpineBase, kHipRight, 0.10},       {kHipRight, kKneeRight, 0.07},
      {kKneeRight, kAnkleRight, 0.05},     {kAnkleRight, kFootRight, 0.04},
  };
  return kBones;
}

}  // namespace rhi::body
