#pragma once

#include <array>
#include <vector>

#include "rhi/core_model.hpp"

namespace rhi::body {

// Kinect v2 joint order.
enum Joint : int {
  kSpineBase = 0, kSpineMid, kNeck, kHead,
  kShoulderLeft, kElbowLeft, kWristLeft, kHandLeft,
  kShoulderRight, kElbowRight, kWristRight, kHandRight,
  kHipLeft, kKneeLeft, kAnkleLeft, kFootLeft,
  kHipRight, kKneeRight, kAnkleRight, kFootRight,
  kSpineShoulder, kHandTipLeft, kThumbLeft, kHandTipRight, kThumbRight,
  kJointCount
};

static_assert(kJointCount == kDefaultJointCount);

struct ArmPose {
  double raise = 0.0;   // forward pitch of the upper arm from hanging, rad
  double spread = 0.0;  // sideways abduction, rad
  double elbow = 0.0;   // additional forward pitch of the forearm, rad
};

struct LegPose {
  double hip = 0.0;   // forward pitch of the thigh, rad
  double knee = 0.0;  // flexion, rad
};

struct BodyPose {
  Vec3 root;             // spine base, metres above the floor in y
  double heading = 0.0;  // yaw; forward = (sin h, 0, cos h)
  double lean = 0.0;     // forward torso pitch, rad
  double head_nod = 0.0;
  ArmPose left_arm;
  ArmPose right_arm;
  LegPose left_leg;
  LegPose right_leg;
  double scale = 1.0;  // body size factor
};

// Spine-base height of an upright person of the given scale.
double standing_height(double scale);

// 25 joint positions, y measured from the floor.
std::array<Vec3, kJointCount> forward_kinematics(const BodyPose& pose);

struct Bone {
  int a;
  int b;
  double radius;  // metres at scale 1
};

const std::vector<Bone>& bones();

}  // namespace rhi::body
