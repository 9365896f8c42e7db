// Small scene-construction helpers shared across test files.
#pragma once

#include "pose25d/skeleton.hpp"
#include "pose25d/types.hpp"

namespace pose25d::testing {

inline CameraIntrinsics small_cam(double w = 120, double h = 90,
                                  double f = 120) {
  return CameraIntrinsics{f, w / 2.0, h / 2.0, w, h};
}

// Pose with all joints invisible at the origin; place joints by hand.
inline AbsolutePose3D blank_pose(const SkeletonSpec& spec) {
  AbsolutePose3D pose;
  pose.joints.assign(spec.joint_count(), Joint3D{});
  return pose;
}

// Sets one joint to a camera-space position implied by a target projection.
inline void place_joint(AbsolutePose3D& pose, int joint, const Point2D& px,
                        double z, const CameraIntrinsics& cam) {
  pose.joints[joint].pos = back_project(px, z, cam);
  pose.joints[joint].visible = true;
}

// Deterministic fully visible fronto-parallel person: every bone at its mean
// length, all depth offsets zero. Useful where exact decode is expected.
inline AbsolutePose3D standing_person(const SkeletonSpec& spec,
                                      const BoneStats& stats,
                                      const Point3D& root_pos) {
  struct Dir {
    const char* child;
    double x, y;
  };
  static const Dir dirs[] = {
      {"neck", 0.0, -1.0},      {"head", 0.0, -1.0},
      {"l_shoulder", -1.0, 0.0}, {"r_shoulder", 1.0, 0.0},
      {"l_elbow", -0.3, 1.0},   {"r_elbow", 0.3, 1.0},
      {"l_wrist", 0.0, 1.0},    {"r_wrist", 0.0, 1.0},
      {"l_hip", -1.0, 0.3},     {"r_hip", 1.0, 0.3},
      {"l_knee", 0.0, 1.0},     {"r_knee", 0.0, 1.0},
      {"l_ankle", 0.0, 1.0},    {"r_ankle", 0.0, 1.0}};

  AbsolutePose3D pose;
  pose.joints.assign(spec.joint_count(), Joint3D{});
  pose.joints[spec.root_index()] = Joint3D{root_pos, true};
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    const std::string& child = spec.joint_name(part.child);
    double dx = 0.7, dy = 0.7;
    for (const Dir& d : dirs)
      if (child == d.child) {
        dx = d.x;
        dy = d.y;
      }
    const double norm = std::sqrt(dx * dx + dy * dy);
    const Point3D& parent = pose.joints[part.parent].pos;
    pose.joints[part.child] =
        Joint3D{Point3D{parent.x + stats.mean_length[p] * dx / norm,
                        parent.y + stats.mean_length[p] * dy / norm, parent.z},
                true};
  }
  return pose;
}

}  // namespace pose25d::testing
