// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "pose25d/geometry.hpp"

namespace pose25d {

// One joint of an absolute 3D pose. `pos` is camera-frame millimeters.
// Invisible joints (occluded or truncated) keep their slot; `pos` is not
// meaningful for them.
struct Joint3D {
  Point3D pos;
  bool visible = false;
};

// Per-person 3D joint positions, indexed by skeleton joint id.
struct AbsolutePose3D {
  std::vector<Joint3D> joints;

  int joint_count() const { return static_cast<int>(joints.size()); }
};

struct Scene {
  CameraIntrinsics camera;
  std::vector<AbsolutePose3D> people;
};

}  // namespace pose25d
