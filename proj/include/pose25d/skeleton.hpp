// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pose25d/types.hpp"

namespace pose25d {

// Directed body part: a tree edge from parent joint to child joint.
struct BodyPart {
  int parent = -1;
  int child = -1;
};

// Joint tree with J joints and J-1 directed parts. Parts are stored in
// breadth-first order from the root; that order is normative for the channel
// layout of the representation stack. Immutable after construction.
class SkeletonSpec {
 public:
  // `parent[root_index]` must be -1; every other joint needs a valid parent
  // and the links must form a single tree. Throws std::invalid_argument
  // otherwise.
  SkeletonSpec(std::string name, std::vector<std::string> joint_names,
               std::vector<int> parent, int root_index);

  const std::string& name() const { return name_; }
  int joint_count() const { return static_cast<int>(joint_names_.size()); }
  int part_count() const { return joint_count() - 1; }

  // Heatmaps + PAFs + root depth + relative depth = J + 2(J-1) + 1 + (J-1).
  int channel_count() const { return 4 * joint_count() - 2; }

  int root_index() const { return root_index_; }
  const std::vector<std::string>& joint_names() const { return joint_names_; }
  const std::string& joint_name(int j) const { return joint_names_.at(j); }
  int parent_of(int joint) const { return parent_.at(joint); }
  const std::vector<int>& parents() const { return parent_; }

  // Tree edges in BFS order, root-side parts first.
  const std::vector<BodyPart>& parts() const { return parts_; }
  const BodyPart& part(int p) const { return parts_.at(p); }

  // Part index whose child is `joint`, or -1 for the root.
  int part_to(int joint) const { return part_to_.at(joint); }

  // Joint index by name, or -1 when absent.
  int joint_index(std::string_view name) const;

 private:
  std::string name_;
  std::vector<std::string> joint_names_;
  std::vector<int> parent_;
  int root_index_ = 0;
  std::vector<BodyPart> parts_;
  std::vector<int> part_to_;
};

// Built-in 15-joint human skeleton rooted at the pelvis.
SkeletonSpec default_skeleton();

// Per-part mean 3D bone length in millimeters, indexed like spec.parts().
struct BoneStats {
  std::vector<double> mean_length;
};

// Anthropometric defaults for the built-in 15-joint skeleton.
BoneStats default_bone_stats(const SkeletonSpec& spec);

// Arithmetic mean of 3D bone lengths over all poses where both endpoints are
// visible. Throws std::invalid_argument when a part has no visible sample.
BoneStats mean_bone_lengths(std::span<const AbsolutePose3D> poses,
                            const SkeletonSpec& spec);

struct BoneViolation {
  int part = -1;
  double length = 0.0;     // measured 3D length, mm
  double mean = 0.0;       // expected mean, mm
  double deviation = 0.0;  // |length - mean| / mean
};

// Parts (with both endpoints visible) whose length deviates from the mean by
// more than `tol` (fraction). Empty result means the pose is plausible.
std::vector<BoneViolation> validate_pose(const AbsolutePose3D& pose,
                                         const SkeletonSpec& spec,
                                         const BoneStats& stats, double tol);

}  // namespace pose25d
