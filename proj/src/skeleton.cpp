// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/skeleton.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace pose25d {

SkeletonSpec::SkeletonSpec(std::string name,
                           std::vector<std::string> joint_names,
                           std::vector<int> parent, int root_index)
    : name_(std::move(name)),
      joint_names_(std::move(joint_names)),
      parent_(std::move(parent)),
      root_index_(root_index) {
  const int j = joint_count();
  if (j < 2) throw std::invalid_argument("skeleton: need at least two joints");
  if (parent_.size() != joint_names_.size())
    throw std::invalid_argument("skeleton: parent array size mismatch");
  if (root_index_ < 0 || root_index_ >= j)
    throw std::invalid_argument("skeleton: root index out of range");
  if (parent_[root_index_] != -1)
    throw std::invalid_argument("skeleton: root must have parent -1");
  for (int i = 0; i < j; ++i) {
    if (i == root_index_) continue;
    if (parent_[i] < 0 || parent_[i] >= j || parent_[i] == i)
      throw std::invalid_argument("skeleton: joint '" + joint_names_[i] +
                                  "' has an invalid parent");
  }

  // Children in joint-index order, then BFS from the root. Visiting all J
  // joints exactly once proves the links form a single tree.
  std::vector<std::vector<int>> children(j);
  for (int i = 0; i < j; ++i)
    if (i != root_index_) children[parent_[i]].push_back(i);

  part_to_.assign(j, -1);
  std::vector<char> seen(j, 0);
  std::queue<int> queue;
  queue.push(root_index_);
  seen[root_index_] = 1;
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop();
    for (int c : children[p]) {
      if (seen[c])
        throw std::invalid_argument("skeleton: parent links contain a cycle");
      seen[c] = 1;
      part_to_[c] = static_cast<int>(parts_.size());
      parts_.push_back(BodyPart{p, c});
      queue.push(c);
    }
  }
  if (static_cast<int>(parts_.size()) != j - 1 ||
      std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("skeleton: joints not reachable from root");
}

int SkeletonSpec::joint_index(std::string_view name) const {
  for (int i = 0; i < joint_count(); ++i)
    if (joint_names_[i] == name) return i;
  return -1;
}

SkeletonSpec default_skeleton() {
  const std::vector<std::string> names = {
      "pelvis",  "neck",    "head",    "l_shoulder", "r_shoulder",
      "l_elbow", "r_elbow", "l_wrist", "r_wrist",    "l_hip",
      "r_hip",   "l_knee",  "r_knee",  "l_ankle",    "r_ankle"};
  //                       pe  ne  he  ls  rs  le  re  lw  rw  lh  rh  lk  rk  la  ra
  const std::vector<int> parent = {
      -1, 0, 1, 1, 1, 3, 4, 5, 6, 0, 0, 9, 10, 11, 12};
  return SkeletonSpec("human15", names, parent, 0);
}

BoneStats default_bone_stats(const SkeletonSpec& spec) {
  // Rough adult anthropometric means, mm, keyed by the child joint of each
  // part. The synthetic generator samples bone lengths around these values,
  // so they describe the generated data by construction.
  struct Entry {
    const char* child;
    double mm;
  };
  static const Entry table[] = {
      {"neck", 480.0},    {"head", 250.0},    {"l_shoulder", 180.0},
      {"r_shoulder", 180.0}, {"l_elbow", 280.0}, {"r_elbow", 280.0},
      {"l_wrist", 250.0}, {"r_wrist", 250.0}, {"l_hip", 120.0},
      {"r_hip", 120.0},   {"l_knee", 440.0},  {"r_knee", 440.0},
      {"l_ankle", 420.0}, {"r_ankle", 420.0}};

  BoneStats stats;
  stats.mean_length.assign(spec.part_count(), 0.0);
  for (int p = 0; p < spec.part_count(); ++p) {
    const std::string& child = spec.joint_name(spec.part(p).child);
    for (const Entry& e : table)
      if (child == e.child) stats.mean_length[p] = e.mm;
    if (stats.mean_length[p] <= 0.0)
      throw std::invalid_argument("default_bone_stats: no entry for joint '" +
                                  child + "'");
  }
  return stats;
}

BoneStats mean_bone_lengths(std::span<const AbsolutePose3D> poses,
                            const SkeletonSpec& spec) {
  std::vector<double> sum(spec.part_count(), 0.0);
  std::vector<long> count(spec.part_count(), 0);
  for (const AbsolutePose3D& pose : poses) {
    if (pose.joint_count() != spec.joint_count())
      throw std::invalid_argument("mean_bone_lengths: pose joint count "
                                  "does not match skeleton");
    for (int p = 0; p < spec.part_count(); ++p) {
      const Joint3D& a = pose.joints[spec.part(p).parent];
      const Joint3D& b = pose.joints[spec.part(p).child];
      if (!a.visible || !b.visible) continue;
      sum[p] += distance(a.pos, b.pos);
      count[p] += 1;
    }
  }
  BoneStats stats;
  stats.mean_length.assign(spec.part_count(), 0.0);
  for (int p = 0; p < spec.part_count(); ++p) {
    if (count[p] == 0)
      throw std::invalid_argument(
          "mean_bone_lengths: no visible sample for part '" +
          spec.joint_name(spec.part(p).parent) + "->" +
          spec.joint_name(spec.part(p).child) + "'");
    stats.mean_length[p] = sum[p] / static_cast<double>(count[p]);
  }
  return stats;
}

std::vector<BoneViolation> validate_pose(const AbsolutePose3D& pose,
                                         const SkeletonSpec& spec,
                                         const BoneStats& stats, double tol) {
  std::vector<BoneViolation> violations;
  for (int p = 0; p < spec.part_count(); ++p) {
    const Joint3D& a = pose.joints[spec.part(p).parent];
    const Joint3D& b = pose.joints[spec.part(p).child];
    if (!a.visible || !b.visible) continue;
    const double len = distance(a.pos, b.pos);
    const double mean = stats.mean_length[p];
    const double dev = std::abs(len - mean) / mean;
    if (dev > tol) violations.push_back(BoneViolation{p, len, mean, dev});
  }
  return violations;
}

}  // namespace pose25d
