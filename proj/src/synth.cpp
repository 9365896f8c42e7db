// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pose25d/rng.hpp"

namespace pose25d {

namespace {

// Placement policy. Roots stay inside the frame, distinct people keep their
// projected roots separated (so root-depth disks never collide), and in
// non-overlap mode whole bodies keep a halo of clearance so rendered maps of
// different people cannot interact.
constexpr double kRootEdgeMarginPx = 16.0;
constexpr double kMinRootSeparationPx = 12.0;
constexpr double kBodyHaloPx = 20.0;
constexpr double kJointVisibleMarginPx = 2.0;
constexpr int kPlacementAttempts = 300;

// Bones keep their camera-axis component under 30% of their length. This
// bounds how far any joint can drift in depth from the root, which keeps the
// adaptive bone-length gate satisfiable at the near end of the depth range.
constexpr double kMaxAxialFraction = 0.3;

// Pairwise root-depth gaps avoid the ordinal-tie boundary (300 mm) and
// exact-tie degeneracies.
constexpr double kDepthTieGuardLo = 270.0;
constexpr double kDepthTieGuardHi = 330.0;
constexpr double kMinDepthGap = 50.0;

struct Vec3 {
  double x, y, z;
};

Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (n < 1e-12) return Vec3{1.0, 0.0, 0.0};
  return Vec3{v.x / n, v.y / n, v.z / n};
}

// Rest-pose bone directions in camera coordinates (x right, y down,
// z toward the scene), keyed by the child joint of the part.
Vec3 canonical_direction(const std::string& child, int part_index) {
  struct Entry {
    const char* child;
    Vec3 dir;
  };
  static const Entry table[] = {
      {"neck", {0.0, -1.0, 0.0}},        {"head", {0.0, -1.0, 0.0}},
      {"l_shoulder", {-0.97, -0.26, 0.0}}, {"r_shoulder", {0.97, -0.26, 0.0}},
      {"l_elbow", {-0.42, 0.91, 0.0}},   {"r_elbow", {0.42, 0.91, 0.0}},
      {"l_wrist", {-0.20, 0.98, 0.0}},   {"r_wrist", {0.20, 0.98, 0.0}},
      {"l_hip", {-0.94, 0.34, 0.0}},     {"r_hip", {0.94, 0.34, 0.0}},
      {"l_knee", {-0.09, 1.0, 0.0}},     {"r_knee", {0.09, 1.0, 0.0}},
      {"l_ankle", {0.0, 1.0, 0.0}},      {"r_ankle", {0.0, 1.0, 0.0}}};
  for (const Entry& e : table)
    if (child == e.child) return normalized(e.dir);
  // Unknown skeletons get a deterministic spread of planar directions.
  const double angle = 2.399963 * (part_index + 1);  // golden angle
  return Vec3{std::cos(angle), std::sin(angle), 0.0};
}

// Joint offsets from the root, mm. Bone lengths jitter uniformly around the
// per-part mean, so the sample mean matches the configured statistics.
std::vector<Vec3> sample_pose_offsets(Rng& rng, const SkeletonSpec& spec,
                                      const BoneStats& stats,
                                      double bone_jitter) {
  std::vector<Vec3> offsets(spec.joint_count(), Vec3{0.0, 0.0, 0.0});
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    const Vec3 base = canonical_direction(spec.joint_name(part.child), p);
    Vec3 dir = normalized(Vec3{base.x + 0.25 * rng.normal(),
                               base.y + 0.25 * rng.normal(),
                               base.z + 0.25 * rng.normal()});
    if (std::abs(dir.z) > kMaxAxialFraction) {
      const double zc = std::copysign(kMaxAxialFraction, dir.z);
      const double xy = std::sqrt(dir.x * dir.x + dir.y * dir.y);
      const double scale = std::sqrt(1.0 - zc * zc) / std::max(xy, 1e-9);
      dir = Vec3{dir.x * scale, dir.y * scale, zc};
    }
    const double len =
        stats.mean_length[p] * (1.0 + rng.uniform(-bone_jitter, bone_jitter));
    offsets[part.child] = Vec3{offsets[part.parent].x + len * dir.x,
                               offsets[part.parent].y + len * dir.y,
                               offsets[part.parent].z + len * dir.z};
  }
  return offsets;
}

struct Box2D {
  double x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  bool valid() const { return x0 <= x1 && y0 <= y1; }
  bool intersects(const Box2D& o) const {
    return valid() && o.valid() && x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 &&
           o.y0 <= y1;
  }
};

struct Placed {
  AbsolutePose3D pose;
  Point2D root_px;
  Box2D box;
};

// Builds the in-camera pose for root depth z and root projection (u, v),
// flags joint visibility, and computes the haloed clipped 2D bounding box.
Placed realize(const std::vector<Vec3>& offsets, const SkeletonSpec& spec,
               const CameraIntrinsics& cam, double root_z, double u,
               double v) {
  Placed placed;
  const double root_x = (u - cam.cx) * root_z / cam.f;
  const double root_y = (v - cam.cy) * root_z / cam.f;
  placed.pose.joints.resize(spec.joint_count());
  Box2D box;
  bool first = true;
  for (int j = 0; j < spec.joint_count(); ++j) {
    Joint3D& joint = placed.pose.joints[j];
    joint.pos = Point3D{root_x + offsets[j].x, root_y + offsets[j].y,
                        root_z + offsets[j].z};
    const Point2D p = project(joint.pos, cam);
    joint.visible = p.u >= kJointVisibleMarginPx &&
                    p.u <= cam.w - 1.0 - kJointVisibleMarginPx &&
                    p.v >= kJointVisibleMarginPx &&
                    p.v <= cam.h - 1.0 - kJointVisibleMarginPx;
    if (j == spec.root_index()) placed.root_px = p;
    if (joint.visible) {
      if (first) {
        box = Box2D{p.u, p.v, p.u, p.v};
        first = false;
      } else {
        box.x0 = std::min(box.x0, p.u);
        box.y0 = std::min(box.y0, p.v);
        box.x1 = std::max(box.x1, p.u);
        box.y1 = std::max(box.y1, p.v);
      }
    }
  }
  box.x0 = std::max(0.0, box.x0 - kBodyHaloPx);
  box.y0 = std::max(0.0, box.y0 - kBodyHaloPx);
  box.x1 = std::min(cam.w - 1.0, box.x1 + kBodyHaloPx);
  box.y1 = std::min(cam.h - 1.0, box.y1 + kBodyHaloPx);
  placed.box = box;
  return placed;
}

bool far_from_roots(const Point2D& p, const std::vector<Placed>& placed) {
  for (const Placed& other : placed)
    if (distance(p, other.root_px) < kMinRootSeparationPx) return false;
  return true;
}

}  // namespace

void SynthConfig::validate() const {
  if (min_people < 0 || max_people < min_people)
    throw std::invalid_argument("synth config: bad person count range");
  if (!(min_depth_mm > 0.0) || max_depth_mm < min_depth_mm)
    throw std::invalid_argument("synth config: bad depth range");
  if (overlap_probability < 0.0 || overlap_probability > 1.0 ||
      truncation_probability < 0.0 || truncation_probability > 1.0)
    throw std::invalid_argument("synth config: probabilities must be in "
                                "[0, 1]");
  if (overlap_probability > 0.0 && max_people < 2)
    throw std::invalid_argument("synth config: overlap needs at least two "
                                "people");
  if (bone_jitter < 0.0 || bone_jitter >= 0.5)
    throw std::invalid_argument("synth config: bone jitter must be in "
                                "[0, 0.5)");
  if (!(image_width > 64.0) || !(image_height > 64.0))
    throw std::invalid_argument("synth config: image too small");
}

Scene synth_scene(const SynthConfig& cfg, const SkeletonSpec& spec,
                  const BoneStats& stats) {
  cfg.validate();
  Rng rng(cfg.seed);

  Scene scene;
  scene.camera = CameraIntrinsics{
      cfg.focal > 0.0 ? cfg.focal : cfg.image_width, cfg.image_width / 2.0,
      cfg.image_height / 2.0, cfg.image_width, cfg.image_height};
  const CameraIntrinsics& cam = scene.camera;

  int count = rng.uniform_int(cfg.min_people, cfg.max_people);
  const bool force_overlap =
      cfg.overlap_probability > 0.0 && rng.bernoulli(cfg.overlap_probability);
  if (force_overlap) count = std::max(count, 2);
  if (count == 0) return scene;

  // Root depths with guarded pairwise gaps.
  std::vector<double> depths;
  for (int i = 0; i < count; ++i) {
    double z = 0.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      z = rng.uniform(cfg.min_depth_mm, cfg.max_depth_mm);
      bool ok = true;
      for (double other : depths) {
        const double gap = std::abs(z - other);
        if (gap < kMinDepthGap ||
            (gap > kDepthTieGuardLo && gap < kDepthTieGuardHi))
          ok = false;
      }
      if (ok) break;
    }
    depths.push_back(z);
  }
  // Far people first: they have the smallest image footprint, which makes
  // greedy non-overlap placement succeed far more often.
  std::sort(depths.begin(), depths.end(), std::greater<double>());

  const double u_lo = kRootEdgeMarginPx;
  const double u_hi = cam.w - 1.0 - kRootEdgeMarginPx;
  const double v_lo = kRootEdgeMarginPx;
  const double v_hi = cam.h - 1.0 - kRootEdgeMarginPx;

  std::vector<Placed> placed;
  for (int i = 0; i < count; ++i) {
    const auto offsets = sample_pose_offsets(rng, spec, stats, cfg.bone_jitter);
    const bool overlap_member = force_overlap && i == 1;
    const bool truncated =
        !overlap_member && rng.bernoulli(cfg.truncation_probability);

    double z = depths[i];
    bool done = false;
    for (int round = 0; round < 5 && !done; ++round) {
      for (int attempt = 0; attempt < kPlacementAttempts && !done; ++attempt) {
        double u, v;
        if (overlap_member) {
          // Aim near the first person so the projected bodies intersect.
          u = placed[0].root_px.u + rng.uniform(-150.0, 150.0);
          v = placed[0].root_px.v + rng.uniform(-80.0, 80.0);
          u = std::clamp(u, u_lo, u_hi);
          v = std::clamp(v, v_lo, v_hi);
        } else if (truncated) {
          // Hug one frame edge so limbs spill outside.
          switch (rng.uniform_int(0, 3)) {
            case 0: u = rng.uniform(u_lo, u_lo + 40.0); v = rng.uniform(v_lo, v_hi); break;
            case 1: u = rng.uniform(u_hi - 40.0, u_hi); v = rng.uniform(v_lo, v_hi); break;
            case 2: v = rng.uniform(v_lo, v_lo + 40.0); u = rng.uniform(u_lo, u_hi); break;
            default: v = rng.uniform(v_hi - 40.0, v_hi); u = rng.uniform(u_lo, u_hi); break;
          }
        } else {
          u = rng.uniform(u_lo, u_hi);
          v = rng.uniform(v_lo, v_hi);
        }

        Placed candidate = realize(offsets, spec, cam, z, u, v);
        if (!candidate.pose.joints[spec.root_index()].visible) continue;
        if (!far_from_roots(candidate.root_px, placed)) continue;
        if (overlap_member) {
          if (!candidate.box.intersects(placed[0].box)) continue;
        } else {
          bool clear = true;
          for (const Placed& other : placed)
            if (candidate.box.intersects(other.box)) clear = false;
          if (!clear) continue;
        }
        placed.push_back(std::move(candidate));
        done = true;
      }
      if (!done) z = std::min(z * 1.15, cfg.max_depth_mm);
    }
    // A person that cannot be placed under the spacing rules is dropped.
  }

  for (Placed& p : placed) scene.people.push_back(std::move(p.pose));
  return scene;
}

Scene synth_crowd(const SynthConfig& cfg, const SkeletonSpec& spec,
                  const BoneStats& stats, int count) {
  cfg.validate();
  if (count < 0) throw std::invalid_argument("synth_crowd: negative count");
  Rng rng(cfg.seed);

  Scene scene;
  scene.camera = CameraIntrinsics{
      cfg.focal > 0.0 ? cfg.focal : cfg.image_width, cfg.image_width / 2.0,
      cfg.image_height / 2.0, cfg.image_width, cfg.image_height};
  const CameraIntrinsics& cam = scene.camera;

  const double usable_w = cam.w - 2.0 * kRootEdgeMarginPx;
  const double usable_h = cam.h - 2.0 * kRootEdgeMarginPx;
  const int cols = std::max(
      1, static_cast<int>(std::ceil(std::sqrt(count * usable_w / usable_h))));
  const int rows = std::max(1, (count + cols - 1) / cols);

  std::vector<Placed> placed;
  for (int i = 0; i < count; ++i) {
    const auto offsets = sample_pose_offsets(rng, spec, stats, cfg.bone_jitter);
    const double cell_u = usable_w / cols, cell_v = usable_h / rows;
    const double base_u =
        kRootEdgeMarginPx + (i % cols + 0.5) * cell_u;
    const double base_v =
        kRootEdgeMarginPx + (i / cols % rows + 0.5) * cell_v;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      const double u = std::clamp(base_u + rng.uniform(-15.0, 15.0),
                                  kRootEdgeMarginPx, cam.w - kRootEdgeMarginPx);
      const double v = std::clamp(base_v + rng.uniform(-15.0, 15.0),
                                  kRootEdgeMarginPx, cam.h - kRootEdgeMarginPx);
      const double z = rng.uniform(cfg.min_depth_mm, cfg.max_depth_mm);
      Placed candidate = realize(offsets, spec, cam, z, u, v);
      if (!candidate.pose.joints[spec.root_index()].visible) continue;
      if (!far_from_roots(candidate.root_px, placed)) continue;
      placed.push_back(std::move(candidate));
      break;
    }
  }
  for (Placed& p : placed) scene.people.push_back(std::move(p.pose));
  return scene;
}

}  // namespace pose25d
