#include <doctest.h>

#include "pose25d/rng.hpp"
#include "pose25d/skeleton.hpp"

using namespace pose25d;

namespace {

// Pose with every joint visible at given offsets from an arbitrary origin.
AbsolutePose3D pose_from_offsets(const std::vector<Point3D>& offsets) {
  AbsolutePose3D pose;
  for (const Point3D& p : offsets)
    pose.joints.push_back(Joint3D{Point3D{p.x, p.y, p.z + 3000.0}, true});
  return pose;
}

}  // namespace

TEST_CASE("default skeleton has 15 joints, 14 parts, 58 channels") {
  const SkeletonSpec spec = default_skeleton();
  CHECK(spec.joint_count() == 15);
  CHECK(spec.part_count() == 14);
  CHECK(spec.channel_count() == 58);  // 4 * 15 - 2
  CHECK(spec.joint_name(spec.root_index()) == "pelvis");

  // Every non-root joint has exactly one parent and appears as the child of
  // exactly one part.
  std::vector<int> child_seen(spec.joint_count(), 0);
  for (int p = 0; p < spec.part_count(); ++p) {
    child_seen[spec.part(p).child] += 1;
    CHECK(spec.part(p).parent == spec.parent_of(spec.part(p).child));
  }
  for (int j = 0; j < spec.joint_count(); ++j)
    CHECK(child_seen[j] == (j == spec.root_index() ? 0 : 1));

  // BFS property: a part's parent joint is the root or some earlier child.
  for (int p = 0; p < spec.part_count(); ++p) {
    const int parent = spec.part(p).parent;
    if (parent == spec.root_index()) continue;
    const int parent_part = spec.part_to(parent);
    CHECK(parent_part >= 0);
    CHECK(parent_part < p);
  }
}

TEST_CASE("skeleton validation rejects malformed trees") {
  CHECK_THROWS_AS(SkeletonSpec("bad", {"a", "b"}, {1, 0}, 0),
                  std::invalid_argument);  // cycle through the root
  CHECK_THROWS_AS(SkeletonSpec("bad", {"a", "b", "c"}, {-1, 0, 1}, 1),
                  std::invalid_argument);  // root parent not -1
  CHECK_THROWS_AS(SkeletonSpec("bad", {"a", "b", "c"}, {-1, 2, 1}, 0),
                  std::invalid_argument);  // b<->c cycle, unreachable
}

TEST_CASE("mean_bone_lengths averages visible samples") {
  const SkeletonSpec spec = default_skeleton();
  const int neck = spec.joint_index("neck");
  const int neck_part = spec.part_to(neck);

  std::vector<Point3D> offsets(spec.joint_count());
  // Spread joints so every bone has a distinct positive length.
  for (int j = 0; j < spec.joint_count(); ++j)
    offsets[j] = Point3D{100.0 * j, 40.0 * j, 10.0 * j};

  AbsolutePose3D a = pose_from_offsets(offsets);
  AbsolutePose3D b = pose_from_offsets(offsets);
  // Stretch the neck in pose b: lengths 280 and 320 should average to 300.
  const int pelvis = spec.root_index();
  auto set_neck_len = [&](AbsolutePose3D& pose, double len) {
    pose.joints[neck].pos = pose.joints[pelvis].pos;
    pose.joints[neck].pos.y -= len;
  };
  set_neck_len(a, 280.0);
  set_neck_len(b, 320.0);

  const std::vector<AbsolutePose3D> poses{a, b};
  const BoneStats stats = mean_bone_lengths(poses, spec);
  CHECK(stats.mean_length[neck_part] == doctest::Approx(300.0));

  // Single sample: the mean is that sample.
  const std::vector<AbsolutePose3D> single{a};
  CHECK(mean_bone_lengths(single, spec).mean_length[neck_part] ==
        doctest::Approx(280.0));
}

TEST_CASE("mean_bone_lengths matches a brute-force accumulation") {
  const SkeletonSpec spec = default_skeleton();
  Rng rng(23);
  std::vector<AbsolutePose3D> poses;
  for (int i = 0; i < 100; ++i) {
    std::vector<Point3D> offsets(spec.joint_count());
    for (int j = 0; j < spec.joint_count(); ++j)
      offsets[j] = Point3D{rng.uniform(-800, 800), rng.uniform(-800, 800),
                           rng.uniform(-400, 400)};
    AbsolutePose3D pose = pose_from_offsets(offsets);
    for (Joint3D& joint : pose.joints) joint.visible = rng.uniform() < 0.9;
    pose.joints[spec.root_index()].visible = true;
    poses.push_back(std::move(pose));
  }
  // Guarantee at least one visible sample per part.
  for (AbsolutePose3D& pose : poses)
    for (Joint3D& joint : pose.joints) joint.visible = joint.visible || &pose == &poses[0];

  const BoneStats stats = mean_bone_lengths(poses, spec);
  for (int p = 0; p < spec.part_count(); ++p) {
    double sum = 0.0;
    long n = 0;
    for (const AbsolutePose3D& pose : poses) {
      const Joint3D& pa = pose.joints[spec.part(p).parent];
      const Joint3D& ch = pose.joints[spec.part(p).child];
      if (!pa.visible || !ch.visible) continue;
      sum += distance(pa.pos, ch.pos);
      n += 1;
    }
    CHECK(std::abs(stats.mean_length[p] - sum / n) < 1e-9);
  }
}

TEST_CASE("mean_bone_lengths reports parts without samples") {
  const SkeletonSpec spec = default_skeleton();
  std::vector<Point3D> offsets(spec.joint_count());
  for (int j = 0; j < spec.joint_count(); ++j)
    offsets[j] = Point3D{50.0 * j, 0, 0};
  AbsolutePose3D pose = pose_from_offsets(offsets);
  pose.joints[spec.joint_index("head")].visible = false;
  const std::vector<AbsolutePose3D> poses{pose};
  CHECK_THROWS_WITH_AS(mean_bone_lengths(poses, spec),
                       doctest::Contains("head"), std::invalid_argument);
}

TEST_CASE("validate_pose flags stretched bones") {
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);

  // Build a pose with every bone exactly at its mean length.
  AbsolutePose3D pose;
  pose.joints.assign(spec.joint_count(), Joint3D{Point3D{0, 0, 3000}, true});
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    Point3D pos = pose.joints[part.parent].pos;
    pos.x += stats.mean_length[p];  // direction is irrelevant for lengths
    pose.joints[part.child].pos = pos;
  }
  CHECK(validate_pose(pose, spec, stats, 0.05).empty());

  // Doubling one bone is a 100% deviation; tol 0.5 must flag exactly it.
  AbsolutePose3D stretched = pose;
  const int head = spec.joint_index("head");
  const int neck = spec.joint_index("neck");
  stretched.joints[head].pos.x =
      stretched.joints[neck].pos.x + 2.0 * stats.mean_length[spec.part_to(head)];
  const auto violations = validate_pose(stretched, spec, stats, 0.5);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].part == spec.part_to(head));
  CHECK(violations[0].deviation == doctest::Approx(1.0));
}

TEST_CASE("validate_pose accepts jitter within tolerance") {
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);
  Rng rng(31);
  AbsolutePose3D pose;
  pose.joints.assign(spec.joint_count(), Joint3D{Point3D{0, 0, 3000}, true});
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    Point3D pos = pose.joints[part.parent].pos;
    pos.y += stats.mean_length[p] * (1.0 + rng.uniform(-0.12, 0.12));
    pose.joints[part.child].pos = pos;
  }
  CHECK(validate_pose(pose, spec, stats, 0.121).empty());
}

TEST_CASE("mean_bone_lengths is permutation invariant") {
  const SkeletonSpec spec = default_skeleton();
  Rng rng(37);
  std::vector<AbsolutePose3D> poses;
  for (int i = 0; i < 10; ++i) {
    std::vector<Point3D> offsets(spec.joint_count());
    for (int j = 0; j < spec.joint_count(); ++j)
      offsets[j] = Point3D{rng.uniform(-500, 500), rng.uniform(-500, 500), 0};
    poses.push_back(pose_from_offsets(offsets));
  }
  std::vector<AbsolutePose3D> reversed(poses.rbegin(), poses.rend());
  const BoneStats a = mean_bone_lengths(poses, spec);
  const BoneStats b = mean_bone_lengths(reversed, spec);
  for (int p = 0; p < spec.part_count(); ++p)
    CHECK(a.mean_length[p] == doctest::Approx(b.mean_length[p]));
}
