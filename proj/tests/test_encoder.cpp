#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pose25d/encoder.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace pose25d;
using pose25d::testing::blank_pose;
using pose25d::testing::place_joint;
using pose25d::testing::small_cam;

namespace {

bool channel_equals(const RepresentationStack& stack, int channel,
                    const std::vector<float>& expected) {
  const auto actual = stack.channel(channel);
  if (actual.size() != expected.size()) return false;
  for (size_t i = 0; i < expected.size(); ++i)
    if (actual[i] != expected[i]) return false;
  return true;
}

bool all_zero(std::span<const float> v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; });
}

}  // namespace

TEST_CASE("empty scene encodes to an all-zero 4J-2 stack") {
  const SkeletonSpec spec = default_skeleton();
  const Scene scene{small_cam(), {}};
  const RepresentationStack stack = encode(scene, spec, EncoderConfig{});
  CHECK(stack.channel_count() == 58);
  CHECK(all_zero(std::span<const float>(stack.data())));
}

TEST_CASE("single joint renders a Gaussian peaking at exactly 1") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int neck = spec.joint_index("neck");

  Scene scene{cam, {blank_pose(spec)}};
  place_joint(scene.people[0], neck, Point2D{100, 50}, 3000, cam);

  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_heatmaps(scene, spec, EncoderConfig{}, stack);

  const int c = stack.heatmap_channel(neck);
  CHECK(stack.at(c, 50, 100) == 1.0f);
  float max_value = 0.0f;
  for (float v : stack.channel(c)) max_value = std::max(max_value, v);
  CHECK(max_value == 1.0f);
  // Sigma 4: one pixel off drops to exp(-1/32).
  CHECK(stack.at(c, 50, 101) ==
        doctest::Approx(std::exp(-1.0 / 32.0)).epsilon(1e-6));
  // Other heatmap channels stay empty.
  CHECK(all_zero(stack.channel(stack.heatmap_channel(spec.root_index()))));
}

TEST_CASE("sub-pixel joints snap to the nearest pixel with peak 1") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int neck = spec.joint_index("neck");
  Scene scene{cam, {blank_pose(spec)}};
  place_joint(scene.people[0], neck, Point2D{70.4, 41.7}, 2500, cam);

  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_heatmaps(scene, spec, EncoderConfig{}, stack);
  CHECK(stack.at(stack.heatmap_channel(neck), 42, 70) == 1.0f);
}

TEST_CASE("overlapping same-type joints merge by per-pixel max") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int neck = spec.joint_index("neck");

  Scene scene{cam, {blank_pose(spec), blank_pose(spec)}};
  place_joint(scene.people[0], neck, Point2D{80, 60}, 3000, cam);
  place_joint(scene.people[1], neck, Point2D{83, 60}, 4000, cam);

  const EncoderConfig cfg;
  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_heatmaps(scene, spec, cfg, stack);

  const auto expected =
      oracle::dense_heatmap(scene, spec, cfg, neck, 120, 160);
  CHECK(channel_equals(stack, stack.heatmap_channel(neck), expected));
  CHECK(stack.at(stack.heatmap_channel(neck), 60, 80) == 1.0f);
  CHECK(stack.at(stack.heatmap_channel(neck), 60, 83) == 1.0f);
}

TEST_CASE("heatmap values stay in [0, 1]") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  Scene scene{cam, {blank_pose(spec), blank_pose(spec)}};
  for (int j = 0; j < spec.joint_count(); ++j) {
    place_joint(scene.people[0], j, Point2D{20.0 + 7 * j, 30.0 + 3 * j}, 2000,
                cam);
    place_joint(scene.people[1], j, Point2D{25.0 + 7 * j, 33.0 + 3 * j}, 2600,
                cam);
  }
  const RepresentationStack stack = encode(scene, spec, EncoderConfig{});
  for (int j = 0; j < spec.joint_count(); ++j)
    for (float v : stack.channel(stack.heatmap_channel(j))) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
}

TEST_CASE("horizontal part renders a (1, 0) unit field on its band") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int part = spec.part_to(spec.joint_index("neck"));

  Scene scene{cam, {blank_pose(spec)}};
  place_joint(scene.people[0], spec.root_index(), Point2D{40, 60}, 3000, cam);
  place_joint(scene.people[0], spec.joint_index("neck"), Point2D{90, 60}, 3000,
              cam);

  const EncoderConfig cfg;
  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_pafs(scene, spec, cfg, stack);

  CHECK(stack.at(stack.paf_x_channel(part), 60, 65) == 1.0f);
  CHECK(stack.at(stack.paf_y_channel(part), 60, 65) == 0.0f);
  CHECK(stack.at(stack.paf_x_channel(part), 64, 65) == 1.0f);  // inside band
  CHECK(stack.at(stack.paf_x_channel(part), 70, 65) == 0.0f);  // outside
  CHECK(stack.at(stack.paf_x_channel(part), 60, 30) == 0.0f);  // before start

  const auto [ex, ey] = oracle::dense_paf(scene, spec, cfg, part, 120, 160);
  CHECK(channel_equals(stack, stack.paf_x_channel(part), ex));
  CHECK(channel_equals(stack, stack.paf_y_channel(part), ey));
}

TEST_CASE("antiparallel overlapping limbs average below unit magnitude") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int neck = spec.joint_index("neck");
  const int part = spec.part_to(neck);

  // Same band, opposite directions, different depths.
  Scene scene{cam, {blank_pose(spec), blank_pose(spec)}};
  place_joint(scene.people[0], spec.root_index(), Point2D{40, 60}, 3000, cam);
  place_joint(scene.people[0], neck, Point2D{90, 60}, 3000, cam);
  place_joint(scene.people[1], spec.root_index(), Point2D{90, 61}, 4000, cam);
  place_joint(scene.people[1], neck, Point2D{40, 61}, 4000, cam);

  const EncoderConfig cfg;
  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_pafs(scene, spec, cfg, stack);

  const auto [ex, ey] = oracle::dense_paf(scene, spec, cfg, part, 120, 160);
  CHECK(channel_equals(stack, stack.paf_x_channel(part), ex));
  CHECK(channel_equals(stack, stack.paf_y_channel(part), ey));

  // In the overlap the averaged field collapses towards zero.
  const double fx = stack.at(stack.paf_x_channel(part), 60, 65);
  const double fy = stack.at(stack.paf_y_channel(part), 60, 65);
  CHECK(std::hypot(fx, fy) < 1.0);
  CHECK(std::abs(fx) < 1e-6);

  // PAF magnitude never exceeds 1 anywhere.
  for (size_t i = 0; i < stack.channel(0).size(); ++i) {
    const double mx = stack.channel(stack.paf_x_channel(part))[i];
    const double my = stack.channel(stack.paf_y_channel(part))[i];
    CHECK(std::hypot(mx, my) <= 1.0 + 1e-6);
  }
}

TEST_CASE("root depth disk carries normalized depth, nearer person wins") {
  const SkeletonSpec spec = default_skeleton();
  // w/f = 0.5 turns Z=4000 into 2000.
  const CameraIntrinsics cam{240, 60, 45, 120, 90};
  const int root = spec.root_index();

  SUBCASE("single person") {
    Scene scene{cam, {blank_pose(spec)}};
    place_joint(scene.people[0], root, Point2D{60, 45}, 4000, cam);
    RepresentationStack stack(spec.joint_count(), 90, 120);
    render_root_depth_map(scene, spec, EncoderConfig{}, stack);
    CHECK(stack.at(stack.root_depth_channel(), 45, 60) == 2000.0f);
    CHECK(stack.at(stack.root_depth_channel(), 45, 62) == 2000.0f);
    CHECK(stack.at(stack.root_depth_channel(), 45, 63) == 0.0f);
  }

  SUBCASE("overlapping disks keep the nearer depth") {
    Scene scene{cam, {blank_pose(spec), blank_pose(spec)}};
    place_joint(scene.people[0], root, Point2D{60, 45}, 3000, cam);
    place_joint(scene.people[1], root, Point2D{62, 45}, 2000, cam);
    const EncoderConfig cfg;
    RepresentationStack stack(spec.joint_count(), 90, 120);
    render_root_depth_map(scene, spec, cfg, stack);

    const auto expected = oracle::dense_root_depth(scene, spec, cfg, 90, 120);
    CHECK(channel_equals(stack, stack.root_depth_channel(), expected));
    // Pixel covered by both disks holds the nearer person's value.
    CHECK(stack.at(stack.root_depth_channel(), 45, 61) ==
          static_cast<float>(normalize_depth(2000, cam).value));
  }
}

TEST_CASE("relative depth band holds child minus parent") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(160, 120);
  const int neck = spec.joint_index("neck");
  const int part = spec.part_to(neck);

  Scene scene{cam, {blank_pose(spec)}};
  place_joint(scene.people[0], spec.root_index(), Point2D{40, 60}, 3000, cam);
  place_joint(scene.people[0], neck, Point2D{90, 60}, 3200, cam);

  RepresentationStack stack(spec.joint_count(), 120, 160);
  render_relative_depth_maps(scene, spec, EncoderConfig{}, stack);
  CHECK(stack.at(stack.rel_depth_channel(part), 60, 65) == 200.0f);

  SUBCASE("equal depths give a zero band, distinguishable from background") {
    Scene flat{cam, {blank_pose(spec)}};
    place_joint(flat.people[0], spec.root_index(), Point2D{40, 60}, 3000, cam);
    place_joint(flat.people[0], neck, Point2D{90, 60}, 3000, cam);
    RepresentationStack s2(spec.joint_count(), 120, 160);
    render_relative_depth_maps(flat, spec, EncoderConfig{}, s2);
    CHECK(s2.at(s2.rel_depth_channel(part), 60, 65) == 0.0f);
  }

  SUBCASE("two-person overlap matches the per-pixel oracle") {
    Scene overlap{cam, {blank_pose(spec), blank_pose(spec)}};
    place_joint(overlap.people[0], spec.root_index(), Point2D{40, 60}, 3000,
                cam);
    place_joint(overlap.people[0], neck, Point2D{90, 60}, 3250, cam);
    place_joint(overlap.people[1], spec.root_index(), Point2D{50, 62}, 2400,
                cam);
    place_joint(overlap.people[1], neck, Point2D{95, 58}, 2300, cam);
    const EncoderConfig cfg;
    RepresentationStack s3(spec.joint_count(), 120, 160);
    render_relative_depth_maps(overlap, spec, cfg, s3);
    const auto expected = oracle::dense_rel_depth(overlap, spec, cfg, part,
                                                  120, 160);
    CHECK(channel_equals(s3, s3.rel_depth_channel(part), expected));
  }
}

TEST_CASE("encode is deterministic") {
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);
  const CameraIntrinsics cam = small_cam(240, 180, 240);
  Scene scene{cam,
              {pose25d::testing::standing_person(spec, stats,
                                                 Point3D{0, 0, 4000}),
               pose25d::testing::standing_person(spec, stats,
                                                 Point3D{800, 100, 5200})}};
  const RepresentationStack a = encode(scene, spec, EncoderConfig{});
  const RepresentationStack b = encode(scene, spec, EncoderConfig{});
  CHECK(a.data() == b.data());
}

TEST_CASE("root depth disks order people exactly like true depth") {
  const SkeletonSpec spec = default_skeleton();
  const CameraIntrinsics cam = small_cam(320, 200, 320);
  Scene scene{cam, {}};
  const std::vector<double> depths{5200, 2450, 3900, 3100};
  for (size_t i = 0; i < depths.size(); ++i) {
    AbsolutePose3D pose = blank_pose(spec);
    place_joint(pose, spec.root_index(),
                Point2D{60.0 + 60.0 * i, 100.0}, depths[i], cam);
    scene.people.push_back(pose);
  }
  RepresentationStack stack(spec.joint_count(), 200, 320);
  render_root_depth_map(scene, spec, EncoderConfig{}, stack);

  std::vector<float> disk_values;
  for (size_t i = 0; i < depths.size(); ++i)
    disk_values.push_back(
        stack.at(stack.root_depth_channel(), 100, 60 + 60 * i));
  for (size_t i = 0; i < depths.size(); ++i)
    for (size_t k = 0; k < depths.size(); ++k)
      CHECK((depths[i] < depths[k]) == (disk_values[i] < disk_values[k]));
}

TEST_CASE("loss arithmetic matches the hand-computed cases") {
  const SkeletonSpec spec = default_skeleton();
  RepresentationStack gt(spec.joint_count(), 16, 16);
  RepresentationStack pred = gt;

  SUBCASE("identical stacks have zero loss") {
    const LossReport r = compute_losses(pred, gt, {});
    CHECK(r.l_2d == 0.0);
    CHECK(r.l_dz == 0.0);
    CHECK(r.l_rz == 0.0);
    CHECK(r.total == 0.0);
  }

  SUBCASE("default weights are 0.1 / 5 / 10") {
    const LossWeights w;
    CHECK(w.w_2d == 0.1);
    CHECK(w.w_dz == 5.0);
    CHECK(w.w_rz == 10.0);
  }

  SUBCASE("one heatmap pixel off by 0.5") {
    pred.at(pred.heatmap_channel(3), 4, 5) = 0.5f;
    const LossReport r = compute_losses(pred, gt, {});
    CHECK(r.l_2d == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(0.025).epsilon(1e-12));
  }

  SUBCASE("relative-depth and root terms") {
    pred.at(pred.rel_depth_channel(2), 3, 3) = 3.0f;  // (3-0)^2 = 9
    gt.at(gt.root_depth_channel(), 8, 8) = 1000.0f;
    pred.at(pred.root_depth_channel(), 8, 8) = 998.0f;  // |998-1000| = 2
    const std::vector<std::pair<Point2D, NormalizedDepth>> roots{
        {Point2D{8, 8}, NormalizedDepth{1000.0}}};
    const LossReport r = compute_losses(pred, gt, roots);
    CHECK(r.l_dz == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(r.l_rz == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(5.0 * 9.0 + 10.0 * 2.0).epsilon(1e-12));
  }

  SUBCASE("shape mismatch is rejected") {
    RepresentationStack other(spec.joint_count(), 16, 17);
    CHECK_THROWS_AS(compute_losses(other, gt, {}), std::invalid_argument);
  }
}
