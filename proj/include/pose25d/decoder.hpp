// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pose25d/skeleton.hpp"
#include "pose25d/stack.hpp"
#include "pose25d/types.hpp"

namespace pose25d {

struct AssocConfig {
  double lambda = 1.5;          // bone-length relaxation factor
  int paf_samples = 10;         // line-integral sample count
  double min_paf_score = 0.2;   // link acceptance floor
  double nms_radius = 2.0;      // peak suppression radius, map px
  double detect_threshold = 0.1;

  void validate() const;
};

// Keypoint detection from one heatmap channel. `pos` is map pixels with
// sub-pixel refinement; `score` is the raw heatmap value at the peak pixel.
struct KeypointCandidate {
  int joint_type = -1;
  Point2D pos;
  double score = 0.0;
};

// candidates[joint_type] in row-major scan order of the peak pixel.
using CandidateLists = std::vector<std::vector<KeypointCandidate>>;

// An accepted parent->child connection. Candidate ids index the per-type
// candidate lists; length_2d is map pixels.
struct LinkCandidate {
  int part = -1;
  int parent_candidate = -1;
  int child_candidate = -1;
  double paf_score = 0.0;
  double length_2d = 0.0;
};

struct DetectedJoint {
  Point2D pos;           // map px after association, image px after read_depths
  double score = 0.0;
  int candidate = -1;    // id within the joint type's candidate list
  bool present = false;
};

struct PersonHypothesis {
  std::vector<DetectedJoint> joints;   // indexed by skeleton joint id
  double root_depth = 0.0;             // FoV-normalized root depth, mm
  std::vector<double> joint_depth;     // metric mm, filled by read_depths
  std::vector<std::uint8_t> depth_known;
  std::vector<LinkCandidate> links;    // accepted links, for inspection
};

// Local maxima above detect_threshold. A pixel survives when it is >= every
// pixel within nms_radius; equal-valued neighbors are resolved by scan order
// (smaller row, then smaller column survives). Sub-pixel refinement fits a
// quadratic to the 3x3 neighborhood, clamped to +-0.5 px.
CandidateLists extract_keypoints(const RepresentationStack& stack,
                                 const AssocConfig& cfg);

// Mean over paf_samples points, uniformly spaced on segment a->b (endpoints
// included), of dot(field, unit(b - a)), with nearest-pixel field lookup.
// Throws std::domain_error on a zero-length segment.
double paf_score(const Point2D& a, const Point2D& b,
                 const RepresentationStack& stack, int part,
                 const AssocConfig& cfg);

// Adaptive bone-length threshold lambda * D_bone / Z~, expressed as a
// fraction of image width; callers compare length_2d / width against it.
double link_threshold(int part, double root_depth_norm, const BoneStats& stats,
                      const AssocConfig& cfg);

// Depth-aware part association: roots sorted near-to-far seed hypotheses in
// priority order; parts are traversed in skeleton BFS order, each hypothesis
// greedily claiming the best unclaimed child candidate that passes the PAF
// floor and the adaptive bone-length constraint. Claims are exclusive and
// never preempted.
std::vector<PersonHypothesis> depth_aware_associate(
    const CandidateLists& candidates, const RepresentationStack& stack,
    const SkeletonSpec& spec, const BoneStats& stats, const AssocConfig& cfg);

// Plain 2D baseline: same traversal, but per part all links are ranked by
// PAF score alone under a fixed half-image-width distance cap; no depth
// priority, no bone-length constraint. Kept for ablation runs.
std::vector<PersonHypothesis> associate_2d(const CandidateLists& candidates,
                                           const RepresentationStack& stack,
                                           const SkeletonSpec& spec,
                                           const AssocConfig& cfg);

// Fills metric joint depths: the root from the denormalized root depth, then
// children along the tree as Z_child = Z_parent + mean relative-depth sample
// over the 2D segment (same sampling as paf_score). Also converts joint
// positions from map pixels to image pixels.
void read_depths(PersonHypothesis& person, const RepresentationStack& stack,
                 const SkeletonSpec& spec, const CameraIntrinsics& cam,
                 const AssocConfig& cfg);

// Back-projects every joint with a known depth; absent joints are invisible.
AbsolutePose3D reconstruct_3d(const PersonHypothesis& person,
                              const CameraIntrinsics& cam);

enum class AssociationMode { kDepthAware, kPaf2d };

// Optional post-reconstruction refinement: (2D joints, root-relative pose)
// -> root-relative pose. The root translation (and hence the root depth) is
// re-anchored after the hook, so the hook cannot change it.
using RefineHook = std::function<AbsolutePose3D(
    const std::vector<DetectedJoint>&, const AbsolutePose3D&)>;

// extract -> associate -> read_depths -> reconstruct_3d. Output is sorted
// near-to-far by root depth. Deterministic for a fixed stack and config.
std::vector<AbsolutePose3D> decode(
    const RepresentationStack& stack, const CameraIntrinsics& cam,
    const SkeletonSpec& spec, const BoneStats& stats, const AssocConfig& cfg,
    AssociationMode mode = AssociationMode::kDepthAware,
    const RefineHook& refine = {});

// decode() that also returns the intermediate hypotheses (same order as the
// returned poses); used by ablation tooling and tests.
std::vector<AbsolutePose3D> decode_with_hypotheses(
    const RepresentationStack& stack, const CameraIntrinsics& cam,
    const SkeletonSpec& spec, const BoneStats& stats, const AssocConfig& cfg,
    AssociationMode mode, const RefineHook& refine,
    std::vector<PersonHypothesis>* hypotheses_out);

}  // namespace pose25d
