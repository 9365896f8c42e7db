// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pose25d/skeleton.hpp"
#include "pose25d/types.hpp"

namespace pose25d {

struct MatchPolicy {
  double gate_px = 40.0;  // max 2D root-projection distance for a match
};

// Injective prediction <-> ground-truth pairing for one frame.
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (pred index, gt index)
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;
};

enum class PckMode { kRelative, kAbsolute, kRoot };

struct EvalConfig {
  MatchPolicy match;
  double pck_threshold_mm = 150.0;
  double pcod_tie_mm = 300.0;
  // AUC grid: 5..150 mm in 5 mm steps. The grid starts above zero because a
  // strict less-than rule makes PCK at 0 mm vacuously zero.
  std::vector<double> auc_thresholds = default_auc_thresholds();

  static std::vector<double> default_auc_thresholds();
};

struct MetricReport {
  // Undefined metrics (no matched people, etc.) stay empty.
  std::optional<double> mpjpe_mm;
  std::optional<double> rt_error_mm;
  std::optional<double> pck_rel_matched;
  std::optional<double> pck_abs_matched;
  std::optional<double> pck_root_matched;
  std::optional<double> pck_rel_all;
  std::optional<double> pck_abs_all;
  std::optional<double> auc_rel;
  std::optional<double> pcod;
  double recall_pct = 0.0;

  long matched_people = 0;
  long total_gt_people = 0;
  long total_pred_people = 0;

  // Configuration echoed for reproducibility.
  double gate_px = 0.0;
  double pck_threshold_mm = 0.0;
  double pcod_tie_mm = 0.0;
};

// Greedy matching on ascending 2D root-projection distance; a pair is
// admissible when the predicted root projects within gate_px of the
// ground-truth root. Each person is used at most once.
Matching match_people(const std::vector<AbsolutePose3D>& pred,
                      const std::vector<AbsolutePose3D>& gt,
                      const CameraIntrinsics& cam, const SkeletonSpec& spec,
                      const MatchPolicy& policy);

// Root-aligned mean per-joint error, averaged over matched pairs. Joints must
// be visible in gt and present in the prediction to contribute.
std::optional<double> mpjpe(const std::vector<AbsolutePose3D>& pred,
                            const std::vector<AbsolutePose3D>& gt,
                            const Matching& matching, const SkeletonSpec& spec);

// Mean 3D distance between matched root joints.
std::optional<double> rt_error(const std::vector<AbsolutePose3D>& pred,
                               const std::vector<AbsolutePose3D>& gt,
                               const Matching& matching,
                               const SkeletonSpec& spec);

// Percentage of gt joints whose prediction error is strictly below the
// threshold. `over_all_people` counts unmatched gt people as incorrect;
// otherwise they are excluded.
std::optional<double> pck3d(const std::vector<AbsolutePose3D>& pred,
                            const std::vector<AbsolutePose3D>& gt,
                            const Matching& matching, const SkeletonSpec& spec,
                            double threshold_mm, PckMode mode,
                            bool over_all_people = false);

// Trapezoidal mean of root-aligned PCK over a strictly increasing threshold
// grid, yielding a value in [0, 100].
std::optional<double> auc_rel(const std::vector<AbsolutePose3D>& pred,
                              const std::vector<AbsolutePose3D>& gt,
                              const Matching& matching,
                              const SkeletonSpec& spec,
                              std::span<const double> thresholds);

// Percentage of unordered matched-person pairs whose ordinal root-depth
// relation (closer / farther / roughly the same within `tie_mm`) agrees with
// the ground truth. Undefined below two matched people.
std::optional<double> pcod(const std::vector<AbsolutePose3D>& pred,
                           const std::vector<AbsolutePose3D>& gt,
                           const Matching& matching, const SkeletonSpec& spec,
                           double tie_mm = 300.0);

// Full metric suite over a set of frames. Frames are matched independently;
// joints, pairs and people pool across frames before averaging.
MetricReport evaluate(std::span<const Scene> pred_frames,
                      std::span<const Scene> gt_frames,
                      const SkeletonSpec& spec, const EvalConfig& config);

}  // namespace pose25d
