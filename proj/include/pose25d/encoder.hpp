// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "pose25d/skeleton.hpp"
#include "pose25d/stack.hpp"
#include "pose25d/types.hpp"

namespace pose25d {

// Rendering hyperparameters. All distances are map pixels.
struct EncoderConfig {
  double sigma = 4.0;              // heatmap Gaussian std
  double paf_half_width = 4.0;     // limb band half-width
  double root_disk_radius = 2.0;   // supervised disk around root projections
  int map_stride = 1;              // output stride relative to input image
  double gaussian_cutoff = 4.0;    // Gaussian support radius, in sigmas

  void validate() const;
};

// Map dimensions implied by the camera and the stride.
std::pair<int, int> map_size(const CameraIntrinsics& cam,
                             const EncoderConfig& cfg);  // {height, width}

// Each renderer fills only its own channel group of `out`.
//
// Heatmaps: per-person Gaussians exp(-d^2 / 2 sigma^2) merged by per-pixel
// max. The Gaussian center is the projected joint rounded to the nearest map
// pixel, so every rendered joint peaks at exactly 1. Support is truncated at
// `gaussian_cutoff` sigmas; invisible joints render nothing.
void render_heatmaps(const Scene& scene, const SkeletonSpec& spec,
                     const EncoderConfig& cfg, RepresentationStack& out);

// PAFs: pixels within paf_half_width of the projected 2D segment carry the
// unit vector along it. Overlapping people average their vectors per pixel;
// the average is stored without renormalization.
void render_pafs(const Scene& scene, const SkeletonSpec& spec,
                 const EncoderConfig& cfg, RepresentationStack& out);

// Root depth: disks of root_disk_radius around projected roots carry the
// FoV-normalized root depth; where disks overlap the nearer person wins.
void render_root_depth_map(const Scene& scene, const SkeletonSpec& spec,
                           const EncoderConfig& cfg, RepresentationStack& out);

// Relative depth: each part's limb band (same geometry as its PAF band)
// carries Z_child - Z_parent in mm; overlaps resolved nearer-parent-wins
// (exact parent-depth ties keep the smaller value).
void render_relative_depth_maps(const Scene& scene, const SkeletonSpec& spec,
                                const EncoderConfig& cfg,
                                RepresentationStack& out);

// Composition of the four renderers into a fresh 4J-2 channel stack.
RepresentationStack encode(const Scene& scene, const SkeletonSpec& spec,
                           const EncoderConfig& cfg);

struct LossWeights {
  double w_2d = 0.1;
  double w_dz = 5.0;
  double w_rz = 10.0;
};

struct LossReport {
  double l_2d = 0.0;    // squared error over heatmaps + PAFs
  double l_dz = 0.0;    // squared error over relative-depth maps
  double l_rz = 0.0;    // L1 over root-depth readings at gt root pixels
  double total = 0.0;   // weighted sum
};

// gt_roots: projected root location (map pixels) and normalized depth of
// every ground-truth root; the root loss reads the predicted map at the
// nearest pixel of each. Throws std::invalid_argument on shape mismatch.
LossReport compute_losses(
    const RepresentationStack& pred, const RepresentationStack& gt,
    const std::vector<std::pair<Point2D, NormalizedDepth>>& gt_roots,
    const LossWeights& weights = LossWeights{});

}  // namespace pose25d
