// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "pose25d/skeleton.hpp"
#include "pose25d/types.hpp"

namespace pose25d {

// Synthetic scene generation. Stands in for real capture data: seeded poses
// sampled around the bone statistics, with optional forced inter-person
// overlap and image truncation.
struct SynthConfig {
  std::uint64_t seed = 1;
  int min_people = 1;
  int max_people = 5;
  double min_depth_mm = 2000.0;
  double max_depth_mm = 6000.0;
  double overlap_probability = 0.0;     // chance a scene forces two people
                                        // to intersect in 2D
  double truncation_probability = 0.0;  // per-person chance of edge placement
  double bone_jitter = 0.1;             // fractional bone-length jitter
  double image_width = 832.0;
  double image_height = 512.0;
  double focal = 0.0;  // <= 0 means default (= image width)

  void validate() const;
};

// Deterministic for a fixed config: the seed fully determines the output.
// Person count is sampled from the configured range; people that cannot be
// placed under the spacing rules are dropped.
Scene synth_scene(const SynthConfig& cfg, const SkeletonSpec& spec,
                  const BoneStats& stats);

// Exactly `count` people on a jittered grid. Bodies may overlap freely (only
// roots keep their minimum separation), so dense crowds fit in the frame;
// used for association benchmarks.
Scene synth_crowd(const SynthConfig& cfg, const SkeletonSpec& spec,
                  const BoneStats& stats, int count);

}  // namespace pose25d
