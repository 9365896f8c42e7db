// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pose25d/decoder.hpp"
#include "pose25d/encoder.hpp"
#include "pose25d/metrics.hpp"
#include "pose25d/skeleton.hpp"
#include "pose25d/synth.hpp"
#include "pose25d/tensor_io.hpp"
#include "pose25d/types.hpp"

namespace pose25d {

using Json = nlohmann::json;

inline constexpr int kSceneFormatVersion = 1;

struct SceneDocument {
  Scene scene;
  SkeletonSpec skeleton;
  Json provenance;  // config echo carried by the file, may be null
};

// Scene files: camera, skeleton (name or inline spec), people with named
// joints in millimeters, units declared in the header.
Json scene_to_json(const Scene& scene, const SkeletonSpec& spec,
                   const Json& provenance = Json());
SceneDocument scene_from_json(const Json& j, const std::string& context);
void write_scene(const std::filesystem::path& path, const Scene& scene,
                 const SkeletonSpec& spec, const Json& provenance = Json());
SceneDocument read_scene(const std::filesystem::path& path);

Json skeleton_to_json(const SkeletonSpec& spec);
SkeletonSpec skeleton_from_json(const Json& j, const std::string& context);

Json bone_stats_to_json(const BoneStats& stats, const SkeletonSpec& spec);
BoneStats bone_stats_from_json(const Json& j, const SkeletonSpec& spec,
                               const std::string& context);
void write_bone_stats(const std::filesystem::path& path,
                      const BoneStats& stats, const SkeletonSpec& spec);
BoneStats read_bone_stats(const std::filesystem::path& path,
                          const SkeletonSpec& spec);

// Accepts either a bare intrinsics object or any document with a "camera"
// member (scene files and encode sidecars both qualify).
CameraIntrinsics camera_from_json(const Json& j, const std::string& context);
CameraIntrinsics read_camera(const std::filesystem::path& path);

Json report_to_json(const MetricReport& report,
                    const Json& provenance = Json());
void write_report(const std::filesystem::path& path,
                  const MetricReport& report, const Json& provenance = Json());
// Fixed-width text table with the matched/all-people metric rows.
std::string format_report_table(const MetricReport& report);

// Config objects round-trip through JSON; absent fields keep their defaults.
Json encoder_config_to_json(const EncoderConfig& cfg);
EncoderConfig encoder_config_from_json(const Json& j);
Json assoc_config_to_json(const AssocConfig& cfg);
AssocConfig assoc_config_from_json(const Json& j);
Json synth_config_to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const Json& j);
Json eval_config_to_json(const EvalConfig& cfg);
EvalConfig eval_config_from_json(const Json& j);

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);

}  // namespace pose25d
