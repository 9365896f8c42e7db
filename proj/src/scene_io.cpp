// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/scene_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pose25d {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw IoError(context + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) fail(ctx, "missing '" + std::string(key) + "'");
  return j.at(key);
}

double require_number(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number()) fail(ctx + "." + key, "must be a number");
  return v.get<double>();
}

double finite_number(const Json& j, const char* key, const std::string& ctx) {
  const double v = require_number(j, key, ctx);
  if (!std::isfinite(v)) fail(ctx + "." + key, "must be finite");
  return v;
}

template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError(path.string() + ": write failed");
}

Json skeleton_to_json(const SkeletonSpec& spec) {
  Json joints = Json::array();
  for (int i = 0; i < spec.joint_count(); ++i) {
    Json joint;
    joint["name"] = spec.joint_name(i);
    if (i == spec.root_index())
      joint["parent"] = nullptr;
    else
      joint["parent"] = spec.joint_name(spec.parent_of(i));
    joints.push_back(std::move(joint));
  }
  return Json{{"format", "pose25d.skeleton"},
              {"version", kSceneFormatVersion},
              {"name", spec.name()},
              {"root", spec.joint_name(spec.root_index())},
              {"joints", std::move(joints)}};
}

SkeletonSpec skeleton_from_json(const Json& j, const std::string& ctx) {
  const Json& joints = require(j, "joints", ctx);
  if (!joints.is_array() || joints.size() < 2)
    fail(ctx + ".joints", "must be an array of at least two joints");
  std::vector<std::string> names;
  std::vector<std::string> parent_names;
  for (size_t i = 0; i < joints.size(); ++i) {
    const std::string jctx = ctx + ".joints[" + std::to_string(i) + "]";
    const Json& joint = joints.at(i);
    names.push_back(require(joint, "name", jctx).get<std::string>());
    const Json& parent = require(joint, "parent", jctx);
    parent_names.push_back(parent.is_null() ? "" : parent.get<std::string>());
  }
  auto index_of = [&](const std::string& name) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  };
  std::vector<int> parent(names.size(), -1);
  int root = -1;
  for (size_t i = 0; i < names.size(); ++i) {
    if (parent_names[i].empty()) {
      if (root >= 0) fail(ctx, "multiple joints without a parent");
      root = static_cast<int>(i);
    } else {
      parent[i] = index_of(parent_names[i]);
      if (parent[i] < 0)
        fail(ctx + ".joints[" + std::to_string(i) + "]",
             "unknown parent '" + parent_names[i] + "'");
    }
  }
  if (root < 0) fail(ctx, "no root joint (every joint has a parent)");
  const std::string declared_root =
      j.contains("root") ? j.at("root").get<std::string>() : names[root];
  if (declared_root != names[root])
    fail(ctx, "'root' disagrees with the parentless joint");
  std::string name = "custom";
  maybe(j, "name", name);
  try {
    return SkeletonSpec(name, names, parent, root);
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
}

Json scene_to_json(const Scene& scene, const SkeletonSpec& spec,
                   const Json& provenance) {
  Json people = Json::array();
  for (const AbsolutePose3D& pose : scene.people) {
    Json joints = Json::array();
    for (int j = 0; j < spec.joint_count(); ++j) {
      const Joint3D& joint = pose.joints.at(j);
      joints.push_back(Json{{"name", spec.joint_name(j)},
                            {"X", joint.pos.x},
                            {"Y", joint.pos.y},
                            {"Z", joint.pos.z},
                            {"visible", joint.visible}});
    }
    people.push_back(Json{{"joints", std::move(joints)}});
  }
  Json out{{"format", "pose25d.scene"},
           {"version", kSceneFormatVersion},
           {"units", Json{{"length", "mm"}, {"image", "px"}}},
           {"camera", Json{{"f", scene.camera.f},
                           {"cx", scene.camera.cx},
                           {"cy", scene.camera.cy},
                           {"w", scene.camera.w},
                           {"h", scene.camera.h}}},
           {"skeleton", spec.name() == "human15" ? Json("human15")
                                                 : skeleton_to_json(spec)},
           {"people", std::move(people)}};
  if (!provenance.is_null()) out["provenance"] = provenance;
  return out;
}

SceneDocument scene_from_json(const Json& j, const std::string& ctx) {
  const Json& cam_json = require(j, "camera", ctx);
  CameraIntrinsics cam{finite_number(cam_json, "f", ctx + ".camera"),
                       finite_number(cam_json, "cx", ctx + ".camera"),
                       finite_number(cam_json, "cy", ctx + ".camera"),
                       finite_number(cam_json, "w", ctx + ".camera"),
                       finite_number(cam_json, "h", ctx + ".camera")};
  try {
    cam.validate();
  } catch (const std::domain_error& e) {
    fail(ctx + ".camera", e.what());
  }

  const Json& skel_json = require(j, "skeleton", ctx);
  SkeletonSpec spec =
      skel_json.is_string()
          ? (skel_json.get<std::string>() == "human15"
                 ? default_skeleton()
                 : throw IoError(ctx + ".skeleton: unknown skeleton '" +
                                 skel_json.get<std::string>() + "'"))
          : skeleton_from_json(skel_json, ctx + ".skeleton");

  SceneDocument doc{Scene{cam, {}}, std::move(spec), Json()};
  if (j.contains("provenance")) doc.provenance = j.at("provenance");

  const Json& people = require(j, "people", ctx);
  if (!people.is_array()) fail(ctx + ".people", "must be an array");
  for (size_t pi = 0; pi < people.size(); ++pi) {
    const std::string pctx = ctx + ".people[" + std::to_string(pi) + "]";
    AbsolutePose3D pose;
    pose.joints.resize(doc.skeleton.joint_count());
    const Json& joints = require(people.at(pi), "joints", pctx);
    if (!joints.is_array()) fail(pctx + ".joints", "must be an array");
    for (size_t ji = 0; ji < joints.size(); ++ji) {
      const std::string jctx = pctx + ".joints[" + std::to_string(ji) + "]";
      const Json& joint = joints.at(ji);
      const std::string name = require(joint, "name", jctx).get<std::string>();
      const int idx = doc.skeleton.joint_index(name);
      if (idx < 0) fail(jctx, "unknown joint '" + name + "'");
      Joint3D& slot = pose.joints[idx];
      slot.pos = Point3D{finite_number(joint, "X", jctx),
                         finite_number(joint, "Y", jctx),
                         finite_number(joint, "Z", jctx)};
      slot.visible = require(joint, "visible", jctx).get<bool>();
      if (slot.visible && !(slot.pos.z > 0.0))
        fail(jctx, "visible joint must have Z > 0");
    }
    doc.scene.people.push_back(std::move(pose));
  }
  return doc;
}

void write_scene(const std::filesystem::path& path, const Scene& scene,
                 const SkeletonSpec& spec, const Json& provenance) {
  save_json(path, scene_to_json(scene, spec, provenance));
}

SceneDocument read_scene(const std::filesystem::path& path) {
  return scene_from_json(load_json(path), path.string());
}

Json bone_stats_to_json(const BoneStats& stats, const SkeletonSpec& spec) {
  Json lengths;
  for (int p = 0; p < spec.part_count(); ++p)
    lengths[spec.joint_name(spec.part(p).child)] = stats.mean_length.at(p);
  return Json{{"format", "pose25d.bone_stats"},
              {"version", kSceneFormatVersion},
              {"skeleton", spec.name()},
              {"mean_length_mm", std::move(lengths)}};
}

BoneStats bone_stats_from_json(const Json& j, const SkeletonSpec& spec,
                               const std::string& ctx) {
  const Json& lengths = require(j, "mean_length_mm", ctx);
  BoneStats stats;
  stats.mean_length.assign(spec.part_count(), 0.0);
  for (int p = 0; p < spec.part_count(); ++p) {
    const std::string& child = spec.joint_name(spec.part(p).child);
    if (!lengths.contains(child))
      fail(ctx + ".mean_length_mm", "missing part '" + child + "'");
    const double v = lengths.at(child).get<double>();
    if (!(v > 0.0))
      fail(ctx + ".mean_length_mm." + child, "must be positive");
    stats.mean_length[p] = v;
  }
  return stats;
}

void write_bone_stats(const std::filesystem::path& path,
                      const BoneStats& stats, const SkeletonSpec& spec) {
  save_json(path, bone_stats_to_json(stats, spec));
}

BoneStats read_bone_stats(const std::filesystem::path& path,
                          const SkeletonSpec& spec) {
  return bone_stats_from_json(load_json(path), spec, path.string());
}

CameraIntrinsics camera_from_json(const Json& j, const std::string& ctx) {
  const Json& cam_json =
      j.is_object() && j.contains("camera") ? j.at("camera") : j;
  CameraIntrinsics cam{finite_number(cam_json, "f", ctx),
                       finite_number(cam_json, "cx", ctx),
                       finite_number(cam_json, "cy", ctx),
                       finite_number(cam_json, "w", ctx),
                       finite_number(cam_json, "h", ctx)};
  try {
    cam.validate();
  } catch (const std::domain_error& e) {
    fail(ctx, e.what());
  }
  return cam;
}

CameraIntrinsics read_camera(const std::filesystem::path& path) {
  return camera_from_json(load_json(path), path.string());
}

namespace {

Json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "      -";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%7.2f", *v);
  return buf;
}

}  // namespace

Json report_to_json(const MetricReport& r, const Json& provenance) {
  Json out{{"format", "pose25d.report"},
           {"version", kSceneFormatVersion},
           {"recall_pct", r.recall_pct},
           {"mpjpe_mm", optional_to_json(r.mpjpe_mm)},
           {"rt_error_mm", optional_to_json(r.rt_error_mm)},
           {"matched_people",
            Json{{"pck_rel", optional_to_json(r.pck_rel_matched)},
                 {"pck_abs", optional_to_json(r.pck_abs_matched)},
                 {"pck_root", optional_to_json(r.pck_root_matched)},
                 {"auc_rel", optional_to_json(r.auc_rel)},
                 {"pcod", optional_to_json(r.pcod)}}},
           {"all_people", Json{{"pck_rel", optional_to_json(r.pck_rel_all)},
                               {"pck_abs", optional_to_json(r.pck_abs_all)}}},
           {"counts", Json{{"matched", r.matched_people},
                           {"gt", r.total_gt_people},
                           {"pred", r.total_pred_people}}},
           {"config", Json{{"gate_px", r.gate_px},
                           {"pck_threshold_mm", r.pck_threshold_mm},
                           {"pcod_tie_mm", r.pcod_tie_mm}}}};
  if (!provenance.is_null()) out["provenance"] = provenance;
  return out;
}

void write_report(const std::filesystem::path& path, const MetricReport& r,
                  const Json& provenance) {
  save_json(path, report_to_json(r, provenance));
}

std::string format_report_table(const MetricReport& r) {
  std::ostringstream out;
  out << "              Recall PCK_root  PCK_abs  PCK_rel     PCOD  AUC_rel\n";
  char recall[32];
  std::snprintf(recall, sizeof(recall), "%7.2f", r.recall_pct);
  out << "matched      " << recall << "  " << cell(r.pck_root_matched) << "  "
      << cell(r.pck_abs_matched) << "  " << cell(r.pck_rel_matched) << "  "
      << cell(r.pcod) << "  " << cell(r.auc_rel) << "\n";
  out << "all people         -        -  " << cell(r.pck_abs_all) << "  "
      << cell(r.pck_rel_all) << "        -        -\n";
  out << "MPJPE" << cell(r.mpjpe_mm) << " mm   RtError" << cell(r.rt_error_mm)
      << " mm   (people: " << r.matched_people << " matched / "
      << r.total_gt_people << " gt / " << r.total_pred_people << " pred)\n";
  return out.str();
}

Json encoder_config_to_json(const EncoderConfig& cfg) {
  return Json{{"sigma", cfg.sigma},
              {"paf_half_width", cfg.paf_half_width},
              {"root_disk_radius", cfg.root_disk_radius},
              {"map_stride", cfg.map_stride},
              {"gaussian_cutoff", cfg.gaussian_cutoff}};
}

EncoderConfig encoder_config_from_json(const Json& j) {
  EncoderConfig cfg;
  maybe(j, "sigma", cfg.sigma);
  maybe(j, "paf_half_width", cfg.paf_half_width);
  maybe(j, "root_disk_radius", cfg.root_disk_radius);
  maybe(j, "map_stride", cfg.map_stride);
  maybe(j, "gaussian_cutoff", cfg.gaussian_cutoff);
  cfg.validate();
  return cfg;
}

Json assoc_config_to_json(const AssocConfig& cfg) {
  return Json{{"lambda", cfg.lambda},
              {"paf_samples", cfg.paf_samples},
              {"min_paf_score", cfg.min_paf_score},
              {"nms_radius", cfg.nms_radius},
              {"detect_threshold", cfg.detect_threshold}};
}

AssocConfig assoc_config_from_json(const Json& j) {
  AssocConfig cfg;
  maybe(j, "lambda", cfg.lambda);
  maybe(j, "paf_samples", cfg.paf_samples);
  maybe(j, "min_paf_score", cfg.min_paf_score);
  maybe(j, "nms_radius", cfg.nms_radius);
  maybe(j, "detect_threshold", cfg.detect_threshold);
  cfg.validate();
  return cfg;
}

Json synth_config_to_json(const SynthConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"min_people", cfg.min_people},
              {"max_people", cfg.max_people},
              {"min_depth_mm", cfg.min_depth_mm},
              {"max_depth_mm", cfg.max_depth_mm},
              {"overlap_probability", cfg.overlap_probability},
              {"truncation_probability", cfg.truncation_probability},
              {"bone_jitter", cfg.bone_jitter},
              {"image_width", cfg.image_width},
              {"image_height", cfg.image_height},
              {"focal", cfg.focal}};
}

SynthConfig synth_config_from_json(const Json& j) {
  SynthConfig cfg;
  maybe(j, "seed", cfg.seed);
  maybe(j, "min_people", cfg.min_people);
  maybe(j, "max_people", cfg.max_people);
  maybe(j, "min_depth_mm", cfg.min_depth_mm);
  maybe(j, "max_depth_mm", cfg.max_depth_mm);
  maybe(j, "overlap_probability", cfg.overlap_probability);
  maybe(j, "truncation_probability", cfg.truncation_probability);
  maybe(j, "bone_jitter", cfg.bone_jitter);
  maybe(j, "image_width", cfg.image_width);
  maybe(j, "image_height", cfg.image_height);
  maybe(j, "focal", cfg.focal);
  cfg.validate();
  return cfg;
}

Json eval_config_to_json(const EvalConfig& cfg) {
  return Json{{"gate_px", cfg.match.gate_px},
              {"pck_threshold_mm", cfg.pck_threshold_mm},
              {"pcod_tie_mm", cfg.pcod_tie_mm},
              {"auc_thresholds", cfg.auc_thresholds}};
}

EvalConfig eval_config_from_json(const Json& j) {
  EvalConfig cfg;
  maybe(j, "gate_px", cfg.match.gate_px);
  maybe(j, "pck_threshold_mm", cfg.pck_threshold_mm);
  maybe(j, "pcod_tie_mm", cfg.pcod_tie_mm);
  maybe(j, "auc_thresholds", cfg.auc_thresholds);
  return cfg;
}

}  // namespace pose25d
