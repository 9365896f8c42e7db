// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: synth / encode / decode / eval / roundtrip / bench.
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pose25d/decoder.hpp"
#include "pose25d/encoder.hpp"
#include "pose25d/metrics.hpp"
#include "pose25d/rng.hpp"
#include "pose25d/scene_io.hpp"
#include "pose25d/synth.hpp"
#include "pose25d/tensor_io.hpp"

namespace {

using namespace pose25d;

AssociationMode parse_mode(const std::string& name) {
  if (name == "dapa") return AssociationMode::kDepthAware;
  if (name == "2dpa") return AssociationMode::kPaf2d;
  throw IoError("unknown association mode '" + name + "' (use dapa or 2dpa)");
}

BoneStats stats_for(const SkeletonSpec& spec, const std::string& path) {
  if (!path.empty()) return read_bone_stats(path, spec);
  if (spec.name() == "human15") return default_bone_stats(spec);
  throw IoError("no built-in bone stats for skeleton '" + spec.name() +
                "'; pass --bone-stats");
}

int run_synth(const std::string& config_path, const std::string& out,
              long seed_override) {
  SynthConfig cfg = config_path.empty()
                        ? SynthConfig{}
                        : synth_config_from_json(load_json(config_path));
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);
  const Scene scene = synth_scene(cfg, spec, stats);
  write_scene(out, scene, spec,
              Json{{"generator", synth_config_to_json(cfg)}});
  std::cout << "wrote " << out << " (" << scene.people.size() << " people)\n";
  return 0;
}

int run_encode(const std::string& scene_path, const std::string& out,
               EncoderConfig cfg) {
  const SceneDocument doc = read_scene(scene_path);
  const RepresentationStack stack = encode(doc.scene, doc.skeleton, cfg);
  write_stack(out, stack);
  // Sidecar carries the camera and config; the tensor format itself is
  // payload-only so external systems can produce byte-compatible stacks.
  Json sidecar{{"format", "pose25d.stack_meta"},
               {"version", kSceneFormatVersion},
               {"camera", Json{{"f", doc.scene.camera.f},
                               {"cx", doc.scene.camera.cx},
                               {"cy", doc.scene.camera.cy},
                               {"w", doc.scene.camera.w},
                               {"h", doc.scene.camera.h}}},
               {"skeleton", doc.skeleton.name() == "human15"
                                ? Json("human15")
                                : skeleton_to_json(doc.skeleton)},
               {"encoder", encoder_config_to_json(cfg)},
               {"source_scene", scene_path}};
  save_json(out + ".json", sidecar);
  std::cout << "wrote " << out << " (" << stack.channel_count() << "x"
            << stack.height() << "x" << stack.width() << ") and " << out
            << ".json\n";
  return 0;
}

int run_decode(const std::string& stack_path, const std::string& camera_path,
               const std::string& out, const std::string& skeleton_path,
               const std::string& stats_path, AssocConfig cfg,
               const std::string& mode_name) {
  const RepresentationStack stack = read_stack(stack_path);
  std::string cam_source = camera_path;
  if (cam_source.empty()) {
    // Fall back to the encode sidecar next to the stack.
    cam_source = stack_path + ".json";
  }
  const CameraIntrinsics cam = read_camera(cam_source);

  SkeletonSpec spec = skeleton_path.empty()
                          ? default_skeleton()
                          : skeleton_from_json(load_json(skeleton_path),
                                               skeleton_path);
  if (spec.joint_count() != stack.num_joints())
    throw IoError(stack_path + ": stack encodes " +
                  std::to_string(stack.num_joints()) +
                  " joints but the skeleton has " +
                  std::to_string(spec.joint_count()));
  const BoneStats stats = stats_for(spec, stats_path);
  const AssociationMode mode = parse_mode(mode_name);

  Scene result;
  result.camera = cam;
  result.people = decode(stack, cam, spec, stats, cfg, mode);
  write_scene(out, result, spec,
              Json{{"decoder", Json{{"assoc", mode_name},
                                    {"config", assoc_config_to_json(cfg)},
                                    {"stack", stack_path}}}});
  std::cout << "wrote " << out << " (" << result.people.size()
            << " people)\n";
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& gt_path,
             const std::string& out, EvalConfig cfg) {
  const SceneDocument pred = read_scene(pred_path);
  const SceneDocument gt = read_scene(gt_path);
  const std::vector<Scene> pred_frames{pred.scene};
  const std::vector<Scene> gt_frames{gt.scene};
  const MetricReport report =
      evaluate(pred_frames, gt_frames, gt.skeleton, cfg);
  if (!out.empty())
    write_report(out, report,
                 Json{{"pred", pred_path},
                      {"gt", gt_path},
                      {"eval", eval_config_to_json(cfg)}});
  std::cout << format_report_table(report);
  return 0;
}

struct RoundtripConfig {
  int scenes = 20;
  SynthConfig synth;
  EncoderConfig encoder;
  AssocConfig assoc;
  EvalConfig eval;
  std::string assoc_mode = "dapa";
};

RoundtripConfig roundtrip_config_from_json(const Json& j) {
  RoundtripConfig cfg;
  if (j.contains("scenes")) cfg.scenes = j.at("scenes").get<int>();
  if (j.contains("synth")) cfg.synth = synth_config_from_json(j.at("synth"));
  if (j.contains("encoder"))
    cfg.encoder = encoder_config_from_json(j.at("encoder"));
  if (j.contains("assoc")) cfg.assoc = assoc_config_from_json(j.at("assoc"));
  if (j.contains("eval")) cfg.eval = eval_config_from_json(j.at("eval"));
  if (j.contains("assoc_mode"))
    cfg.assoc_mode = j.at("assoc_mode").get<std::string>();
  if (cfg.scenes < 1) throw IoError("roundtrip: 'scenes' must be >= 1");
  return cfg;
}

Json roundtrip_config_to_json(const RoundtripConfig& cfg) {
  return Json{{"scenes", cfg.scenes},
              {"synth", synth_config_to_json(cfg.synth)},
              {"encoder", encoder_config_to_json(cfg.encoder)},
              {"assoc", assoc_config_to_json(cfg.assoc)},
              {"eval", eval_config_to_json(cfg.eval)},
              {"assoc_mode", cfg.assoc_mode}};
}

int run_roundtrip(const std::string& config_path, const std::string& report_path,
                  int jobs) {
  const RoundtripConfig cfg =
      config_path.empty()
          ? RoundtripConfig{}
          : roundtrip_config_from_json(load_json(config_path));
  const AssociationMode mode = parse_mode(cfg.assoc_mode);
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);

  std::vector<Scene> gt_frames(cfg.scenes), pred_frames(cfg.scenes);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      for (int i = next.fetch_add(1); i < cfg.scenes; i = next.fetch_add(1)) {
        SynthConfig synth_cfg = cfg.synth;
        synth_cfg.seed = Rng::substream(cfg.synth.seed, i);
        Scene gt = synth_scene(synth_cfg, spec, stats);
        const RepresentationStack stack = encode(gt, spec, cfg.encoder);
        Scene pred;
        pred.camera = gt.camera;
        pred.people = decode(stack, gt.camera, spec, stats, cfg.assoc, mode);
        gt_frames[i] = std::move(gt);
        pred_frames[i] = std::move(pred);
      }
    } catch (const std::exception& e) {
      std::scoped_lock lock(error_mutex);
      failed = true;
      error_message = e.what();
    }
  };

  const int n_threads = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed) throw IoError("roundtrip worker failed: " + error_message);

  const MetricReport report = evaluate(pred_frames, gt_frames, spec, cfg.eval);
  if (!report_path.empty())
    write_report(report_path, report,
                 Json{{"roundtrip", roundtrip_config_to_json(cfg)}});
  std::cout << format_report_table(report);
  return 0;
}

int run_bench(int people, int repeat, const std::string& out_path,
              long seed) {
  SynthConfig synth_cfg;
  synth_cfg.seed = static_cast<std::uint64_t>(seed);
  synth_cfg.min_depth_mm = 2200.0;
  synth_cfg.max_depth_mm = 6000.0;
  const SkeletonSpec spec = default_skeleton();
  const BoneStats stats = default_bone_stats(spec);
  const Scene scene = synth_crowd(synth_cfg, spec, stats, people);
  const RepresentationStack stack = encode(scene, spec, EncoderConfig{});
  const AssocConfig cfg;

  using Clock = std::chrono::steady_clock;
  double extract_total = 0.0, assoc_total = 0.0;
  double best_ms = 1e18;
  size_t people_decoded = 0;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = Clock::now();
    const CandidateLists candidates = extract_keypoints(stack, cfg);
    const auto t1 = Clock::now();
    const auto hyps =
        depth_aware_associate(candidates, stack, spec, stats, cfg);
    const auto t2 = Clock::now();
    people_decoded = hyps.size();
    const double extract_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double assoc_ms =
        std::chrono::duration<double, std::milli>(t2 - t1).count();
    extract_total += extract_ms;
    assoc_total += assoc_ms;
    best_ms = std::min(best_ms, extract_ms + assoc_ms);
  }
  const double extract_mean = extract_total / repeat;
  const double assoc_mean = assoc_total / repeat;
  std::cout << "bench: people=" << scene.people.size() << " (decoded "
            << people_decoded << ")  extract " << extract_mean
            << " ms  associate " << assoc_mean << " ms  total "
            << (extract_mean + assoc_mean) << " ms  best " << best_ms
            << " ms over " << repeat << " runs\n";
  if (!out_path.empty())
    save_json(out_path,
              Json{{"people", people},
                   {"repeat", repeat},
                   {"extract_ms_mean", extract_mean},
                   {"associate_ms_mean", assoc_mean},
                   {"total_ms_mean", extract_mean + assoc_mean},
                   {"total_ms_best", best_ms}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2.5D multi-person pose codec: encode ground-truth scenes, "
               "decode stacks with depth-aware part association, evaluate."};
  app.require_subcommand(1);

  // synth
  std::string synth_config, synth_out;
  long synth_seed = -1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  synth->add_option("--config", synth_config, "SynthConfig JSON file");
  synth->add_option("--out", synth_out, "output scene JSON")->required();
  synth->add_option("--seed", synth_seed, "override the config seed");

  // encode
  std::string enc_scene, enc_out;
  EncoderConfig enc_cfg;
  auto* enc = app.add_subcommand("encode", "render a scene into a stack");
  enc->add_option("--scene", enc_scene, "scene JSON")->required();
  enc->add_option("--out", enc_out, "output .smap tensor")->required();
  enc->add_option("--sigma", enc_cfg.sigma, "heatmap Gaussian std, px");
  enc->add_option("--paf-width", enc_cfg.paf_half_width,
                  "limb band half-width, px");
  enc->add_option("--root-disk", enc_cfg.root_disk_radius,
                  "root depth disk radius, px");
  enc->add_option("--stride", enc_cfg.map_stride, "map stride");

  // decode
  std::string dec_stack, dec_cam, dec_out, dec_skel, dec_stats;
  std::string dec_mode = "dapa";
  AssocConfig dec_cfg;
  auto* dec = app.add_subcommand("decode", "decode a stack into 3D poses");
  dec->add_option("--stack", dec_stack, ".smap tensor")->required();
  dec->add_option("--camera", dec_cam,
                  "camera JSON (defaults to <stack>.json sidecar)");
  dec->add_option("--out", dec_out, "output scene JSON")->required();
  dec->add_option("--skeleton", dec_skel, "skeleton JSON (default human15)");
  dec->add_option("--bone-stats", dec_stats, "bone stats JSON");
  dec->add_option("--lambda", dec_cfg.lambda, "bone-length relaxation");
  dec->add_option("--assoc", dec_mode, "association mode: dapa | 2dpa");
  dec->add_option("--min-paf", dec_cfg.min_paf_score, "link score floor");
  dec->add_option("--samples", dec_cfg.paf_samples, "PAF samples per link");
  dec->add_option("--nms-radius", dec_cfg.nms_radius, "peak NMS radius, px");
  dec->add_option("--detect-threshold", dec_cfg.detect_threshold,
                  "heatmap floor");

  // eval
  std::string eval_pred, eval_gt, eval_out;
  EvalConfig eval_cfg;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions against gt");
  eval_cmd->add_option("--pred", eval_pred, "prediction scene JSON")
      ->required();
  eval_cmd->add_option("--gt", eval_gt, "ground-truth scene JSON")->required();
  eval_cmd->add_option("--out", eval_out, "report JSON");
  eval_cmd->add_option("--pck-threshold", eval_cfg.pck_threshold_mm,
                       "PCK threshold, mm");
  eval_cmd->add_option("--pcod-tie", eval_cfg.pcod_tie_mm,
                       "PCOD tie band, mm");
  eval_cmd->add_option("--gate", eval_cfg.match.gate_px,
                       "matching gate, px");

  // roundtrip
  std::string rt_config, rt_report;
  int rt_jobs = 1;
  auto* rt = app.add_subcommand(
      "roundtrip", "synth -> encode -> decode -> eval in one run");
  rt->add_option("--config", rt_config, "roundtrip config JSON");
  rt->add_option("--report", rt_report, "output report JSON");
  rt->add_option("--jobs", rt_jobs, "worker threads");

  // bench
  int bench_people = 20, bench_repeat = 10;
  long bench_seed = 1;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "association timing");
  bench->add_option("--people", bench_people, "person count");
  bench->add_option("--repeat", bench_repeat, "repetitions");
  bench->add_option("--seed", bench_seed, "scene seed");
  bench->add_option("--out", bench_out, "timing JSON");

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return run_synth(synth_config, synth_out, synth_seed);
    if (enc->parsed()) return run_encode(enc_scene, enc_out, enc_cfg);
    if (dec->parsed())
      return run_decode(dec_stack, dec_cam, dec_out, dec_skel, dec_stats,
                        dec_cfg, dec_mode);
    if (eval_cmd->parsed()) return run_eval(eval_pred, eval_gt, eval_out,
                                            eval_cfg);
    if (rt->parsed()) return run_roundtrip(rt_config, rt_report, rt_jobs);
    if (bench->parsed())
      return run_bench(bench_people, bench_repeat, bench_out, bench_seed);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
