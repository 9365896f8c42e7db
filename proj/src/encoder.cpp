// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pose25d {

namespace {

struct MapPoint {
  bool valid = false;
  double x = 0.0, y = 0.0;  // map pixels
  double z = 0.0;           // metric depth, mm
};

// Projects every visible joint into map coordinates. A visible joint with a
// non-positive depth violates the scene contract.
std::vector<std::vector<MapPoint>> project_people(const Scene& scene,
                                                  const EncoderConfig& cfg) {
  scene.camera.validate();
  const double inv_stride = 1.0 / static_cast<double>(cfg.map_stride);
  std::vector<std::vector<MapPoint>> out(scene.people.size());
  for (size_t i = 0; i < scene.people.size(); ++i) {
    const AbsolutePose3D& pose = scene.people[i];
    out[i].resize(pose.joints.size());
    for (size_t j = 0; j < pose.joints.size(); ++j) {
      const Joint3D& joint = pose.joints[j];
      if (!joint.visible) continue;
      if (!(joint.pos.z > 0.0))
        throw std::domain_error("encode: visible joint with depth <= 0");
      const Point2D p = project(joint.pos, scene.camera);
      out[i][j] = MapPoint{true, p.u * inv_stride, p.v * inv_stride,
                           joint.pos.z};
    }
  }
  return out;
}

double sq(double v) { return v * v; }

// Squared distance from pixel center (x, y) to segment a-b.
double segment_dist_sq(double x, double y, double ax, double ay, double bx,
                       double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len_sq = dx * dx + dy * dy;
  double t = len_sq > 0.0 ? ((x - ax) * dx + (y - ay) * dy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return sq(x - (ax + t * dx)) + sq(y - (ay + t * dy));
}

struct BandBox {
  int x0, x1, y0, y1;
  bool empty;
};

BandBox band_box(const RepresentationStack& out, double ax, double ay,
                 double bx, double by, double margin) {
  BandBox box{};
  box.x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - margin)));
  box.x1 = std::min(out.width() - 1,
                    static_cast<int>(std::ceil(std::max(ax, bx) + margin)));
  box.y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - margin)));
  box.y1 = std::min(out.height() - 1,
                    static_cast<int>(std::ceil(std::max(ay, by) + margin)));
  box.empty = box.x0 > box.x1 || box.y0 > box.y1;
  return box;
}

}  // namespace

void EncoderConfig::validate() const {
  if (!(sigma > 0.0) || !(paf_half_width > 0.0) || !(root_disk_radius > 0.0))
    throw std::invalid_argument("encoder config: distances must be positive");
  if (map_stride < 1)
    throw std::invalid_argument("encoder config: stride must be >= 1");
  if (!(gaussian_cutoff > 0.0))
    throw std::invalid_argument("encoder config: cutoff must be positive");
}

std::pair<int, int> map_size(const CameraIntrinsics& cam,
                             const EncoderConfig& cfg) {
  cam.validate();
  cfg.validate();
  const int h = static_cast<int>(std::lround(cam.h / cfg.map_stride));
  const int w = static_cast<int>(std::lround(cam.w / cfg.map_stride));
  if (h <= 0 || w <= 0)
    throw std::invalid_argument("map_size: degenerate output resolution");
  return {h, w};
}

void render_heatmaps(const Scene& scene, const SkeletonSpec& spec,
                     const EncoderConfig& cfg, RepresentationStack& out) {
  cfg.validate();
  const auto people = project_people(scene, cfg);
  const double cutoff_sq = sq(cfg.gaussian_cutoff * cfg.sigma);
  const int radius =
      static_cast<int>(std::ceil(cfg.gaussian_cutoff * cfg.sigma));
  const double two_sigma_sq = 2.0 * cfg.sigma * cfg.sigma;

  for (int j = 0; j < spec.joint_count(); ++j) {
    const int c = out.heatmap_channel(j);
    for (const auto& person : people) {
      const MapPoint& mp = person[j];
      if (!mp.valid) continue;
      // Center snapped to the nearest map pixel: the rendered peak is
      // exactly 1 and decode-side quantization stays below half a pixel.
      const int cx = static_cast<int>(std::lround(mp.x));
      const int cy = static_cast<int>(std::lround(mp.y));
      const int x0 = std::max(0, cx - radius);
      const int x1 = std::min(out.width() - 1, cx + radius);
      const int y0 = std::max(0, cy - radius);
      const int y1 = std::min(out.height() - 1, cy + radius);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double d_sq = sq(x - cx) + sq(y - cy);
          if (d_sq > cutoff_sq) continue;
          const float g = static_cast<float>(std::exp(-d_sq / two_sigma_sq));
          float& cell = out.at(c, y, x);
          cell = std::max(cell, g);
        }
      }
    }
  }
}

void render_pafs(const Scene& scene, const SkeletonSpec& spec,
                 const EncoderConfig& cfg, RepresentationStack& out) {
  cfg.validate();
  const auto people = project_people(scene, cfg);
  const size_t plane = static_cast<size_t>(out.height()) * out.width();
  std::vector<double> sum_x(plane), sum_y(plane);
  std::vector<int> count(plane);

  for (int p = 0; p < spec.part_count(); ++p) {
    std::fill(sum_x.begin(), sum_x.end(), 0.0);
    std::fill(sum_y.begin(), sum_y.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    const BodyPart& part = spec.part(p);

    for (const auto& person : people) {
      const MapPoint& a = person[part.parent];
      const MapPoint& b = person[part.child];
      if (!a.valid || !b.valid) continue;
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len < 1e-9) continue;  // direction undefined
      const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
      const BandBox box =
          band_box(out, a.x, a.y, b.x, b.y, cfg.paf_half_width + 1.0);
      if (box.empty) continue;
      const double half_sq = sq(cfg.paf_half_width);
      for (int y = box.y0; y <= box.y1; ++y) {
        for (int x = box.x0; x <= box.x1; ++x) {
          if (segment_dist_sq(x, y, a.x, a.y, b.x, b.y) > half_sq) continue;
          const size_t idx = static_cast<size_t>(y) * out.width() + x;
          sum_x[idx] += ux;
          sum_y[idx] += uy;
          count[idx] += 1;
        }
      }
    }

    std::span<float> cx = out.channel(out.paf_x_channel(p));
    std::span<float> cy = out.channel(out.paf_y_channel(p));
    for (size_t i = 0; i < plane; ++i) {
      if (count[i] == 0) continue;
      cx[i] = static_cast<float>(sum_x[i] / count[i]);
      cy[i] = static_cast<float>(sum_y[i] / count[i]);
    }
  }
}

void render_root_depth_map(const Scene& scene, const SkeletonSpec& spec,
                           const EncoderConfig& cfg,
                           RepresentationStack& out) {
  cfg.validate();
  const auto people = project_people(scene, cfg);
  const size_t plane = static_cast<size_t>(out.height()) * out.width();
  std::vector<double> owner_z(plane, std::numeric_limits<double>::infinity());
  std::span<float> map = out.channel(out.root_depth_channel());

  for (const auto& person : people) {
    const MapPoint& root = person[spec.root_index()];
    if (!root.valid) continue;
    const float zt = static_cast<float>(
        normalize_depth(root.z, scene.camera).value);
    const double r = cfg.root_disk_radius;
    const BandBox box = band_box(out, root.x, root.y, root.x, root.y, r + 1.0);
    if (box.empty) continue;
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        if (sq(x - root.x) + sq(y - root.y) > sq(r)) continue;
        const size_t idx = static_cast<size_t>(y) * out.width() + x;
        if (root.z < owner_z[idx]) {  // nearer person wins the pixel
          owner_z[idx] = root.z;
          map[idx] = zt;
        }
      }
    }
  }
}

void render_relative_depth_maps(const Scene& scene, const SkeletonSpec& spec,
                                const EncoderConfig& cfg,
                                RepresentationStack& out) {
  cfg.validate();
  const auto people = project_people(scene, cfg);
  const size_t plane = static_cast<size_t>(out.height()) * out.width();
  std::vector<double> owner_z(plane);

  for (int p = 0; p < spec.part_count(); ++p) {
    std::fill(owner_z.begin(), owner_z.end(),
              std::numeric_limits<double>::infinity());
    const BodyPart& part = spec.part(p);
    std::span<float> map = out.channel(out.rel_depth_channel(p));

    for (const auto& person : people) {
      const MapPoint& a = person[part.parent];
      const MapPoint& b = person[part.child];
      if (!a.valid || !b.valid) continue;
      if (std::hypot(b.x - a.x, b.y - a.y) < 1e-9) continue;
      const float dz = static_cast<float>(b.z - a.z);
      const BandBox box =
          band_box(out, a.x, a.y, b.x, b.y, cfg.paf_half_width + 1.0);
      if (box.empty) continue;
      const double half_sq = sq(cfg.paf_half_width);
      for (int y = box.y0; y <= box.y1; ++y) {
        for (int x = box.x0; x <= box.x1; ++x) {
          if (segment_dist_sq(x, y, a.x, a.y, b.x, b.y) > half_sq) continue;
          const size_t idx = static_cast<size_t>(y) * out.width() + x;
          // Nearer parent wins; exact ties keep the smaller value so the
          // result does not depend on person order.
          if (a.z < owner_z[idx] ||
              (a.z == owner_z[idx] && dz < map[idx])) {
            owner_z[idx] = a.z;
            map[idx] = dz;
          }
        }
      }
    }
  }
}

RepresentationStack encode(const Scene& scene, const SkeletonSpec& spec,
                           const EncoderConfig& cfg) {
  const auto [h, w] = map_size(scene.camera, cfg);
  RepresentationStack out(spec.joint_count(), h, w);
  render_heatmaps(scene, spec, cfg, out);
  render_pafs(scene, spec, cfg, out);
  render_root_depth_map(scene, spec, cfg, out);
  render_relative_depth_maps(scene, spec, cfg, out);
  return out;
}

LossReport compute_losses(
    const RepresentationStack& pred, const RepresentationStack& gt,
    const std::vector<std::pair<Point2D, NormalizedDepth>>& gt_roots,
    const LossWeights& weights) {
  if (pred.num_joints() != gt.num_joints() || pred.height() != gt.height() ||
      pred.width() != gt.width())
    throw std::invalid_argument("compute_losses: shape mismatch");

  const int j = pred.num_joints();
  auto channel_sq_error = [&](int c) {
    std::span<const float> a = pred.channel(c);
    std::span<const float> b = gt.channel(c);
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
      acc += sq(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    return acc;
  };

  LossReport report;
  for (int c = 0; c < j; ++c) report.l_2d += channel_sq_error(c);
  for (int p = 0; p < j - 1; ++p) {
    report.l_2d += channel_sq_error(pred.paf_x_channel(p));
    report.l_2d += channel_sq_error(pred.paf_y_channel(p));
    report.l_dz += channel_sq_error(pred.rel_depth_channel(p));
  }
  const int rz = pred.root_depth_channel();
  for (const auto& [pos, zt] : gt_roots) {
    const double v = pred.sample_nearest(rz, pos.u, pos.v);
    report.l_rz += std::abs(v - zt.value);
  }
  report.total = weights.w_2d * report.l_2d + weights.w_dz * report.l_dz +
                 weights.w_rz * report.l_rz;
  return report;
}

}  // namespace pose25d
