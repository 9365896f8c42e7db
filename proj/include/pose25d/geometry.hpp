// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

namespace pose25d {

// Zero-skew, square-pixel pinhole camera. All lengths are millimeters,
// all image coordinates are pixels (continuous doubles).
struct CameraIntrinsics {
  double f = 0.0;              // focal length, px
  double cx = 0.0, cy = 0.0;   // principal point, px
  double w = 0.0, h = 0.0;     // image size, px

  // Fallback when the true focal length is unknown: f = image width.
  static CameraIntrinsics with_default_focal(double width, double height) {
    return CameraIntrinsics{width, width / 2.0, height / 2.0, width, height};
  }

  // Ratio between image width and focal length; invariant under uniform
  // image resizing, so it characterises the field of view itself.
  double fov_ratio() const { return w / f; }

  // Uniform resize by factor s (all five parameters scale together).
  CameraIntrinsics scaled(double s) const {
    return CameraIntrinsics{f * s, cx * s, cy * s, w * s, h * s};
  }

  void validate() const {
    if (!(f > 0.0)) throw std::domain_error("camera: focal length must be > 0");
    if (!(w > 0.0) || !(h > 0.0))
      throw std::domain_error("camera: image size must be > 0");
    if (!std::isfinite(cx) || !std::isfinite(cy))
      throw std::domain_error("camera: principal point must be finite");
  }
};

struct Point2D {
  double u = 0.0;
  double v = 0.0;
};

struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// FoV-normalized depth Z * w / f, in millimeters.
struct NormalizedDepth {
  double value = 0.0;
};

inline double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

inline double distance(const Point3D& a, const Point3D& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Z~ = Z * w / f. Removes the focal-length/image-size dependence from a
// metric depth; strictly monotone in Z, so depth ordering survives.
inline NormalizedDepth normalize_depth(double z_mm, const CameraIntrinsics& cam) {
  if (!(z_mm > 0.0))
    throw std::domain_error("normalize_depth: depth must be positive");
  return NormalizedDepth{z_mm * cam.w / cam.f};
}

// Exact inverse of normalize_depth under the same intrinsics.
inline double denormalize_depth(NormalizedDepth zt, const CameraIntrinsics& cam) {
  if (!(zt.value > 0.0))
    throw std::domain_error("denormalize_depth: depth must be positive");
  return zt.value * cam.f / cam.w;
}

inline Point2D project(const Point3D& q, const CameraIntrinsics& cam) {
  if (!(q.z > 0.0))
    throw std::domain_error("project: point must be in front of the camera");
  return Point2D{cam.f * q.x / q.z + cam.cx, cam.f * q.y / q.z + cam.cy};
}

// [X Y Z]^T = Z * K^-1 * [u v 1]^T for the zero-skew pinhole K.
inline Point3D back_project(const Point2D& p, double z_mm,
                            const CameraIntrinsics& cam) {
  if (!(z_mm > 0.0))
    throw std::domain_error("back_project: depth must be positive");
  return Point3D{z_mm * (p.u - cam.cx) / cam.f, z_mm * (p.v - cam.cy) / cam.f,
                 z_mm};
}

}  // namespace pose25d
