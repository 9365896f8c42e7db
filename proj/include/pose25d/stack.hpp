// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pose25d {

// The 4J-2 channel map tensor, row-major float32 per channel.
//
// Channel order is normative:
//   [0, J)            keypoint heatmaps, by joint index
//   [J, 3J-2)         PAFs, (x, y) interleaved by part index
//   3J-2               root depth map (FoV-normalized mm, 0 = unsupervised)
//   [3J-1, 4J-2)      part relative-depth maps (child minus parent, mm)
class RepresentationStack {
 public:
  RepresentationStack(int num_joints, int height, int width)
      : num_joints_(num_joints), height_(height), width_(width) {
    if (num_joints < 2 || height <= 0 || width <= 0)
      throw std::invalid_argument("stack: bad dimensions");
    data_.assign(static_cast<size_t>(channel_count()) * height * width, 0.0f);
  }

  int num_joints() const { return num_joints_; }
  int part_count() const { return num_joints_ - 1; }
  int channel_count() const { return 4 * num_joints_ - 2; }
  int height() const { return height_; }
  int width() const { return width_; }

  int heatmap_channel(int joint) const { return joint; }
  int paf_x_channel(int part) const { return num_joints_ + 2 * part; }
  int paf_y_channel(int part) const { return num_joints_ + 2 * part + 1; }
  int root_depth_channel() const { return 3 * num_joints_ - 2; }
  int rel_depth_channel(int part) const { return 3 * num_joints_ - 1 + part; }

  std::span<float> channel(int c) {
    return std::span<float>(data_.data() + plane_offset(c), plane_size());
  }
  std::span<const float> channel(int c) const {
    return std::span<const float>(data_.data() + plane_offset(c), plane_size());
  }

  float at(int c, int y, int x) const {
    return data_[plane_offset(c) + static_cast<size_t>(y) * width_ + x];
  }
  float& at(int c, int y, int x) {
    return data_[plane_offset(c) + static_cast<size_t>(y) * width_ + x];
  }

  bool contains(int y, int x) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  // Nearest-pixel lookup; 0 outside the map (truncated content reads as
  // empty, matching how the encoder leaves out-of-frame joints unrendered).
  float sample_nearest(int c, double x, double y) const {
    const int xi = static_cast<int>(std::lround(x));
    const int yi = static_cast<int>(std::lround(y));
    if (!contains(yi, xi)) return 0.0f;
    return at(c, yi, xi);
  }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

 private:
  size_t plane_size() const {
    return static_cast<size_t>(height_) * static_cast<size_t>(width_);
  }
  size_t plane_offset(int c) const {
    if (c < 0 || c >= channel_count())
      throw std::out_of_range("stack: channel index out of range");
    return static_cast<size_t>(c) * plane_size();
  }

  int num_joints_;
  int height_;
  int width_;
  std::vector<float> data_;
};

}  // namespace pose25d
