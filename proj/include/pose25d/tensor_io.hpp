// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pose25d/stack.hpp"

namespace pose25d {

// I/O failure with file context; the message names the byte offset or JSON
// path that failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary tensor container:
//   magic "SMAP" | version u16 LE | rank u8 | dims u32 LE each |
//   payload float32 LE row-major | crc32(payload) u32 LE
inline constexpr std::uint16_t kTensorFormatVersion = 1;

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;  // row-major
};

void write_tensor(const std::filesystem::path& path,
                  std::span<const std::uint32_t> dims,
                  std::span<const float> data);
Tensor read_tensor(const std::filesystem::path& path);

// Stack adapter: dims are {channels, height, width} and the channel count
// must have the 4J-2 form.
void write_stack(const std::filesystem::path& path,
                 const RepresentationStack& stack);
RepresentationStack read_stack(const std::filesystem::path& path);

}  // namespace pose25d
