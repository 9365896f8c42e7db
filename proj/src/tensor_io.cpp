// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/tensor_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace pose25d {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'A', 'P'};

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

}  // namespace

void write_tensor(const std::filesystem::path& path,
                  std::span<const std::uint32_t> dims,
                  std::span<const float> data) {
  if (dims.empty() || dims.size() > 255)
    fail(path, "tensor rank must be in [1, 255]");
  std::uint64_t expected = 1;
  for (std::uint32_t d : dims) {
    if (d == 0) fail(path, "tensor dims must be positive");
    expected *= d;
  }
  if (expected != data.size()) fail(path, "payload does not match dims");

  std::string header;
  header.append(kMagic, 4);
  put_u16(header, kTensorFormatVersion);
  header.push_back(static_cast<char>(dims.size()));
  for (std::uint32_t d : dims) put_u32(header, d);

  // Payload as little-endian float32 bytes; CRC covers exactly these bytes.
  std::string payload;
  payload.reserve(data.size() * 4);
  for (float f : data) put_u32(payload, std::bit_cast<std::uint32_t>(f));
  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
            static_cast<uInt>(payload.size())));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  std::string tail;
  put_u32(tail, crc);
  out.write(tail.data(), static_cast<std::streamsize>(tail.size()));
  if (!out) fail(path, "write failed");
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const size_t size = bytes.size();

  if (size < 7) fail(path, "truncated header (file is " +
                               std::to_string(size) + " bytes)");
  if (std::memcmp(p, kMagic, 4) != 0) fail(path, "bad magic at offset 0");
  const std::uint16_t version = get_u16(p + 4);
  if (version != kTensorFormatVersion)
    fail(path, "unsupported format version " + std::to_string(version) +
                   " at offset 4");
  const unsigned rank = p[6];
  if (rank == 0) fail(path, "zero rank at offset 6");
  const size_t dims_end = 7 + 4 * static_cast<size_t>(rank);
  if (size < dims_end) fail(path, "truncated dim list at offset 7");

  Tensor t;
  std::uint64_t count = 1;
  for (unsigned i = 0; i < rank; ++i) {
    const std::uint32_t d = get_u32(p + 7 + 4 * i);
    if (d == 0) fail(path, "zero dim at offset " + std::to_string(7 + 4 * i));
    count *= d;
    if (count > (std::uint64_t{1} << 34))
      fail(path, "tensor too large at offset " + std::to_string(7 + 4 * i));
    t.dims.push_back(d);
  }

  const size_t payload_bytes = static_cast<size_t>(count) * 4;
  if (size != dims_end + payload_bytes + 4)
    fail(path, "payload length mismatch: expected " +
                   std::to_string(dims_end + payload_bytes + 4) +
                   " bytes total, got " + std::to_string(size));

  const auto crc_stored = get_u32(p + dims_end + payload_bytes);
  const auto crc_actual = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data() + dims_end),
            static_cast<uInt>(payload_bytes)));
  if (crc_stored != crc_actual)
    fail(path, "payload CRC mismatch at offset " +
                   std::to_string(dims_end + payload_bytes));

  t.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    t.data[i] = std::bit_cast<float>(get_u32(p + dims_end + 4 * i));
  return t;
}

void write_stack(const std::filesystem::path& path,
                 const RepresentationStack& stack) {
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(stack.channel_count()),
                                 static_cast<std::uint32_t>(stack.height()),
                                 static_cast<std::uint32_t>(stack.width())};
  write_tensor(path, dims, stack.data());
}

RepresentationStack read_stack(const std::filesystem::path& path) {
  Tensor t = read_tensor(path);
  if (t.dims.size() != 3)
    fail(path, "stack tensor must have rank 3 (channels, height, width)");
  const std::uint32_t channels = t.dims[0];
  if (channels < 6 || (channels + 2) % 4 != 0)
    fail(path, "channel count " + std::to_string(channels) +
                   " does not have the 4J-2 form");
  RepresentationStack stack(static_cast<int>((channels + 2) / 4),
                            static_cast<int>(t.dims[1]),
                            static_cast<int>(t.dims[2]));
  stack.data() = std::move(t.data);
  return stack;
}

}  // namespace pose25d
