/*
 * Copyright 2026 The plateaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "plateaudit/core/image.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"

namespace plateaudit {
namespace {

constexpr char kMagic[5] = {'P', 'T', 'N', 'S', '1'};
constexpr std::size_t kHeaderBytes = 5 + 3 * 4;
// Guards against absurd allocations from a corrupt header.
constexpr uint64_t kMaxSide = 1 << 15;
constexpr uint64_t kMaxChannels = 64;

void AppendU32(std::string& out, uint32_t value) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

uint32_t ReadU32(const std::string& bytes, std::size_t offset) {
  uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    value |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
  }
  return value;
}

void CheckDims(int height, int width, int channels) {
  if (height < kMinImageSide || width < kMinImageSide || channels < 1) {
    throw Error(ErrorCode::kValidation,
                "image dims " + std::to_string(height) + "x" +
                    std::to_string(width) + "x" + std::to_string(channels) +
                    " violate height, width >= 16 and channels >= 1");
  }
}

}  // namespace

SiteImage::SiteImage(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
  CheckDims(height, width, channels);
  data_.assign(pixel_count() * channels_, 0.0f);
}

SiteImage::SiteImage(int height, int width, int channels,
                     std::vector<float> data)
    : height_(height), width_(width), channels_(channels),
      data_(std::move(data)) {
  CheckDims(height, width, channels);
  if (data_.size() != pixel_count() * channels_) {
    throw Error(ErrorCode::kValidation, "image payload size mismatch");
  }
}

std::vector<float> SiteImage::Channel(int c) const {
  std::vector<float> plane(pixel_count());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    plane[i] = data_[i * channels_ + c];
  }
  return plane;
}

void SiteImage::SetChannel(int c, std::span<const float> plane) {
  if (plane.size() != pixel_count()) {
    throw Error(ErrorCode::kValidation, "channel plane size mismatch");
  }
  for (std::size_t i = 0; i < plane.size(); ++i) {
    data_[i * channels_ + c] = plane[i];
  }
}

void SiteImage::Clamp01() {
  for (float& v : data_) v = std::clamp(v, 0.0f, 1.0f);
}

void SiteImage::Validate() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const float v = data_[i];
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw Error(ErrorCode::kValidation,
                  "pixel value at flat index " + std::to_string(i) +
                      " is non-finite or outside [0, 1]");
    }
  }
}

std::string EncodeImage(const SiteImage& image) {
  image.Validate();
  std::string out;
  out.reserve(kHeaderBytes + image.data().size() * 4);
  out.append(kMagic, sizeof(kMagic));
  AppendU32(out, static_cast<uint32_t>(image.height()));
  AppendU32(out, static_cast<uint32_t>(image.width()));
  AppendU32(out, static_cast<uint32_t>(image.channels()));
  for (const float v : image.data()) {
    AppendU32(out, std::bit_cast<uint32_t>(v));
  }
  return out;
}

SiteImage DecodeImage(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kFormat, "missing PTNS1 magic");
  }
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kCorruption, "truncated image header");
  }
  const uint64_t height = ReadU32(bytes, 5);
  const uint64_t width = ReadU32(bytes, 9);
  const uint64_t channels = ReadU32(bytes, 13);
  if (height < kMinImageSide || width < kMinImageSide || channels < 1 ||
      height > kMaxSide || width > kMaxSide || channels > kMaxChannels) {
    throw Error(ErrorCode::kFormat,
                "invalid image dims " + std::to_string(height) + "x" +
                    std::to_string(width) + "x" + std::to_string(channels));
  }
  const uint64_t count = height * width * channels;
  if (bytes.size() != kHeaderBytes + count * 4) {
    throw Error(ErrorCode::kCorruption,
                "payload is " + std::to_string(bytes.size() - kHeaderBytes) +
                    " bytes, expected " + std::to_string(count * 4));
  }
  std::vector<float> data(count);
  for (uint64_t i = 0; i < count; ++i) {
    const float v = std::bit_cast<float>(ReadU32(bytes, kHeaderBytes + 4 * i));
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw Error(ErrorCode::kCorruption,
                  "non-finite or out-of-range value at index " +
                      std::to_string(i));
    }
    data[i] = v;
  }
  return SiteImage(static_cast<int>(height), static_cast<int>(width),
                   static_cast<int>(channels), std::move(data));
}

void WriteImage(const SiteImage& image, const std::filesystem::path& path) {
  WriteFile(path, EncodeImage(image));
}

SiteImage ReadImage(const std::filesystem::path& path) {
  try {
    return DecodeImage(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace plateaudit
