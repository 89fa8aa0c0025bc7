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

#ifndef PLATEAUDIT_CORE_IMAGE_H_
#define PLATEAUDIT_CORE_IMAGE_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace plateaudit {

inline constexpr int kDefaultChannels = 5;
inline constexpr int kMinImageSide = 16;

// Multi-channel float raster, row-major and channel-last.
class SiteImage {
 public:
  SiteImage() = default;
  // Zero-filled. Throws Error(kValidation) for sides < 16 or channels < 1.
  SiteImage(int height, int width, int channels);
  SiteImage(int height, int width, int channels, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height_) * width_;
  }

  float at(int y, int x, int c) const { return data_[Index(y, x, c)]; }
  float& at(int y, int x, int c) { return data_[Index(y, x, c)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  // Copy of one channel as a dense height*width plane.
  std::vector<float> Channel(int c) const;
  void SetChannel(int c, std::span<const float> plane);

  // Clamps every value to [0, 1].
  void Clamp01();

  // Throws Error(kValidation) unless every value is finite and in [0, 1].
  void Validate() const;

  bool operator==(const SiteImage&) const = default;

 private:
  std::size_t Index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// PTNS1 container: 5-byte magic, u32 LE height/width/channels, then f32 LE
// payload. Write validates the image first.
void WriteImage(const SiteImage& image, const std::filesystem::path& path);
std::string EncodeImage(const SiteImage& image);

// Throws Error(kFormat) on a bad magic or dimensions and Error(kCorruption)
// on truncated payloads or non-finite / out-of-range values.
SiteImage ReadImage(const std::filesystem::path& path);
SiteImage DecodeImage(const std::string& bytes);

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_IMAGE_H_
