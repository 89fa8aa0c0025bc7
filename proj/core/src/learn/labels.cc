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

#include "plateaudit/learn/labels.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>

namespace plateaudit::learn {
namespace {

std::optional<long long> AsInteger(const std::string& text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

EncodedLabels EncodeLabels(std::span<const std::string> labels) {
  EncodedLabels out;
  std::vector<std::string> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const bool numeric = std::all_of(classes.begin(), classes.end(), [](const auto& c) {
    return AsInteger(c).has_value();
  });
  if (numeric) {
    std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
      return *AsInteger(a) < *AsInteger(b);
    });
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    index[classes[i]] = static_cast<int>(i);
  }
  out.y.reserve(labels.size());
  for (const auto& label : labels) out.y.push_back(index.at(label));
  out.classes = std::move(classes);
  return out;
}

}  // namespace plateaudit::learn
