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

#ifndef PLATEAUDIT_LEARN_LABELS_H_
#define PLATEAUDIT_LEARN_LABELS_H_

#include <span>
#include <string>
#include <vector>

namespace plateaudit::learn {

struct EncodedLabels {
  std::vector<int> y;
  std::vector<std::string> classes;
};

// Classes are ordered numerically when every label parses as an integer and
// lexicographically otherwise.
EncodedLabels EncodeLabels(std::span<const std::string> labels);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_LABELS_H_
