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

#ifndef PLATEAUDIT_CORE_ERROR_H_
#define PLATEAUDIT_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace plateaudit {

enum class ErrorCode {
  kFormat,
  kCorruption,
  kValidation,
  kConfig,
  kIo,
  kDegenerateInput,
  kConvergence,
  kSchema,
  kParse,
  kJoin,
  kInput,
  kUndefinedMetric,
  kPairing,
  kAudit,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. The code lets callers (notably the
// CLI exit-status mapping) distinguish failure families without string
// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the "<code name>: " prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_ERROR_H_
