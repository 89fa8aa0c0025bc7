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

#include "plateaudit/core/error.h"

namespace plateaudit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat:
      return "format error";
    case ErrorCode::kCorruption:
      return "corruption error";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kConfig:
      return "config error";
    case ErrorCode::kIo:
      return "I/O error";
    case ErrorCode::kDegenerateInput:
      return "degenerate input";
    case ErrorCode::kConvergence:
      return "convergence error";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kJoin:
      return "join error";
    case ErrorCode::kInput:
      return "input error";
    case ErrorCode::kUndefinedMetric:
      return "undefined metric";
    case ErrorCode::kPairing:
      return "pairing error";
    case ErrorCode::kAudit:
      return "audit error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace plateaudit
