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

#ifndef PLATEAUDIT_TOOLS_CLI_H_
#define PLATEAUDIT_TOOLS_CLI_H_

#include <ostream>

namespace plateaudit::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitBias = 1;
inline constexpr int kExitUsage = 2;

// Runs the plateaudit command line. Never throws; returns the exit code.
int Run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace plateaudit::cli

#endif  // PLATEAUDIT_TOOLS_CLI_H_
