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

#ifndef PLATEAUDIT_CORE_IO_H_
#define PLATEAUDIT_CORE_IO_H_

#include <filesystem>
#include <string>
#include <optional>
#include <string_view>
#include <vector>

namespace plateaudit {

// Whole-file helpers; failures raise Error(kIo) naming the path.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// printf-style "%.*g" / "%.*f" without locale surprises.
std::string FormatSignificant(double value, int digits);
std::string FormatFixed(double value, int decimals);

// Unquoted CSV: ids are validated not to contain commas or quotes.
std::vector<std::string_view> SplitCsvLine(std::string_view line);
// Lines without trailing '\r'; a final empty line is dropped.
std::vector<std::string_view> SplitLines(std::string_view text);
// Whole-field decimal parse; nullopt on junk or non-finite values.
std::optional<double> ParseDouble(std::string_view text);
std::optional<int> ParseInt(std::string_view text);

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_IO_H_
