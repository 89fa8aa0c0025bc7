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

#ifndef PLATEAUDIT_CORE_DIGEST_H_
#define PLATEAUDIT_CORE_DIGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace plateaudit {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// 16 lowercase hex digits.
std::string HexDigest(uint64_t value);

// Digest of an arbitrary byte string, as 16 hex digits.
std::string DigestOf(std::string_view bytes);

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_DIGEST_H_
