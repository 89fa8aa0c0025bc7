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

#ifndef PLATEAUDIT_CORE_PARALLEL_H_
#define PLATEAUDIT_CORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace plateaudit {

// Runs fn(0..n-1) on up to `threads` workers. Work items must write only to
// their own output slot; results are therefore independent of scheduling.
// If several items throw, the exception of the lowest index is rethrown.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_PARALLEL_H_
