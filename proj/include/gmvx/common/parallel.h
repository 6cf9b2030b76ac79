/*
 * Copyright 2026 The gmvx Authors.
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

#ifndef GMVX_COMMON_PARALLEL_H_
#define GMVX_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace gmvx {

// Number of worker threads used when a call does not specify one. Defaults to
// the hardware concurrency; 1 forces serial execution everywhere.
int DefaultThreadCount();
void SetDefaultThreadCount(int threads);

// Calls body(i) for every i in [0, n). Callers write results into pre-sized
// slots indexed by i, so the output never depends on scheduling. Nested calls
// from inside a worker run serially. If several iterations throw, the
// exception from the lowest index is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body,
                 int threads = 0);

}  // namespace gmvx

#endif  // GMVX_COMMON_PARALLEL_H_
