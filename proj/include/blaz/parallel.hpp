// Copyright 2026 The Blaz Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLAZ_PARALLEL_HPP
#define BLAZ_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace blaz {

// Worker count: BLAZ_THREADS when set to a positive integer, otherwise the
// hardware concurrency.
std::size_t thread_count();

// Calls fn(begin, end) over disjoint chunks of [0, n). Chunk boundaries only
// depend on n and the thread count, and callers write to disjoint outputs,
// so results do not depend on scheduling.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace blaz

#endif  // BLAZ_PARALLEL_HPP
