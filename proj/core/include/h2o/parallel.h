// Copyright 2026 The H2O Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef H2O_PARALLEL_H_
#define H2O_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace h2o {

// Number of hardware threads, at least 1.
int DefaultJobs();

// Calls fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown by any call is rethrown after all threads finish.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& fn);

}  // namespace h2o

#endif  // H2O_PARALLEL_H_
