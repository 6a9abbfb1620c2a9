// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_PARALLEL_HPP
#define VEMHD_PARALLEL_HPP

#include <functional>

namespace vemhd
{

// Worker count: VEMHD_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) over contiguous blocks; each index is visited exactly once, so
// writes to index-owned slots need no synchronization. Exceptions propagate to the caller.
void parallel_for(int n, const std::function<void(int)> &body);

}  // namespace vemhd

#endif  // VEMHD_PARALLEL_HPP
