// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vemhd
{

int worker_count()
{
  if (const char *env = std::getenv("VEMHD_THREADS"))
  {
    const int n = std::atoi(env);
    if (n > 0)
    {
      return n;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)> &body)
{
  const int workers = std::min(worker_count(), std::max(n / 64, 1));
  if (workers <= 1)
  {
    for (int i = 0; i < n; i++)
    {
      body(i);
    }
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; w++)
  {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    threads.emplace_back(
      [&, begin, end]()
      {
        try
        {
          for (int i = begin; i < end; i++)
          {
            body(i);
          }
        }
        catch (...)
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
          {
            error = std::current_exception();
          }
        }
      });
  }
  for (auto &t : threads)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace vemhd
