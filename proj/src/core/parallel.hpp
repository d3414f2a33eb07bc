// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ringqed
{

// Runs body(k) for k in [0, count) on up to `jobs` threads. Each index runs
// exactly once; the first exception is rethrown after all workers join.
template <typename Body>
void parallel_for(int count, int jobs, Body &&body)
{
  jobs = std::clamp(jobs, 1, std::max(count, 1));
  if (jobs == 1)
  {
    for (int k = 0; k < count; ++k)
      body(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++)
      {
        try
        {
          body(k);
        }
        catch (...)
        {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

}  // namespace ringqed
