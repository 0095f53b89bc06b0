#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace suffacts {

// Applies `fn` to every item on up to `jobs` threads in contiguous shards
// and returns results in input order. The exception of the lowest failing
// index is rethrown, so errors match a serial run.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, std::size_t jobs, Fn fn) {
  using R = decltype(fn(items.front()));
  std::vector<R> out(items.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, items.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  std::exception_ptr failure;
  std::size_t failed_at = items.size();
  std::mutex mu;
  std::vector<std::thread> workers;
  const std::size_t shard = (items.size() + jobs - 1) / jobs;
  for (std::size_t w = 0; w < jobs; ++w) {
    const std::size_t begin = w * shard, end = std::min(items.size(), begin + shard);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      std::size_t i = begin;
      try {
        for (; i < end; ++i) out[i] = fn(items[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace suffacts
