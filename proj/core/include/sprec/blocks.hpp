#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "sprec/rng.hpp"

namespace sprec {

/// Samples per block. Each block owns the generator stream
/// stream_seed(seed, block_index), so results depend on the seed and the
/// sample count but never on how blocks are spread over threads.
inline constexpr std::size_t kBlockSize = std::size_t{1} << 16;

/// Runs fn(rng, begin, count) for every block of [0, n) and returns the
/// per-block results in block order. Exceptions from workers are rethrown.
template <class Fn>
auto run_blocks(std::size_t n, std::uint64_t seed, unsigned workers, Fn fn) {
  using Result = decltype(fn(std::declval<Rng&>(), std::size_t{}, std::size_t{}));
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Result> results(blocks);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < blocks; b += stride) {
      Rng rng(stream_seed(seed, b));
      const std::size_t begin = b * kBlockSize;
      results[b] = fn(rng, begin, std::min(kBlockSize, n - begin));
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(blocks, 1));
  if (threads == 1) {
    work(0, 1);
    return results;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        work(t, threads);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace sprec
