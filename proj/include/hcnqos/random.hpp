#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace hcnqos {

using Rng = std::mt19937_64;

/// Independent substreams, one per Monte Carlo consumer.
enum class Stream : std::uint64_t {
  topology = 0,
  trials = 1,
  lb_signal = 2,
  lb_interference = 3,
  oracle = 4,
};

/// Trials are grouped in fixed-size blocks; each block has its own RNG keyed
/// by (seed, stream, block index), so results do not depend on how blocks
/// are scheduled across workers.
inline constexpr std::uint64_t kBlockSize = 1024;

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t block = 0);

/// Runs `body(rng, first_trial, count, acc)` over ceil(total / kBlockSize)
/// blocks and returns the per-block accumulators in block order.
template <class Acc, class MakeAcc, class Body>
std::vector<Acc> run_blocks(std::uint64_t total, std::uint64_t seed, Stream stream,
                            unsigned workers, MakeAcc make_acc, Body body) {
  const std::uint64_t blocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> out;
  out.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) out.push_back(make_acc());

  auto run_one = [&](std::uint64_t b) {
    Rng rng = make_rng(seed, stream, b);
    const std::uint64_t first = b * kBlockSize;
    const std::uint64_t count = std::min(kBlockSize, total - first);
    body(rng, first, count, out[b]);
  };

  const unsigned n_workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(blocks, 1)));
  if (n_workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_one(b);
    return out;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_one(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = blocks;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace hcnqos
