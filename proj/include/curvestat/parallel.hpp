#pragma once

// Contiguous chunked parallel-for. Chunk boundaries depend only on the
// range and chunk count, and callers write into disjoint slots, so
// results never depend on scheduling.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace curvestat {

struct Chunk {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<Chunk> split_range(std::size_t n, unsigned parts) {
  parts = std::max(1U, parts);
  if (n < parts) parts = static_cast<unsigned>(std::max<std::size_t>(1, n));
  std::vector<Chunk> chunks;
  chunks.reserve(parts);
  const std::size_t base = n / parts;
  const std::size_t extra = n % parts;
  std::size_t at = 0;
  for (unsigned i = 0; i < parts; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    chunks.push_back({at, at + len});
    at += len;
  }
  return chunks;
}

/// Runs body(chunk_index, chunk) for each chunk, on up to `threads` threads.
inline void parallel_chunks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, Chunk)>& body) {
  const auto chunks = split_range(n, threads);
  if (chunks.size() <= 1) {
    if (!chunks.empty()) body(0, chunks[0]);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      pool.emplace_back([&, i] {
        try {
          body(i, chunks[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Splits [0, n) into `blocks` fixed chunks (independent of `threads`) and
/// runs body(block_index, chunk) for each, spreading blocks over threads.
inline void parallel_blocks(std::size_t n, unsigned blocks, unsigned threads,
                            const std::function<void(std::size_t, Chunk)>& body) {
  const auto fixed = split_range(n, blocks);
  parallel_chunks(fixed.size(), threads, [&](std::size_t, Chunk c) {
    for (std::size_t b = c.begin; b < c.end; ++b) body(b, fixed[b]);
  });
}

}  // namespace curvestat
