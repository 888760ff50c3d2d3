#pragma once

#include <functional>
#include <string>

namespace winfty {

/// Worker thread count: min(WINFTY_THREADS, hardware_concurrency), at least 1.
int worker_threads();

/// Runs fn over [begin,end) split into fixed-size chunks. Chunk boundaries do
/// not depend on the thread count, so chunk-local reductions merged in chunk
/// order give identical results in sequential and parallel runs.
void parallel_for_chunks(int n, const std::function<void(int, int)>& fn, int grain = 2048);

/// Writes content to path via a temporary file in the same directory followed
/// by an atomic rename. Throws std::runtime_error on failure.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace winfty
