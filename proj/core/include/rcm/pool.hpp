#pragma once

#include <cstdint>
#include <functional>

namespace rcm {

/// Runs fn(0..n-1) on up to `workers` threads. Tasks are claimed from a
/// shared counter; callers keep determinism by writing into per-index slots
/// and reducing in index order afterwards.
void parallel_for(std::int64_t n, int workers, const std::function<void(std::int64_t)>& fn);

}  // namespace rcm
