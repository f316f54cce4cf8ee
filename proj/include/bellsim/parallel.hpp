#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bellsim/rng.hpp"

namespace bellsim {

enum class ExecutionPolicy { Serial, Parallel };

/// Trials per substream chunk. Fixed: the chunk layout (and therefore every
/// random draw) depends only on N, never on the worker count.
inline constexpr std::uint64_t kChunkTrials = 1u << 16;

/// Runs `kernel(chunk_stream, n_trials, summary)` over n trials split into
/// fixed-size chunks, one derived substream per chunk, and folds the chunk
/// summaries in chunk order. The Parallel policy distributes chunks with
/// OpenMP; both policies produce bit-identical results.
template <class Summary, class Kernel>
Summary run_chunked(const SeededStream& stream, std::uint64_t n, Kernel&& kernel,
                    ExecutionPolicy policy = ExecutionPolicy::Parallel) {
    const std::uint64_t n_chunks = (n + kChunkTrials - 1) / kChunkTrials;
    std::vector<Summary> parts(n_chunks);

    if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
            SeededStream sub = stream.substream(static_cast<std::uint64_t>(c));
            const std::uint64_t count =
                std::min<std::uint64_t>(kChunkTrials, n - static_cast<std::uint64_t>(c) * kChunkTrials);
            kernel(sub, count, parts[static_cast<std::size_t>(c)]);
        }
    } else {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            SeededStream sub = stream.substream(c);
            const std::uint64_t count = std::min<std::uint64_t>(kChunkTrials, n - c * kChunkTrials);
            kernel(sub, count, parts[static_cast<std::size_t>(c)]);
        }
    }

    Summary total{};
    for (const Summary& p : parts) total.merge(p);
    return total;
}

} // namespace bellsim
