#pragma once

#include <cstdint>
#include <random>

namespace tc {

// Engine for one (seed, stream) pair. Every sample owns a stream, so results do not
// depend on how work is split across threads.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

}  // namespace tc
