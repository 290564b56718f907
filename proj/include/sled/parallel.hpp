#pragma once

#include <cstdint>

namespace sled {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference path and an OpenMP path that produce bit-identical results; the
/// parallel paths only split loops whose iterations are independent (or reduce
/// through fixed per-row partials), so outputs never depend on thread count.
enum class Exec { serial, parallel };

/// splitmix64 finalizer; used to derive independent RNG streams
/// (per tree, per scale) from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in the open interval (0,1), built from the top 53 bits of a
/// 64-bit draw. Hand-rolled so results do not depend on the standard library's
/// distribution implementation.
inline double uniform_open01(std::uint64_t raw) {
    return (static_cast<double>(raw >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

} // namespace sled
