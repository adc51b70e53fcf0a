#pragma once

#include <cstdint>

#include "dashsvd/dense_matrix.hpp"

namespace dashsvd {

// i-th output of the SplitMix64 stream seeded with `seed`, evaluated directly
// (counter-based, no sequential state). Random access makes parallel fills
// independent of thread count and iteration order.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i);

// i-th standard normal draw of the stream: Box-Muller transform of stream
// outputs 2i and 2i+1.
double normal_at(std::uint64_t seed, std::uint64_t i);

// Standard normal matrix. Entry at column-major linear index e is normal_at(seed, e),
// so a given (seed, shape) pins every entry regardless of parallelism.
DenseMatrix gaussian_matrix(index_t rows, index_t cols, std::uint64_t seed);

}  // namespace dashsvd
