#include "dashsvd/random.hpp"

#include <cmath>
#include <numbers>

namespace dashsvd {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {
// Top 53 bits, centered: uniform on (0, 1), never 0 or 1, so both Box-Muller
// logs and trig arguments stay finite.
double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
}
}  // namespace

double normal_at(std::uint64_t seed, std::uint64_t i) {
    const double u1 = to_unit(splitmix64_at(seed, 2 * i));
    const double u2 = to_unit(splitmix64_at(seed, 2 * i + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DenseMatrix gaussian_matrix(index_t rows, index_t cols, std::uint64_t seed) {
    DenseMatrix g(rows, cols);
    double* d = g.data();
    const index_t n = g.size();
#pragma omp parallel for schedule(static)
    for (index_t e = 0; e < n; ++e) d[e] = normal_at(seed, static_cast<std::uint64_t>(e));
    return g;
}

}  // namespace dashsvd
