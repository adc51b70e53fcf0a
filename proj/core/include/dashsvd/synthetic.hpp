#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dashsvd/dense_matrix.hpp"
#include "dashsvd/sparse_matrix.hpp"

namespace dashsvd {

// Conversions between dense and canonical CSR (exact zeros dropped).
SparseMatrix from_dense(const DenseMatrix& a);
DenseMatrix to_dense(const SparseMatrix& a);

// Orthonormal n x cols factor from the QR of a seeded Gaussian matrix.
DenseMatrix random_orthonormal(index_t n, index_t cols, std::uint64_t seed);

// Test matrix with iid standard normal entries (stored sparse, fully dense).
SparseMatrix dense1_matrix(index_t n, std::uint64_t seed);

// Test matrix with planted spectrum sigma_i = 1/sqrt(i): random orthonormal
// factors around the known diagonal. Spectrum available exactly via
// dense2_spectrum.
SparseMatrix dense2_matrix(index_t n, std::uint64_t seed);
std::vector<double> dense2_spectrum(index_t n);

// rows x cols matrix with the given singular values planted via seeded random
// orthonormal factors. sigmas.size() <= min(rows, cols); missing values are
// zero.
DenseMatrix spectrum_matrix(index_t rows, index_t cols, std::span<const double> sigmas,
                            std::uint64_t seed);

// Random sparse matrix: nnz_per_row uniform column draws per row (duplicates
// collapse), standard normal values. With row_decay, row i is scaled by
// 1/sqrt(1+i), giving a decaying spectrum on which low-rank truncation is
// meaningful.
SparseMatrix sparse_random(index_t rows, index_t cols, index_t nnz_per_row,
                           std::uint64_t seed, bool row_decay = false);

}  // namespace dashsvd
