#include "dashsvd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dashsvd/decompositions.hpp"
#include "dashsvd/dense_kernels.hpp"
#include "dashsvd/errors.hpp"
#include "dashsvd/random.hpp"

namespace dashsvd {

SparseMatrix from_dense(const DenseMatrix& a) {
    SparseMatrix m;
    m.rows = a.rows();
    m.cols = a.cols();
    m.offsets.assign(a.rows() + 1, 0);
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) ++m.offsets[i + 1];
    for (index_t i = 0; i < a.rows(); ++i) m.offsets[i + 1] += m.offsets[i];
    m.col_indices.reserve(m.offsets.back());
    m.values.reserve(m.offsets.back());
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) {
                m.col_indices.push_back(j);
                m.values.push_back(a(i, j));
            }
    return m;
}

DenseMatrix to_dense(const SparseMatrix& a) {
    DenseMatrix d(a.rows, a.cols);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t p = a.offsets[i]; p < a.offsets[i + 1]; ++p)
            d(i, a.col_indices[p]) = a.values[p];
    return d;
}

DenseMatrix random_orthonormal(index_t n, index_t cols, std::uint64_t seed) {
    if (cols > n) throw ShapeError("random_orthonormal: cols must be <= n");
    return qr_orth(gaussian_matrix(n, cols, seed));
}

SparseMatrix dense1_matrix(index_t n, std::uint64_t seed) {
    return from_dense(gaussian_matrix(n, n, seed));
}

std::vector<double> dense2_spectrum(index_t n) {
    std::vector<double> s(n);
    for (index_t i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(static_cast<double>(i + 1));
    return s;
}

SparseMatrix dense2_matrix(index_t n, std::uint64_t seed) {
    const std::vector<double> s = dense2_spectrum(n);
    return from_dense(spectrum_matrix(n, n, s, seed));
}

DenseMatrix spectrum_matrix(index_t rows, index_t cols, std::span<const double> sigmas,
                            std::uint64_t seed) {
    const index_t t = static_cast<index_t>(sigmas.size());
    if (t > std::min(rows, cols)) throw ShapeError("spectrum_matrix: too many singular values");
    DenseMatrix u = random_orthonormal(rows, t, splitmix64_at(seed, 0));
    const DenseMatrix v = random_orthonormal(cols, t, splitmix64_at(seed, 1));
    scale_columns(u, sigmas);
    return matmul_transb(u, v);
}

SparseMatrix sparse_random(index_t rows, index_t cols, index_t nnz_per_row, std::uint64_t seed,
                           bool row_decay) {
    if (rows < 1 || cols < 1 || nnz_per_row < 1) throw ShapeError("sparse_random: empty shape");
    if (nnz_per_row > cols) throw ShapeError("sparse_random: nnz_per_row exceeds cols");
    // Two decoupled counter streams: one for column positions, one for values,
    // so the draw at (row, slot) never depends on other rows.
    const std::uint64_t col_seed = splitmix64_at(seed, 0);
    const std::uint64_t val_seed = splitmix64_at(seed, 1);

    std::vector<std::vector<std::pair<index_t, double>>> rows_buf(rows);
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < rows; ++i) {
        auto& row = rows_buf[i];
        row.reserve(nnz_per_row);
        const double scale = row_decay ? 1.0 / std::sqrt(1.0 + static_cast<double>(i)) : 1.0;
        for (index_t t = 0; t < nnz_per_row; ++t) {
            const std::uint64_t e = static_cast<std::uint64_t>(i) * nnz_per_row + t;
            const index_t j = static_cast<index_t>(splitmix64_at(col_seed, e) %
                                                   static_cast<std::uint64_t>(cols));
            row.emplace_back(j, scale * normal_at(val_seed, e));
        }
        std::sort(row.begin(), row.end());
        // Duplicate column draws collapse by summation.
        std::size_t w = 0;
        for (std::size_t r = 0; r < row.size();) {
            auto cur = row[r++];
            while (r < row.size() && row[r].first == cur.first) cur.second += row[r++].second;
            if (cur.second != 0.0) row[w++] = cur;
        }
        row.resize(w);
    }

    SparseMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.offsets.assign(rows + 1, 0);
    for (index_t i = 0; i < rows; ++i) m.offsets[i + 1] = m.offsets[i] + rows_buf[i].size();
    m.col_indices.resize(m.offsets.back());
    m.values.resize(m.offsets.back());
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < rows; ++i) {
        index_t p = m.offsets[i];
        for (const auto& [j, v] : rows_buf[i]) {
            m.col_indices[p] = j;
            m.values[p++] = v;
        }
    }
    return m;
}

}  // namespace dashsvd
