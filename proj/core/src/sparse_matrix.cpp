#include "dashsvd/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dashsvd/errors.hpp"

namespace dashsvd {

void SparseMatrix::validate() const {
    if (rows < 0 || cols < 0) throw ShapeError("sparse matrix with negative dimension");
    if (static_cast<index_t>(offsets.size()) != rows + 1)
        throw ShapeError("offset array must have rows+1 entries");
    if (offsets.front() != 0 || offsets.back() != nnz())
        throw ShapeError("offsets must span [0, nnz]");
    if (col_indices.size() != values.size()) throw ShapeError("index/value length mismatch");
    for (index_t i = 0; i < rows; ++i) {
        if (offsets[i] > offsets[i + 1]) throw ShapeError("offsets must be non-decreasing");
        for (index_t p = offsets[i]; p < offsets[i + 1]; ++p) {
            if (col_indices[p] < 0 || col_indices[p] >= cols)
                throw ShapeError("column index out of range in row " + std::to_string(i));
            if (p > offsets[i] && col_indices[p - 1] >= col_indices[p])
                throw ShapeError("column indices not strictly increasing in row " +
                                 std::to_string(i));
            if (!std::isfinite(values[p]))
                throw NumericalError("non-finite value in row " + std::to_string(i));
            if (values[p] == 0.0)
                throw NumericalError("explicit zero stored in row " + std::to_string(i));
        }
    }
}

SparseMatrix transpose(const SparseMatrix& a) {
    SparseMatrix t;
    t.rows = a.cols;
    t.cols = a.rows;
    const index_t nnz = a.nnz();
    t.offsets.assign(a.cols + 1, 0);
    t.col_indices.resize(nnz);
    t.values.resize(nnz);
    for (index_t p = 0; p < nnz; ++p) ++t.offsets[a.col_indices[p] + 1];
    for (index_t j = 0; j < a.cols; ++j) t.offsets[j + 1] += t.offsets[j];
    std::vector<index_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
    // Scanning rows in order drops each entry into its transposed row already
    // sorted by column.
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t p = a.offsets[i]; p < a.offsets[i + 1]; ++p) {
            const index_t pos = cursor[a.col_indices[p]]++;
            t.col_indices[pos] = i;
            t.values[pos] = a.values[p];
        }
    return t;
}

namespace {
constexpr index_t kColBlock = 48;  // accumulator strip per row; fits registers + L1
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
    if (a.cols != x.rows()) throw ShapeError("spmm: inner dimensions differ");
    DenseMatrix y(a.rows, x.cols());
    const index_t l = x.cols();
    std::vector<double> packed(static_cast<std::size_t>(a.cols) * std::min(kColBlock, l));
    for (index_t c0 = 0; c0 < l; c0 += kColBlock) {
        const index_t bw = std::min(kColBlock, l - c0);
        // Row-major repack of the active column block: the inner kernel then
        // reads one contiguous strip per nonzero.
        double* p = packed.data();
#pragma omp parallel for schedule(static)
        for (index_t j = 0; j < a.cols; ++j)
            for (index_t t = 0; t < bw; ++t) p[j * bw + t] = x(j, c0 + t);
#pragma omp parallel for schedule(static)
        for (index_t i = 0; i < a.rows; ++i) {
            double acc[kColBlock] = {};
            for (index_t q = a.offsets[i]; q < a.offsets[i + 1]; ++q) {
                const double av = a.values[q];
                const double* row = p + a.col_indices[q] * bw;
                for (index_t t = 0; t < bw; ++t) acc[t] += av * row[t];
            }
            for (index_t t = 0; t < bw; ++t) y(i, c0 + t) = acc[t];
        }
    }
    return y;
}

}  // namespace dashsvd
