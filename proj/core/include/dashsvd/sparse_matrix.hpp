#pragma once

#include <cstdint>
#include <vector>

#include "dashsvd/dense_matrix.hpp"

namespace dashsvd {

// Compressed-sparse-row matrix. Canonical form: offsets has rows+1 entries
// with offsets[0] == 0 and offsets[rows] == nnz; column indices are strictly
// increasing within each row; values are finite and nonzero (explicit zeros
// are dropped and duplicates summed at ingestion).
struct SparseMatrix {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<index_t> offsets;
    std::vector<index_t> col_indices;
    std::vector<double> values;

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    // Checks the canonical-form invariants above; throws ShapeError or
    // NumericalError naming the first violation.
    void validate() const;
};

// CSR transpose via a counting sort over column indices; preserves canonical
// form. O(nnz + rows + cols).
SparseMatrix transpose(const SparseMatrix& a);

// Y = A * X for dense X. Rows of Y are disjoint units of parallel work and
// each row accumulates in fixed column order, so the result is bitwise
// independent of the thread count. X is repacked row-major in column blocks
// so the inner loop reads contiguous memory.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

}  // namespace dashsvd
