#pragma once

#include <cstdint>
#include <vector>

namespace dashsvd {

using index_t = std::int64_t;

// Column-major dense matrix. Storage is a single contiguous buffer; column j
// occupies data[j*rows .. j*rows+rows). Entries ingested from external sources
// go through from_data(), which rejects NaN/Inf; internally computed matrices
// use the zero-initializing constructor and are filled by kernels.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols);

    // Validating constructor for externally supplied entries (column-major order).
    // Throws ShapeError on size mismatch, NumericalError on non-finite entries.
    static DenseMatrix from_data(index_t rows, index_t cols, std::vector<double> entries);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t size() const { return rows_ * cols_; }

    double& operator()(index_t i, index_t j) { return data_[j * rows_ + i]; }
    double operator()(index_t i, index_t j) const { return data_[j * rows_ + i]; }

    double* col(index_t j) { return data_.data() + j * rows_; }
    const double* col(index_t j) const { return data_.data() + j * rows_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool all_finite() const;

  private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace dashsvd
