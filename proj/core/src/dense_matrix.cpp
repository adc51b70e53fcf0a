#include "dashsvd/dense_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dashsvd/errors.hpp"

namespace dashsvd {

DenseMatrix::DenseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

DenseMatrix DenseMatrix::from_data(index_t rows, index_t cols, std::vector<double> entries) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    if (static_cast<index_t>(entries.size()) != rows * cols)
        throw ShapeError("entry count " + std::to_string(entries.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    DenseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(entries);
    if (!m.all_finite()) throw NumericalError("non-finite entry in dense input");
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace dashsvd
