#pragma once

#include <span>

#include "dashsvd/dense_matrix.hpp"

namespace dashsvd {

// Dense BLAS-3 style helpers. All of them partition work by disjoint output
// blocks with static schedules, so results are bitwise identical for any
// thread count.

// C = A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// C = A^T * B
DenseMatrix matmul_transa(const DenseMatrix& a, const DenseMatrix& b);

// C = A * B^T
DenseMatrix matmul_transb(const DenseMatrix& a, const DenseMatrix& b);

// G = C^T * C, computed on the upper triangle and mirrored, so the result is
// exactly symmetric.
DenseMatrix gram(const DenseMatrix& c);

DenseMatrix transposed(const DenseMatrix& a);

// Scales column j of a by s[j] in place. s.size() must equal a.cols().
void scale_columns(DenseMatrix& a, std::span<const double> s);

// y += alpha * x (elementwise over whole buffers; shapes must match).
void add_scaled(DenseMatrix& y, double alpha, const DenseMatrix& x);

double max_abs(const DenseMatrix& a);

}  // namespace dashsvd
