#pragma once

#include <vector>

#include "dashsvd/dense_matrix.hpp"

namespace dashsvd {

// Truncated (or economic) SVD factors: U is rows x r, V is cols x r, s holds r
// singular values in descending order. Columns of U and V are orthonormal.
struct TruncatedSvd {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v;

    index_t rank() const { return static_cast<index_t>(s.size()); }
};

// Economic SVD of a full-column-rank matrix c (rows >= cols required) via the
// eigendecomposition of the small Gram matrix c^T c. One O(n^3) step on an
// l x l matrix instead of an O(m n^2) bidiagonalization; squares the condition
// number, which the rank floor guards against.
//
// The rank floor is max(rows, cols) * eps * sigma_max_estimate; any singular
// value at or below it raises RankDeficient with the offending (0-based) index.
// Sign convention: the first component of each V column with magnitude above
// resolution is made non-negative, and the paired U column follows V.
TruncatedSvd eig_svd(const DenseMatrix& c);

// Thin Householder QR orthonormalization: returns Q with c.cols() orthonormal
// columns spanning range(c). rows >= cols required. A diagonal entry of R that
// falls below the rank floor raises RankDeficient.
DenseMatrix qr_orth(const DenseMatrix& c);

// Reference SVD used to validate the fast path: one-sided Jacobi rotations,
// deliberately sharing no code with eig_svd. Any shape accepted; returns the
// economic factorization with rank min(rows, cols), zero singular values
// allowed (their U columns are filled by orthonormal completion). Desk-scale
// only: min(rows, cols) must be <= 2000. Throws NumericalError if sweeps do
// not converge.
TruncatedSvd oracle_svd(const DenseMatrix& c);

}  // namespace dashsvd
