#pragma once

#include <vector>

#include "dashsvd/dense_matrix.hpp"

namespace dashsvd {

// Full eigendecomposition of a symmetric matrix: values ascending, vectors
// column-orthonormal, vectors.col(i) paired with values[i].
struct EigenPair {
    std::vector<double> values;
    DenseMatrix vectors;
};

// Symmetric eigensolver: Householder tridiagonalization followed by implicit
// QL iteration with Wilkinson shifts. Serial and deterministic.
// Throws ShapeError if g is not square or not symmetric to 1e-10 relative;
// NumericalError if the QL iteration fails to converge.
EigenPair sym_eig(const DenseMatrix& g);

}  // namespace dashsvd
