#pragma once

#include <string>

#include "dashsvd/dense_matrix.hpp"
#include "dashsvd/sparse_matrix.hpp"

namespace dashsvd {

// Reads a Matrix Market coordinate file into canonical CSR form.
// Accepted headers: object "matrix", format "coordinate", field real/integer/
// pattern, symmetry general/symmetric/skew-symmetric. Anything else (complex
// field, array format, hermitian) throws UnsupportedFormat.
// Canonicalization: 1-based indices shifted to 0-based, duplicates summed,
// symmetric/skew entries expanded to both triangles (diagonal not duplicated;
// skew diagonals must be absent or zero), pattern entries valued 1.0, entries
// that are (or sum to) exactly zero dropped, rows sorted by column.
// Malformed content throws ParseError carrying the 1-based line number.
SparseMatrix load_matrix_market(const std::string& path);

// Writes canonical coordinate form: general symmetry, entries in row-major
// order, values printed with 17 significant digits so a reload reproduces the
// matrix and a rewrite reproduces the bytes.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

// Dense factors are exchanged as Matrix Market array files (column-major).
DenseMatrix load_dense_array(const std::string& path);
void write_dense_array(const std::string& path, const DenseMatrix& a);

// Binary CSR cache, an internal convenience for re-running on big inputs:
// magic "DSH1", then rows/cols/nnz as little-endian u64, then offsets,
// column indices (i64) and values (f64). load_cache validates canonical form.
void save_cache(const std::string& path, const SparseMatrix& a);
SparseMatrix load_cache(const std::string& path);

}  // namespace dashsvd
