#include "dashsvd/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dashsvd/errors.hpp"

namespace dashsvd {

namespace {

constexpr index_t kRowBlock = 256;  // C rows per task: A panel + C panel stay cache-resident
constexpr index_t kDotTile = 8;     // column pairs per dot-product tile

// Dot-product tile: out(i,j) = sum_r a(:,i0+i)^T b(:,j0+j). Serial over r so the
// accumulation order never depends on threading.
void dot_tile(const DenseMatrix& a, const DenseMatrix& b, index_t i0, index_t ni, index_t j0,
              index_t nj, DenseMatrix& out) {
    double acc[kDotTile][kDotTile] = {};
    const index_t m = a.rows();
    for (index_t r = 0; r < m; ++r) {
        for (index_t i = 0; i < ni; ++i) {
            const double av = a(r, i0 + i);
            for (index_t j = 0; j < nj; ++j) acc[i][j] += av * b(r, j0 + j);
        }
    }
    for (index_t i = 0; i < ni; ++i)
        for (index_t j = 0; j < nj; ++j) out(i0 + i, j0 + j) = acc[i][j];
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    const index_t m = a.rows(), kk = a.cols(), n = b.cols();
    const index_t nblocks = (m + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static)
    for (index_t blk = 0; blk < nblocks; ++blk) {
        const index_t r0 = blk * kRowBlock;
        const index_t r1 = std::min(m, r0 + kRowBlock);
        for (index_t j = 0; j < n; ++j) {
            double* cj = c.col(j);
            for (index_t t = 0; t < kk; ++t) {
                const double bv = b(t, j);
                const double* at = a.col(t);
                for (index_t i = r0; i < r1; ++i) cj[i] += bv * at[i];
            }
        }
    }
    return c;
}

DenseMatrix matmul_transa(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("matmul_transa: row counts differ");
    DenseMatrix c(a.cols(), b.cols());
    const index_t ti = (a.cols() + kDotTile - 1) / kDotTile;
    const index_t tj = (b.cols() + kDotTile - 1) / kDotTile;
#pragma omp parallel for schedule(static)
    for (index_t t = 0; t < ti * tj; ++t) {
        const index_t i0 = (t / tj) * kDotTile;
        const index_t j0 = (t % tj) * kDotTile;
        dot_tile(a, b, i0, std::min<index_t>(kDotTile, a.cols() - i0), j0,
                 std::min<index_t>(kDotTile, b.cols() - j0), c);
    }
    return c;
}

DenseMatrix matmul_transb(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("matmul_transb: inner dimensions differ");
    DenseMatrix c(a.rows(), b.rows());
    const index_t m = a.rows(), kk = a.cols(), n = b.rows();
    const index_t nblocks = (m + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static)
    for (index_t blk = 0; blk < nblocks; ++blk) {
        const index_t r0 = blk * kRowBlock;
        const index_t r1 = std::min(m, r0 + kRowBlock);
        for (index_t j = 0; j < n; ++j) {
            double* cj = c.col(j);
            for (index_t t = 0; t < kk; ++t) {
                const double bv = b(j, t);
                const double* at = a.col(t);
                for (index_t i = r0; i < r1; ++i) cj[i] += bv * at[i];
            }
        }
    }
    return c;
}

DenseMatrix gram(const DenseMatrix& c) {
    const index_t l = c.cols();
    DenseMatrix g(l, l);
    const index_t nt = (l + kDotTile - 1) / kDotTile;
    // Upper-triangle tiles only, then mirror: G is exactly symmetric.
    std::vector<std::pair<index_t, index_t>> tiles;
    for (index_t bi = 0; bi < nt; ++bi)
        for (index_t bj = bi; bj < nt; ++bj) tiles.emplace_back(bi * kDotTile, bj * kDotTile);
#pragma omp parallel for schedule(static)
    for (index_t t = 0; t < static_cast<index_t>(tiles.size()); ++t) {
        const auto [i0, j0] = tiles[t];
        dot_tile(c, c, i0, std::min<index_t>(kDotTile, l - i0), j0,
                 std::min<index_t>(kDotTile, l - j0), g);
    }
    for (index_t j = 0; j < l; ++j)
        for (index_t i = j + 1; i < l; ++i) g(i, j) = g(j, i);
    return g;
}

DenseMatrix transposed(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < a.cols(); ++j)
        for (index_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

void scale_columns(DenseMatrix& a, std::span<const double> s) {
    if (static_cast<index_t>(s.size()) != a.cols())
        throw ShapeError("scale_columns: scale count does not match column count");
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < a.cols(); ++j) {
        double* cj = a.col(j);
        for (index_t i = 0; i < a.rows(); ++i) cj[i] *= s[j];
    }
}

void add_scaled(DenseMatrix& y, double alpha, const DenseMatrix& x) {
    if (y.rows() != x.rows() || y.cols() != x.cols())
        throw ShapeError("add_scaled: shapes differ");
    double* yd = y.data();
    const double* xd = x.data();
    const index_t n = y.size();
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) yd[i] += alpha * xd[i];
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    const double* d = a.data();
    for (index_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(d[i]));
    return m;
}

}  // namespace dashsvd
