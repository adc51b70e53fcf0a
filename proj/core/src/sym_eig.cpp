#include "dashsvd/sym_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dashsvd/errors.hpp"

namespace dashsvd {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, with the
// orthogonal transform accumulated in place. w is row-major n x n; on return
// d holds the diagonal, e[1..n) the subdiagonal, and w the transform whose
// columns will become eigenvectors after the QL pass.
void tridiagonalize(std::vector<double>& w, index_t n, std::vector<double>& d,
                    std::vector<double>& e) {
    auto a = [&](index_t i, index_t j) -> double& { return w[i * n + j]; };
    for (index_t i = n - 1; i >= 1; --i) {
        const index_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (index_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (index_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (index_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (index_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (index_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (index_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (index_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (index_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (index_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (index_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (index_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (index_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

// Implicit QL iteration with Wilkinson shifts on the tridiagonal (d, e),
// rotations accumulated into the columns of w. Throws past the iteration cap.
void ql_iterate(std::vector<double>& w, index_t n, std::vector<double>& d,
                std::vector<double>& e) {
    constexpr int kMaxIter = 50;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    auto z = [&](index_t i, index_t j) -> double& { return w[i * n + j]; };
    for (index_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (index_t l = 0; l < n; ++l) {
        int iter = 0;
        index_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxIter)
                    throw NumericalError("symmetric QL iteration did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                index_t i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = r = std::hypot(f, g);
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (index_t k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

EigenPair sym_eig(const DenseMatrix& g) {
    const index_t n = g.rows();
    if (n != g.cols()) throw ShapeError("sym_eig: matrix is not square");
    if (n == 0) return {{}, DenseMatrix(0, 0)};

    double scale = 0.0, asym = 0.0;
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i) {
            scale = std::max(scale, std::abs(g(i, j)));
            asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
        }
    if (asym > 1e-10 * std::max(scale, 1e-300))
        throw ShapeError("sym_eig: matrix is not symmetric");

    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) w[i * n + j] = g(i, j);
    std::vector<double> d(n, 0.0), e(n, 0.0);

    if (n == 1) {
        d[0] = w[0];
        w[0] = 1.0;
    } else {
        tridiagonalize(w, n, d, e);
        ql_iterate(w, n, d, e);
    }

    std::vector<index_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return d[a] < d[b]; });

    EigenPair out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (index_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        double* col = out.vectors.col(j);
        for (index_t i = 0; i < n; ++i) col[i] = w[i * n + order[j]];
    }
    return out;
}

}  // namespace dashsvd
