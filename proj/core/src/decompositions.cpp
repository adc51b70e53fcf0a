#include "dashsvd/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dashsvd/dense_kernels.hpp"
#include "dashsvd/errors.hpp"
#include "dashsvd/sym_eig.hpp"

namespace dashsvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Makes the first nonzero component of each V column non-negative and keeps
// the paired U column consistent, so factors compare across implementations.
void apply_sign_convention(DenseMatrix& u, DenseMatrix& v) {
    for (index_t j = 0; j < v.cols(); ++j) {
        double* vj = v.col(j);
        double lead = 0.0;
        for (index_t i = 0; i < v.rows(); ++i)
            if (vj[i] != 0.0) {
                lead = vj[i];
                break;
            }
        if (lead >= 0.0) continue;
        for (index_t i = 0; i < v.rows(); ++i) vj[i] = -vj[i];
        double* uj = u.col(j);
        for (index_t i = 0; i < u.rows(); ++i) uj[i] = -uj[i];
    }
}

double dot(const double* a, const double* b, index_t n) {
    double s = 0.0;
    for (index_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TruncatedSvd eig_svd(const DenseMatrix& c) {
    const index_t m = c.rows(), n = c.cols();
    if (m < n) throw ShapeError("eig_svd: needs rows >= cols (factor the transpose instead)");
    if (n == 0) return {DenseMatrix(m, 0), {}, DenseMatrix(0, 0)};

    EigenPair ep = sym_eig(gram(c));  // eigenvalues of c^T c, ascending

    const double lambda_max = std::max(ep.values.back(), 0.0);
    const double rank_floor = static_cast<double>(std::max(m, n)) * kEps * std::sqrt(lambda_max);
    const double floor2 = rank_floor * rank_floor;

    TruncatedSvd out;
    out.s.resize(n);
    out.v = DenseMatrix(n, n);
    for (index_t r = 0; r < n; ++r) {
        const double lambda = ep.values[n - 1 - r];
        if (lambda <= floor2)
            throw RankDeficient(r, "eig_svd: singular value at or below the rank floor");
        out.s[r] = std::sqrt(lambda);
        const double* src = ep.vectors.col(n - 1 - r);
        std::copy(src, src + n, out.v.col(r));
    }

    out.u = matmul(c, out.v);
    std::vector<double> inv_s(n);
    for (index_t r = 0; r < n; ++r) inv_s[r] = 1.0 / out.s[r];
    scale_columns(out.u, inv_s);

    apply_sign_convention(out.u, out.v);
    return out;
}

DenseMatrix qr_orth(const DenseMatrix& c) {
    const index_t m = c.rows(), n = c.cols();
    if (m < n) throw ShapeError("qr_orth: needs rows >= cols");
    if (n == 0) return DenseMatrix(m, 0);

    DenseMatrix w = c;  // Householder vectors accumulate below the diagonal
    std::vector<double> tau(n, 0.0), rdiag(n, 0.0);

    for (index_t k = 0; k < n; ++k) {
        double* wk = w.col(k);
        double norm2 = 0.0;
        for (index_t i = k; i < m; ++i) norm2 += wk[i] * wk[i];
        const double alpha = wk[k];
        const double beta = alpha >= 0.0 ? -std::sqrt(norm2) : std::sqrt(norm2);
        rdiag[k] = beta;
        if (beta == 0.0) continue;  // zero column: H = I, flagged by the rank check
        tau[k] = (beta - alpha) / beta;
        const double scale = 1.0 / (alpha - beta);
        for (index_t i = k + 1; i < m; ++i) wk[i] *= scale;
        wk[k] = 1.0;
#pragma omp parallel for schedule(static)
        for (index_t j = k + 1; j < n; ++j) {
            double* wj = w.col(j);
            const double t = tau[k] * dot(wk + k, wj + k, m - k);
            for (index_t i = k; i < m; ++i) wj[i] -= t * wk[i];
        }
    }

    double max_diag = 0.0;
    for (index_t k = 0; k < n; ++k) max_diag = std::max(max_diag, std::abs(rdiag[k]));
    const double rank_floor = static_cast<double>(std::max(m, n)) * kEps * max_diag;
    for (index_t k = 0; k < n; ++k)
        if (std::abs(rdiag[k]) <= rank_floor)
            throw RankDeficient(k, "qr_orth: diagonal of R at or below the rank floor");

    // Backward accumulation of the first n columns of Q.
    DenseMatrix q(m, n);
    for (index_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (index_t k = n - 1; k >= 0; --k) {
        if (tau[k] == 0.0) continue;
        const double* wk = w.col(k);
#pragma omp parallel for schedule(static)
        for (index_t j = k; j < n; ++j) {
            double* qj = q.col(j);
            const double t = tau[k] * dot(wk + k, qj + k, m - k);
            for (index_t i = k; i < m; ++i) qj[i] -= t * wk[i];
        }
    }
    return q;
}

TruncatedSvd oracle_svd(const DenseMatrix& c) {
    const index_t m = c.rows(), n = c.cols();
    if (std::min(m, n) > 2000)
        throw ShapeError("oracle_svd: reference path accepts min(rows, cols) <= 2000");
    if (m < n) {
        TruncatedSvd t = oracle_svd(transposed(c));
        return {std::move(t.v), std::move(t.s), std::move(t.u)};
    }
    if (n == 0) return {DenseMatrix(m, 0), {}, DenseMatrix(0, 0)};

    DenseMatrix w = c;
    DenseMatrix v(n, n);
    for (index_t j = 0; j < n; ++j) v(j, j) = 1.0;

    // Hestenes one-sided Jacobi: rotate column pairs until all are mutually
    // orthogonal relative to their norms.
    constexpr int kMaxSweeps = 60;
    constexpr double kOrthTol = 1e-14;
    std::vector<double> colsq(n, 0.0);
    for (index_t j = 0; j < n; ++j) colsq[j] = dot(w.col(j), w.col(j), m);

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (index_t i = 0; i + 1 < n; ++i) {
            for (index_t j = i + 1; j < n; ++j) {
                const double a = colsq[i], b = colsq[j];
                if (a == 0.0 || b == 0.0) continue;
                double* wi = w.col(i);
                double* wj = w.col(j);
                const double g = dot(wi, wj, m);
                if (std::abs(g) <= kOrthTol * std::sqrt(a * b)) continue;
                converged = false;
                const double zeta = (b - a) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (index_t r = 0; r < m; ++r) {
                    const double x = wi[r], y = wj[r];
                    wi[r] = cs * x - sn * y;
                    wj[r] = sn * x + cs * y;
                }
                double* vi = v.col(i);
                double* vj = v.col(j);
                for (index_t r = 0; r < n; ++r) {
                    const double x = vi[r], y = vj[r];
                    vi[r] = cs * x - sn * y;
                    vj[r] = sn * x + cs * y;
                }
                colsq[i] = dot(wi, wi, m);
                colsq[j] = dot(wj, wj, m);
            }
        }
    }
    if (!converged) throw NumericalError("oracle_svd: Jacobi sweeps did not converge");

    std::vector<index_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return colsq[a] > colsq[b]; });

    TruncatedSvd out;
    out.s.resize(n);
    out.u = DenseMatrix(m, n);
    out.v = DenseMatrix(n, n);
    const double sigma_max = std::sqrt(std::max(colsq[order[0]], 0.0));
    const double tiny = static_cast<double>(m) * kEps * sigma_max;
    index_t filled = 0;
    for (index_t r = 0; r < n; ++r) {
        const index_t src = order[r];
        const double sigma = std::sqrt(std::max(colsq[src], 0.0));
        std::copy(v.col(src), v.col(src) + n, out.v.col(r));
        if (sigma > tiny) {
            out.s[r] = sigma;
            const double inv = 1.0 / sigma;
            const double* wc = w.col(src);
            double* uc = out.u.col(r);
            for (index_t i = 0; i < m; ++i) uc[i] = wc[i] * inv;
            filled = r + 1;
        } else {
            out.s[r] = 0.0;
        }
    }

    // Orthonormal completion for (numerically) zero singular values, so U is
    // always a full set of orthonormal columns.
    index_t cand = 0;
    for (index_t r = filled; r < n; ++r) {
        out.s[r] = 0.0;
        double* uc = out.u.col(r);
        while (true) {
            if (cand >= m) throw NumericalError("oracle_svd: completion failed");
            std::fill(uc, uc + m, 0.0);
            uc[cand++] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (index_t q = 0; q < r; ++q) {
                    const double* uq = out.u.col(q);
                    const double proj = dot(uq, uc, m);
                    for (index_t i = 0; i < m; ++i) uc[i] -= proj * uq[i];
                }
            const double norm = std::sqrt(dot(uc, uc, m));
            if (norm > 0.5) {
                for (index_t i = 0; i < m; ++i) uc[i] /= norm;
                break;
            }
        }
    }

    apply_sign_convention(out.u, out.v);
    return out;
}

}  // namespace dashsvd
