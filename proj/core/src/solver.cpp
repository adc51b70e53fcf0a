#include "dashsvd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dashsvd/dense_kernels.hpp"
#include "dashsvd/errors.hpp"
#include "dashsvd/random.hpp"

namespace dashsvd {

void validate_config(const SolverConfig& cfg, index_t rows, index_t cols) {
    if (rows < 1 || cols < 1) throw ShapeError("solver needs a non-empty matrix");
    if (cfg.k < 1) throw ConfigError("k must be >= 1");
    const index_t s = cfg.effective_s(cfg.k);
    if (cfg.k + s > std::min(rows, cols))
        throw ConfigError("k + s = " + std::to_string(cfg.k + s) + " exceeds min(rows, cols) = " +
                          std::to_string(std::min(rows, cols)));
    if (cfg.alg == Algorithm::dash) {
        if (s < 1) throw ConfigError("the accuracy-controlled mode needs oversampling s >= 1");
        if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
        if (cfg.p_max < 1) throw ConfigError("p_max must be >= 1");
    } else {
        if (cfg.p < 0) throw ConfigError("fixed-power algorithms need p >= 0");
    }
    if (cfg.orth == Orthonormalizer::qr && cfg.alg != Algorithm::basic)
        throw ConfigError("the qr orthonormalizer applies to the basic algorithm only; "
                          "shifted iterations need the surrogate spectrum");
}

double update_shift(double alpha, double s_ll) {
    return s_ll > alpha ? (s_ll + alpha) / 2.0 : alpha;
}

bool pve_stop_check(std::span<const double> s_hat_prev, double alpha_prev,
                    std::span<const double> s_hat, double alpha, index_t k, double tol) {
    if (k < 1) throw ShapeError("pve_stop_check: k must be >= 1");
    if (static_cast<index_t>(s_hat_prev.size()) < k + 1 ||
        static_cast<index_t>(s_hat.size()) < k + 1)
        throw ShapeError("pve_stop_check: surrogate arrays must hold at least k+1 values");
    const double denom = s_hat[k] + alpha;
    for (index_t i = 0; i < k; ++i) {
        const double change = std::abs(s_hat_prev[i] + alpha_prev - s_hat[i] - alpha);
        if (!(change / denom <= tol)) return false;
    }
    return true;
}

namespace {

DenseMatrix head_cols(const DenseMatrix& a, index_t k) {
    DenseMatrix out(a.rows(), k);
    std::copy(a.col(0), a.col(0) + a.rows() * k, out.data());
    return out;
}

TruncatedSvd truncate(TruncatedSvd f, const DenseMatrix* row_basis, index_t k) {
    TruncatedSvd out;
    out.u = head_cols(f.u, k);
    out.s.assign(f.s.begin(), f.s.begin() + k);
    out.v = row_basis ? matmul(*row_basis, head_cols(f.v, k)) : head_cols(f.v, k);
    return out;
}

// Shifted power iteration on a row-space basis, shared by the fixed-count,
// frozen-shift and accuracy-controlled modes. Returns the final basis; the
// factor assembly is finalize_row_basis.
struct IterationOutcome {
    DenseMatrix q;
    ShiftTrace trace;
};

IterationOutcome run_shifted_iterations(const SparseMatrix& a, const SparseMatrix& at,
                                        const SolverConfig& cfg,
                                        const IterationObserver& observer) {
    const index_t l = cfg.sketch_width();
    const bool accuracy_controlled = cfg.alg == Algorithm::dash;
    const index_t max_iters = accuracy_controlled ? cfg.p_max : cfg.p;

    DenseMatrix q = eig_svd(spmm(at, gaussian_matrix(a.rows, l, cfg.seed))).u;

    IterationOutcome out;
    out.trace.stop_reason =
        accuracy_controlled ? StopReason::p_max_reached : StopReason::fixed_p;
    double alpha = 0.0;
    std::vector<double> s_stored(l, 0.0);
    double alpha_stored = 0.0;

    for (index_t j = 1; j <= max_iters; ++j) {
        DenseMatrix t = spmm(at, spmm(a, q));
        if (alpha != 0.0) add_scaled(t, -alpha, q);
        TruncatedSvd f = eig_svd(t);

        out.trace.alphas.push_back(alpha);
        out.trace.s_hat_history.push_back(f.s);
        out.trace.iterations = j;
        if (observer) observer(IterationState{j, alpha, f.s, q, f.u});

        const bool stop = accuracy_controlled &&
                          pve_stop_check(s_stored, alpha_stored, f.s, alpha, cfg.k, cfg.tol);
        q = std::move(f.u);
        if (stop) {
            out.trace.stop_reason = StopReason::tol_met;
            break;
        }
        if (cfg.alg != Algorithm::fixed_shift || j == 1)
            alpha = update_shift(alpha, f.s[l - 1]);
        s_stored = std::move(f.s);
        alpha_stored = alpha;
    }
    out.q = std::move(q);
    return out;
}

TruncatedSvd basic_core(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                        const IterationObserver& observer, ShiftTrace* trace) {
    const index_t l = cfg.sketch_width();
    auto orth = [&](DenseMatrix y, std::vector<double>* s_hat) {
        if (cfg.orth == Orthonormalizer::qr) return qr_orth(y);
        TruncatedSvd f = eig_svd(y);
        if (s_hat) *s_hat = std::move(f.s);
        return std::move(f.u);
    };

    DenseMatrix q = orth(spmm(a, gaussian_matrix(a.cols, l, cfg.seed)), nullptr);
    for (index_t j = 1; j <= cfg.p; ++j) {
        std::vector<double> s_hat;
        DenseMatrix next = orth(spmm(a, spmm(at, q)), &s_hat);
        if (trace) {
            trace->alphas.push_back(0.0);
            trace->s_hat_history.push_back(s_hat);
            trace->iterations = j;
        }
        if (observer) observer(IterationState{j, 0.0, s_hat, q, next});
        q = std::move(next);
    }
    return finalize_col_basis(at, q, cfg.k);
}

SolveResult solve_direct(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                         const IterationObserver& observer) {
    SolveResult r;
    if (cfg.alg == Algorithm::basic) {
        r.svd = basic_core(a, at, cfg, observer, &r.trace);
        r.trace.stop_reason = StopReason::fixed_p;
        return r;
    }
    IterationOutcome it = run_shifted_iterations(a, at, cfg, observer);
    r.svd = finalize_row_basis(a, it.q, cfg.k);
    r.trace = std::move(it.trace);
    return r;
}

}  // namespace

TruncatedSvd finalize_row_basis(const SparseMatrix& a, const DenseMatrix& q, index_t k) {
    if (q.rows() != a.cols) throw ShapeError("finalize_row_basis: basis does not match matrix");
    if (k < 1 || k > q.cols()) throw ShapeError("finalize_row_basis: k out of range");
    TruncatedSvd f = eig_svd(spmm(a, q));
    return truncate(std::move(f), &q, k);
}

TruncatedSvd finalize_col_basis(const SparseMatrix& at, const DenseMatrix& q, index_t k) {
    if (q.rows() != at.cols) throw ShapeError("finalize_col_basis: basis does not match matrix");
    if (k < 1 || k > q.cols()) throw ShapeError("finalize_col_basis: k out of range");
    // B = q^T A is l x n; factor B^T = A^T q, then swap roles.
    TruncatedSvd f = eig_svd(spmm(at, q));
    TruncatedSvd out;
    out.u = matmul(q, head_cols(f.v, k));
    out.s.assign(f.s.begin(), f.s.begin() + k);
    out.v = head_cols(f.u, k);
    return out;
}

TruncatedSvd basic_rsvd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                        const IterationObserver& observer) {
    SolverConfig c = cfg;
    c.alg = Algorithm::basic;
    validate_config(c, a.rows, a.cols);
    return basic_core(a, at, c, observer, nullptr);
}

TruncatedSvd basic_rsvd(const SparseMatrix& a, const SolverConfig& cfg) {
    return basic_rsvd(a, transpose(a), cfg);
}

SolveResult shifted_rsvd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                         const IterationObserver& observer) {
    SolverConfig c = cfg;
    if (c.alg != Algorithm::fixed_shift) c.alg = Algorithm::shifted;
    validate_config(c, a.rows, a.cols);
    return solve_direct(a, at, c, observer);
}

SolveResult shifted_rsvd(const SparseMatrix& a, const SolverConfig& cfg) {
    return shifted_rsvd(a, transpose(a), cfg);
}

SolveResult dash_svd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                     const IterationObserver& observer) {
    SolverConfig c = cfg;
    c.alg = Algorithm::dash;
    validate_config(c, a.rows, a.cols);
    return solve_direct(a, at, c, observer);
}

SolveResult dash_svd(const SparseMatrix& a, const SolverConfig& cfg) {
    return dash_svd(a, transpose(a), cfg);
}

SolveResult solve(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                  const IterationObserver& observer) {
    validate_config(cfg, a.rows, a.cols);
    if (a.rows < a.cols) {
        SolveResult r = solve_direct(at, a, cfg, observer);
        std::swap(r.svd.u, r.svd.v);
        return r;
    }
    return solve_direct(a, at, cfg, observer);
}

SolveResult solve(const SparseMatrix& a, const SolverConfig& cfg) {
    return solve(a, transpose(a), cfg);
}

}  // namespace dashsvd
