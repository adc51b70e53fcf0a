#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dashsvd/decompositions.hpp"
#include "dashsvd/sparse_matrix.hpp"

namespace dashsvd {

enum class Algorithm {
    basic,        // plain randomized subspace iteration, unshifted
    shifted,      // dynamically shifted power iteration, fixed power count
    fixed_shift,  // shift chosen after the first iteration, then frozen (comparison variant)
    dash,         // shifted iteration with the accuracy-control stop rule
};

enum class Orthonormalizer { eigsvd, qr };

struct SolverConfig {
    index_t k = 0;             // target rank, >= 1
    index_t s = -1;            // oversampling; negative means default max(1, k/2)
    index_t p = -1;            // power-iteration count (basic/shifted/fixed_shift)
    double tol = 1e-2;         // accuracy-control tolerance (dash)
    index_t p_max = 1000;      // iteration cap (dash)
    Algorithm alg = Algorithm::dash;
    Orthonormalizer orth = Orthonormalizer::eigsvd;  // basic only; the shifted
                                                     // family needs the surrogate
                                                     // spectrum eigsvd produces
    std::uint64_t seed = 0;
    bool deterministic = true;  // accepted for compatibility; every kernel in this
                                // library is thread-count invariant either way

    index_t effective_s(index_t k_) const { return s >= 0 ? s : (k_ / 2 > 0 ? k_ / 2 : 1); }
    index_t sketch_width() const { return k + effective_s(k); }
};

// Throws ConfigError/ShapeError if cfg cannot run on a rows x cols matrix:
// k < 1, k + s > min(rows, cols), s < 1 in dash mode, missing p in fixed-p
// modes, tol <= 0, p_max < 1, or qr orthonormalizer outside basic.
void validate_config(const SolverConfig& cfg, index_t rows, index_t cols);

enum class StopReason { fixed_p, tol_met, p_max_reached };

// Per-run iteration log. alphas[c] is the shift used inside iteration c+1's
// matrix product (alphas[0] == 0 always); s_hat_history[c] is the surrogate
// spectrum that iteration produced (descending, length l, on the scale of
// sigma^2 - alpha). iterations is the executed power-iteration count N_p.
struct ShiftTrace {
    std::vector<double> alphas;
    std::vector<std::vector<double>> s_hat_history;
    index_t iterations = 0;
    StopReason stop_reason = StopReason::fixed_p;
};

struct SolveResult {
    TruncatedSvd svd;
    ShiftTrace trace;
};

// Snapshot handed to the iteration observer after each power iteration's
// re-orthonormalization, before the stop check and shift update. q_before /
// q_after alias solver-owned buffers valid only during the callback.
struct IterationState {
    index_t iteration;              // 1-based completed-iteration count
    double alpha;                   // shift used in this iteration's product
    std::span<const double> s_hat;  // surrogate spectrum, descending, length l
    const DenseMatrix& q_before;
    const DenseMatrix& q_after;
};

using IterationObserver = std::function<void(const IterationState&)>;

// Shift update rule: the shift may only move up, halfway toward the smallest
// surrogate, and never past it. Pure.
double update_shift(double alpha, double s_ll);

// Accuracy-control stop rule: true when every one of the k leading surrogate
// values, compared on the unshifted scale against the previous iteration's
// stored pair, has moved by at most tol relative to the (k+1)-th surrogate.
// Arrays must hold at least k+1 entries (ShapeError otherwise). Pure.
bool pve_stop_check(std::span<const double> s_hat_prev, double alpha_prev,
                    std::span<const double> s_hat, double alpha, index_t k, double tol);

// Plain randomized SVD with unshifted power iteration, run verbatim on a as
// given: right Gaussian sketch, p re-orthonormalized passes of A A^T, then an
// economic SVD of the projected matrix.
TruncatedSvd basic_rsvd(const SparseMatrix& a, const SolverConfig& cfg);

// Shifted power iteration with a fixed power count. Iterates a basis of the
// row space (cols x l), so per-iteration dense work scales with the smaller
// dimension when rows >= cols.
SolveResult shifted_rsvd(const SparseMatrix& a, const SolverConfig& cfg);

// Shifted power iteration with the per-vector-error stop rule; runs until the
// surrogate spectrum stabilizes to tol or p_max iterations.
SolveResult dash_svd(const SparseMatrix& a, const SolverConfig& cfg);

// Entry point: validates cfg, canonicalizes orientation (rows < cols runs the
// selected algorithm on the transpose and swaps U/V; square and tall inputs
// run directly) and dispatches on cfg.alg.
SolveResult solve(const SparseMatrix& a, const SolverConfig& cfg);

// Overloads taking a precomputed transpose (at must equal transpose(a)) and an
// optional observer, for callers that reuse the pair across runs or instrument
// the iteration. The two-argument forms above transpose internally.
TruncatedSvd basic_rsvd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                        const IterationObserver& observer = {});
SolveResult shifted_rsvd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                         const IterationObserver& observer = {});
SolveResult dash_svd(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                     const IterationObserver& observer = {});
SolveResult solve(const SparseMatrix& a, const SparseMatrix& at, const SolverConfig& cfg,
                  const IterationObserver& observer = {});

// Finalization stages, exposed so instrumented runs can turn a recorded basis
// into factors exactly as the solvers do.
//
// For a row-space basis q (cols x l, the shifted family): B = A q, economic
// SVD of B, truncation to k, V = q * (right factor).
TruncatedSvd finalize_row_basis(const SparseMatrix& a, const DenseMatrix& q, index_t k);
// For a column-space basis q (rows x l, basic): factors of B = q^T A via the
// economic SVD of B^T = A^T q.
TruncatedSvd finalize_col_basis(const SparseMatrix& at, const DenseMatrix& q, index_t k);

}  // namespace dashsvd
