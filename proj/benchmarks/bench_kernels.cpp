// Microbenchmarks for the kernels that dominate solver runtime, plus one
// end-to-end accuracy-controlled run. Not part of the test suite.

#include <benchmark/benchmark.h>

#include "dashsvd/decompositions.hpp"
#include "dashsvd/dense_kernels.hpp"
#include "dashsvd/random.hpp"
#include "dashsvd/solver.hpp"
#include "dashsvd/sparse_matrix.hpp"
#include "dashsvd/synthetic.hpp"

namespace {

using namespace dashsvd;

const SparseMatrix& bench_sparse() {
    static SparseMatrix a = sparse_random(20000, 10000, 10, 1, /*row_decay=*/true);
    return a;
}

void BM_spmm(benchmark::State& state) {
    const SparseMatrix& a = bench_sparse();
    const DenseMatrix x = gaussian_matrix(a.cols, 64, 7);
    for (auto _ : state) {
        DenseMatrix y = spmm(a, x);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * a.nnz() * 64);
}
BENCHMARK(BM_spmm);

void BM_gram(benchmark::State& state) {
    const DenseMatrix x = gaussian_matrix(10000, 128, 3);
    for (auto _ : state) {
        DenseMatrix g = gram(x);
        benchmark::DoNotOptimize(g.data());
    }
    state.SetItemsProcessed(state.iterations() * 10000 * 128 * 128 / 2);
}
BENCHMARK(BM_gram);

void BM_eig_svd(benchmark::State& state) {
    const DenseMatrix x = gaussian_matrix(2000, 150, 5);
    for (auto _ : state) {
        TruncatedSvd f = eig_svd(x);
        benchmark::DoNotOptimize(f.u.data());
    }
}
BENCHMARK(BM_eig_svd);

// One shifted power iteration: Y = A Q, T = A^T Y - alpha Q, Q' = orth(T).
void BM_shifted_iteration(benchmark::State& state) {
    const SparseMatrix& a = bench_sparse();
    const SparseMatrix at = transpose(a);
    const DenseMatrix q0 = eig_svd(gaussian_matrix(a.cols, 96, 11)).u;
    const double alpha = 0.1;
    for (auto _ : state) {
        DenseMatrix y = spmm(a, q0);
        DenseMatrix t = spmm(at, y);
        add_scaled(t, -alpha, q0);
        TruncatedSvd f = eig_svd(t);
        benchmark::DoNotOptimize(f.u.data());
    }
}
BENCHMARK(BM_shifted_iteration);

void BM_dash_end_to_end(benchmark::State& state) {
    const SparseMatrix a = dense2_matrix(300, 0);
    SolverConfig cfg;
    cfg.alg = Algorithm::dash;
    cfg.k = 20;
    cfg.s = 10;
    cfg.tol = 1e-2;
    cfg.seed = 1;
    for (auto _ : state) {
        SolveResult r = solve(a, cfg);
        benchmark::DoNotOptimize(r.svd.s.data());
    }
}
BENCHMARK(BM_dash_end_to_end);

}  // namespace

BENCHMARK_MAIN();
