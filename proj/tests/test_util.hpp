#pragma once

// Shared helpers for the test suite. The dense/sparse reference kernels here
// are written as plain loops, independent of the library's blocked kernels,
// so they can serve as oracles for them.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dashsvd/decompositions.hpp"
#include "dashsvd/dense_matrix.hpp"
#include "dashsvd/metrics.hpp"
#include "dashsvd/sparse_matrix.hpp"
#include "dashsvd/threads.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class ScratchDir {
  public:
    ScratchDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        dir_ = base / ("dashsvd_test_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(dir_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

  private:
    std::filesystem::path dir_;
};

// Restores the default thread count when a test that changes it exits.
struct ThreadGuard {
    ~ThreadGuard() { dashsvd::set_thread_count(0); }
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Row-major brace construction: dense({{1, 2}, {3, 4}}) is [[1,2],[3,4]].
inline dashsvd::DenseMatrix dense(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<dashsvd::index_t>(rows.size());
    const auto c = static_cast<dashsvd::index_t>(rows.begin()->size());
    dashsvd::DenseMatrix m(r, c);
    dashsvd::index_t i = 0;
    for (const auto& row : rows) {
        dashsvd::index_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline dashsvd::DenseMatrix identity(dashsvd::index_t n) {
    dashsvd::DenseMatrix m(n, n);
    for (dashsvd::index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

inline dashsvd::DenseMatrix diag_dense(std::span<const double> d, dashsvd::index_t rows,
                                       dashsvd::index_t cols) {
    dashsvd::DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < d.size(); ++i)
        m(static_cast<dashsvd::index_t>(i), static_cast<dashsvd::index_t>(i)) = d[i];
    return m;
}

// Plain triple-loop product, the reference for the blocked kernels.
inline dashsvd::DenseMatrix naive_matmul(const dashsvd::DenseMatrix& a,
                                         const dashsvd::DenseMatrix& b) {
    dashsvd::DenseMatrix c(a.rows(), b.cols());
    for (dashsvd::index_t i = 0; i < a.rows(); ++i)
        for (dashsvd::index_t j = 0; j < b.cols(); ++j) {
            double sum = 0.0;
            for (dashsvd::index_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
            c(i, j) = sum;
        }
    return c;
}

inline dashsvd::DenseMatrix naive_transpose(const dashsvd::DenseMatrix& a) {
    dashsvd::DenseMatrix t(a.cols(), a.rows());
    for (dashsvd::index_t i = 0; i < a.rows(); ++i)
        for (dashsvd::index_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

// Plain row-walk sparse product, the reference for the packed kernel.
inline dashsvd::DenseMatrix naive_spmm(const dashsvd::SparseMatrix& a,
                                       const dashsvd::DenseMatrix& x) {
    dashsvd::DenseMatrix y(a.rows, x.cols());
    for (dashsvd::index_t i = 0; i < a.rows; ++i)
        for (dashsvd::index_t p = a.offsets[i]; p < a.offsets[i + 1]; ++p)
            for (dashsvd::index_t j = 0; j < x.cols(); ++j)
                y(i, j) += a.values[p] * x(a.col_indices[p], j);
    return y;
}

inline double max_abs_diff(const dashsvd::DenseMatrix& a, const dashsvd::DenseMatrix& b) {
    double worst = 0.0;
    for (dashsvd::index_t e = 0; e < a.size(); ++e)
        worst = std::max(worst, std::abs(a.data()[e] - b.data()[e]));
    return worst;
}

inline bool bitwise_equal(const dashsvd::DenseMatrix& a, const dashsvd::DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

inline bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

inline double naive_max_abs(const dashsvd::DenseMatrix& a) {
    double worst = 0.0;
    for (dashsvd::index_t e = 0; e < a.size(); ++e)
        worst = std::max(worst, std::abs(a.data()[e]));
    return worst;
}

// max |Q^T Q - I|, via the naive product.
inline double orthonormality_error(const dashsvd::DenseMatrix& q) {
    dashsvd::DenseMatrix g = naive_matmul(naive_transpose(q), q);
    for (dashsvd::index_t j = 0; j < g.cols(); ++j) g(j, j) -= 1.0;
    return naive_max_abs(g);
}

// max_j min(||a_j - b_j||_inf, ||a_j + b_j||_inf): column agreement up to sign.
inline double column_diff_up_to_sign(const dashsvd::DenseMatrix& a,
                                     const dashsvd::DenseMatrix& b) {
    double worst = 0.0;
    for (dashsvd::index_t j = 0; j < a.cols(); ++j) {
        double plus = 0.0, minus = 0.0;
        for (dashsvd::index_t i = 0; i < a.rows(); ++i) {
            plus = std::max(plus, std::abs(a(i, j) - b(i, j)));
            minus = std::max(minus, std::abs(a(i, j) + b(i, j)));
        }
        worst = std::max(worst, std::min(plus, minus));
    }
    return worst;
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
    return worst;
}

inline dashsvd::ReferenceSpectrum ref_from(std::vector<double> sigmas) {
    return {std::move(sigmas), dashsvd::ReferenceSource::file};
}

// Wrap a dense matrix as a matrix-free operator using the naive kernels.
inline dashsvd::LinearOperator dense_operator(const dashsvd::DenseMatrix& a) {
    dashsvd::LinearOperator op;
    op.rows = a.rows();
    op.cols = a.cols();
    op.apply = [&a](const double* x, double* y) {
        for (dashsvd::index_t i = 0; i < a.rows(); ++i) {
            double sum = 0.0;
            for (dashsvd::index_t j = 0; j < a.cols(); ++j) sum += a(i, j) * x[j];
            y[i] = sum;
        }
    };
    op.apply_t = [&a](const double* x, double* y) {
        for (dashsvd::index_t j = 0; j < a.cols(); ++j) {
            double sum = 0.0;
            for (dashsvd::index_t i = 0; i < a.rows(); ++i) sum += a(i, j) * x[i];
            y[j] = sum;
        }
    };
    return op;
}

}  // namespace testutil
