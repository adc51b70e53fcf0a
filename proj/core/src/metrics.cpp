#include "dashsvd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dashsvd/errors.hpp"
#include "dashsvd/random.hpp"
#include "dashsvd/synthetic.hpp"

namespace dashsvd {

namespace {

void require_sigmas(const ReferenceSpectrum& ref, index_t count) {
    if (static_cast<index_t>(ref.sigmas.size()) < count)
        throw DegenerateReference("reference provides " + std::to_string(ref.sigmas.size()) +
                                  " singular values, need " + std::to_string(count));
}

// y = A x, deterministic row-parallel sparse matrix-vector product.
void spmv(const SparseMatrix& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < a.rows; ++i) {
        double acc = 0.0;
        for (index_t p = a.offsets[i]; p < a.offsets[i + 1]; ++p)
            acc += a.values[p] * x[a.col_indices[p]];
        y[i] = acc;
    }
}

// y -= U diag(s) (W^T x) with U rows x k, W cols x k.
void subtract_low_rank(const DenseMatrix& u, std::span<const double> s, const DenseMatrix& w,
                       const double* x, double* y) {
    const index_t k = u.cols();
    std::vector<double> coef(k);
    for (index_t j = 0; j < k; ++j) {
        const double* wj = w.col(j);
        double acc = 0.0;
        for (index_t i = 0; i < w.rows(); ++i) acc += wj[i] * x[i];
        coef[j] = acc * s[j];
    }
    for (index_t j = 0; j < k; ++j) {
        const double* uj = u.col(j);
        const double c = coef[j];
        for (index_t i = 0; i < u.rows(); ++i) y[i] -= c * uj[i];
    }
}

double norm2(const double* x, index_t n) {
    double s = 0.0;
    for (index_t i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

}  // namespace

ReferenceSpectrum reference_from_oracle(const SparseMatrix& a) {
    if (std::min(a.rows, a.cols) > 2000)
        throw ShapeError("oracle reference accepts min(rows, cols) <= 2000");
    TruncatedSvd f = oracle_svd(to_dense(a));
    return {std::move(f.s), ReferenceSource::oracle};
}

ReferenceSpectrum load_reference_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    ReferenceSpectrum ref;
    ref.source = ReferenceSource::file;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ss(line);
        double v;
        if (!(ss >> v) || !std::isfinite(v) || v < 0.0)
            throw ParseError(lineno, "expected a non-negative singular value");
        if (!ref.sigmas.empty() && v > ref.sigmas.back() * (1.0 + 1e-12) + 1e-300)
            throw ParseError(lineno, "singular values must be non-increasing");
        ref.sigmas.push_back(v);
    }
    if (ref.sigmas.empty()) throw ParseError(lineno, "no singular values in file");
    return ref;
}

void write_reference_spectrum(const std::string& path, std::span<const double> sigmas) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot open " + path + " for writing");
    for (double s : sigmas) std::fprintf(f, "%.17g\n", s);
    if (std::fclose(f) != 0) throw Error("failed writing " + path);
}

double eps_pve(const SparseMatrix& a, const DenseMatrix& u_hat, const ReferenceSpectrum& ref) {
    if (u_hat.rows() != a.rows) throw ShapeError("eps_pve: U has wrong row count");
    const index_t k = u_hat.cols();
    if (k < 1) throw ShapeError("eps_pve: U has no columns");
    require_sigmas(ref, k + 1);
    const double denom = ref.sigmas[k] * ref.sigmas[k];
    if (denom == 0.0) throw DegenerateReference("sigma_{k+1} is zero");
    // u_i^T A A^T u_i == ||A^T u_i||^2; the reference value is sigma_i^2 because
    // the exact left vectors are AA^T eigenvectors.
    const DenseMatrix w = spmm(transpose(a), u_hat);
    double worst = 0.0;
    for (index_t i = 0; i < k; ++i) {
        const double q = norm2(w.col(i), w.rows());
        const double si = ref.sigmas[i];
        worst = std::max(worst, std::abs(si * si - q * q) / denom);
    }
    return worst;
}

double eps_res(const SparseMatrix& a, const TruncatedSvd& approx, const ReferenceSpectrum& ref) {
    if (approx.u.rows() != a.rows || approx.v.rows() != a.cols)
        throw ShapeError("eps_res: factor shapes do not match the matrix");
    const index_t k = approx.rank();
    require_sigmas(ref, k);
    DenseMatrix w = spmm(transpose(a), approx.u);  // column i: A^T u_i
    double worst = 0.0;
    for (index_t i = 0; i < k; ++i) {
        if (ref.sigmas[i] == 0.0) throw DegenerateReference("sigma_i is zero");
        double* wi = w.col(i);
        const double* vi = approx.v.col(i);
        for (index_t r = 0; r < w.rows(); ++r) wi[r] -= approx.s[i] * vi[r];
        worst = std::max(worst, norm2(wi, w.rows()) / ref.sigmas[i]);
    }
    return worst;
}

double eps_spec(const SparseMatrix& a, const TruncatedSvd& approx, const ReferenceSpectrum& ref,
                index_t power_iters, std::uint64_t seed) {
    if (approx.u.rows() != a.rows || approx.v.rows() != a.cols)
        throw ShapeError("eps_spec: factor shapes do not match the matrix");
    const index_t k = approx.rank();
    require_sigmas(ref, k + 1);
    const double sk1 = ref.sigmas[k];
    if (sk1 == 0.0) throw DegenerateReference("sigma_{k+1} is zero");

    const SparseMatrix at = transpose(a);
    LinearOperator op;
    op.rows = a.rows;
    op.cols = a.cols;
    op.apply = [&](const double* x, double* y) {
        spmv(a, x, y);
        subtract_low_rank(approx.u, approx.s, approx.v, x, y);
    };
    op.apply_t = [&](const double* x, double* y) {
        spmv(at, x, y);
        subtract_low_rank(approx.v, approx.s, approx.u, x, y);
    };
    const double norm = spectral_norm_estimate(op, power_iters, seed);
    return (norm - sk1) / sk1;
}

double eps_sigma(std::span<const double> s_hat, const ReferenceSpectrum& ref) {
    const index_t k = static_cast<index_t>(s_hat.size());
    if (k < 1) throw ShapeError("eps_sigma: no singular values supplied");
    require_sigmas(ref, k);
    double worst = 0.0;
    for (index_t i = 0; i < k; ++i) {
        if (ref.sigmas[i] == 0.0) throw DegenerateReference("sigma_i is zero");
        worst = std::max(worst, std::abs(ref.sigmas[i] - s_hat[i]) / ref.sigmas[i]);
    }
    return worst;
}

double spectral_norm_estimate(const LinearOperator& op, index_t iters, std::uint64_t seed) {
    if (op.rows < 1 || op.cols < 1) throw ShapeError("spectral_norm_estimate: empty operator");
    DenseMatrix v0 = gaussian_matrix(op.cols, 1, seed);
    std::vector<double> v(v0.data(), v0.data() + op.cols);
    std::vector<double> w(op.rows), z(op.cols);
    {
        const double nv = norm2(v.data(), op.cols);
        if (nv == 0.0) return 0.0;
        for (double& x : v) x /= nv;
    }
    for (index_t it = 0; it < iters; ++it) {
        op.apply(v.data(), w.data());
        op.apply_t(w.data(), z.data());
        const double nz = norm2(z.data(), op.cols);
        if (nz == 0.0) return 0.0;  // v in the null space: 0 is a valid lower bound
        for (index_t i = 0; i < op.cols; ++i) v[i] = z[i] / nz;
    }
    op.apply(v.data(), w.data());
    // ||Op v|| for unit v: a lower bound on the spectral norm by definition.
    return norm2(w.data(), op.rows);
}

double max_triplet_residual(const SparseMatrix& a, const TruncatedSvd& approx) {
    if (approx.u.rows() != a.rows || approx.v.rows() != a.cols)
        throw ShapeError("max_triplet_residual: factor shapes do not match the matrix");
    DenseMatrix av = spmm(a, approx.v);
    double worst = 0.0;
    for (index_t i = 0; i < approx.rank(); ++i) {
        double* ci = av.col(i);
        const double* ui = approx.u.col(i);
        for (index_t r = 0; r < av.rows(); ++r) ci[r] -= approx.s[i] * ui[r];
        worst = std::max(worst, norm2(ci, av.rows()));
    }
    return worst;
}

}  // namespace dashsvd
