#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dashsvd/decompositions.hpp"
#include "dashsvd/sparse_matrix.hpp"

namespace dashsvd {

enum class ReferenceSource { oracle, file };

// Ground-truth singular values, descending. Metrics index it 1-based in the
// usual notation: sigmas[i-1] is sigma_i.
struct ReferenceSpectrum {
    std::vector<double> sigmas;
    ReferenceSource source = ReferenceSource::oracle;
};

// Densifies a and runs the Jacobi reference SVD; refuse matrices with
// min(rows, cols) > 2000 (ShapeError) — this path is for validation, not scale.
ReferenceSpectrum reference_from_oracle(const SparseMatrix& a);

// Plain text, one singular value per line, descending; blank lines and
// '#' comments ignored on read.
ReferenceSpectrum load_reference_spectrum(const std::string& path);
void write_reference_spectrum(const std::string& path, std::span<const double> sigmas);

// Per-vector error: worst relative disagreement between sigma_i^2 and the
// Rayleigh quotient of A A^T at the computed left vector, normalized by
// sigma_{k+1}^2. k is u_hat.cols(). Throws DegenerateReference if the
// reference is shorter than k+1 or sigma_{k+1} == 0.
double eps_pve(const SparseMatrix& a, const DenseMatrix& u_hat, const ReferenceSpectrum& ref);

// Worst relative residual max_i ||A^T u_i - s_i v_i|| / sigma_i over the
// computed triplets.
double eps_res(const SparseMatrix& a, const TruncatedSvd& approx, const ReferenceSpectrum& ref);

// Relative spectral-norm error (||A - U S V^T||_2 - sigma_{k+1}) / sigma_{k+1},
// with the residual norm estimated matrix-free by power iteration (a lower
// bound on the true norm, tightening as power_iters grows).
double eps_spec(const SparseMatrix& a, const TruncatedSvd& approx, const ReferenceSpectrum& ref,
                index_t power_iters = 300, std::uint64_t seed = 0x5eed);

// Worst relative singular value error over the leading k values.
double eps_sigma(std::span<const double> s_hat, const ReferenceSpectrum& ref);

// Matrix-free operator for norm estimation.
struct LinearOperator {
    index_t rows = 0;
    index_t cols = 0;
    // y = Op x and y = Op^T x; x and y never alias.
    std::function<void(const double* x, double* y)> apply;
    std::function<void(const double* x, double* y)> apply_t;
};

// Power iteration on Op^T Op from a seeded Gaussian start; returns ||Op v|| for
// the final unit v, hence never overestimates the spectral norm.
double spectral_norm_estimate(const LinearOperator& op, index_t iters, std::uint64_t seed);

// max_i ||A v_i - s_i u_i|| over the factor triplets; cheap self-diagnostic
// reported by the CLI after a run.
double max_triplet_residual(const SparseMatrix& a, const TruncatedSvd& approx);

}  // namespace dashsvd
