#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dashsvd {

// Parameters of the probabilistic spectral-norm bounds for the randomized
// range finder run on an n-column sketch of width l = k + s. j (1-based,
// j < k) selects which tail ratio the bound tracks; beta and gamma (> 1) are
// the slack factors that trade tightness for failure probability.
struct BoundParams {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::int64_t l = 0;
    std::int64_t j = 0;
    double beta = 2.0;
    double gamma = 2.0;
    std::int64_t p = 0;           // power count (unshifted bound)
    std::vector<double> alphas;   // shift sequence (shifted bound); size = power count
};

struct BoundValue {
    double bound = 0.0;  // high-probability upper bound on ||Q Q^T A - A||_2
    double phi = 0.0;    // failure probability
};

// Bound for the dynamically shifted iteration: each executed power iteration
// contracts the tail ratios by ((sigma_{j+1}^2 - alpha_c)/(sigma_j^2 - alpha_c))^2
// resp. the (k+1, j) pair. sigma holds reference singular values descending,
// 1-based in the usual notation (sigma[0] is sigma_1); at least k+1 entries.
// Throws HypothesisError when evaluated outside its hypotheses (j < 1, j >= k,
// beta <= 1, gamma <= 1, l <= k, l > n - k, or phi > 1).
BoundValue theorem1_bound(std::span<const double> sigma, const BoundParams& bp);

// Same bound for the unshifted iteration: power-iteration contraction
// (sigma_{j+1}/sigma_j)^{4p} resp. (sigma_{k+1}/sigma_j)^{4p}. With any valid
// shift sequence of the same length, theorem1_bound is never larger.
BoundValue lemma6_bound(std::span<const double> sigma, const BoundParams& bp);

// Weights for the floating-point cost model. Defaults are conventional
// constant factors for the dense kernels; tune to taste via the CLI.
struct FlopConstants {
    double c_mul = 2.0;
    double c_qr = 4.0;
    double c_svd = 22.0;
    double c_eig = 9.0;
};

enum class CostModel {
    basic,  // column-basis iteration: QR re-orthonormalization, final m x l SVD
    dash,   // row-basis iteration: Gram-eig re-orthonormalization, shift updates
};

// Flop-count estimate for one full run at the given sizes; m x n input with
// nnz stored entries, sketch width l, target rank k, p power iterations.
double flop_estimate(CostModel model, std::int64_t m, std::int64_t n, std::int64_t nnz,
                     std::int64_t l, std::int64_t k, std::int64_t p,
                     const FlopConstants& c = {});

}  // namespace dashsvd
