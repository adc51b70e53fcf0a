#include "dashsvd/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dashsvd/errors.hpp"

namespace dashsvd {

namespace {

void check_hypotheses(std::span<const double> sigma, const BoundParams& bp) {
    if (bp.j < 1 || bp.j >= bp.k)
        throw HypothesisError("bound needs 1 <= j < k, got j = " + std::to_string(bp.j));
    if (!(bp.beta > 1.0) || !(bp.gamma > 1.0))
        throw HypothesisError("bound needs beta > 1 and gamma > 1");
    if (bp.l <= bp.k) throw HypothesisError("bound needs sketch width l > k");
    if (bp.l > bp.n - bp.k) throw HypothesisError("bound needs l <= n - k");
    if (static_cast<std::int64_t>(sigma.size()) < bp.k + 1)
        throw HypothesisError("bound needs sigma_1..sigma_{k+1}");
}

double failure_probability(const BoundParams& bp) {
    const double lj = static_cast<double>(bp.l - bp.j + 1);
    const double nk = static_cast<double>(bp.n - bp.k);
    const double g2 = bp.gamma * bp.gamma;
    const double tail = 2.0 * g2 / std::exp(g2 - 1.0);
    const double t1 =
        1.0 / std::sqrt(2.0 * std::numbers::pi * lj) * std::pow(std::numbers::e / (lj * bp.beta), lj);
    const double t2 = 1.0 / (4.0 * bp.gamma * (g2 - 1.0)) *
                      (1.0 / std::sqrt(std::numbers::pi * nk) * std::pow(tail, nk) +
                       1.0 / std::sqrt(std::numbers::pi * static_cast<double>(bp.l)) *
                           std::pow(tail, static_cast<double>(bp.l)));
    return t1 + t2;
}

// bound = 2 sqrt((2 l^2 b^2 g^2 P1 + 1) sigma_{j+1}^2 + (2 l (n-k) b^2 g^2 P2 + 1) sigma_{k+1}^2)
// where P1 and P2 are the tail-contraction products supplied by the caller.
BoundValue assemble(std::span<const double> sigma, const BoundParams& bp, double p1, double p2) {
    const double phi = failure_probability(bp);
    if (!(phi <= 1.0)) throw HypothesisError("failure probability exceeds 1");
    const double sj1 = sigma[bp.j];      // sigma_{j+1}, 1-based notation
    const double sk1 = sigma[bp.k];      // sigma_{k+1}
    const double bg = bp.beta * bp.beta * bp.gamma * bp.gamma;
    const double l = static_cast<double>(bp.l);
    const double nk = static_cast<double>(bp.n - bp.k);
    const double inner = (2.0 * l * l * bg * p1 + 1.0) * sj1 * sj1 +
                         (2.0 * l * nk * bg * p2 + 1.0) * sk1 * sk1;
    return {2.0 * std::sqrt(inner), phi};
}

}  // namespace

BoundValue theorem1_bound(std::span<const double> sigma, const BoundParams& bp) {
    check_hypotheses(sigma, bp);
    const double sj2 = sigma[bp.j - 1] * sigma[bp.j - 1];  // sigma_j^2
    const double sj12 = sigma[bp.j] * sigma[bp.j];
    const double sk12 = sigma[bp.k] * sigma[bp.k];
    double p1 = 1.0, p2 = 1.0;  // empty shift sequence: no contraction
    for (double alpha : bp.alphas) {
        const double r1 = (sj12 - alpha) / (sj2 - alpha);
        const double r2 = (sk12 - alpha) / (sj2 - alpha);
        p1 *= r1 * r1;
        p2 *= r2 * r2;
    }
    return assemble(sigma, bp, p1, p2);
}

BoundValue lemma6_bound(std::span<const double> sigma, const BoundParams& bp) {
    check_hypotheses(sigma, bp);
    if (bp.p < 0) throw HypothesisError("power count must be non-negative");
    const double r1 = sigma[bp.j] / sigma[bp.j - 1];
    const double r2 = sigma[bp.k] / sigma[bp.j - 1];
    const double e = 4.0 * static_cast<double>(bp.p);
    return assemble(sigma, bp, std::pow(r1, e), std::pow(r2, e));
}

double flop_estimate(CostModel model, std::int64_t m, std::int64_t n, std::int64_t nnz,
                     std::int64_t l, std::int64_t k, std::int64_t p, const FlopConstants& c) {
    if (m < 0 || n < 0 || nnz < 0 || l < 1 || k < 1 || k > l || p < 0)
        throw ShapeError("flop_estimate: invalid sizes");
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    const double dz = static_cast<double>(nnz), dl = static_cast<double>(l);
    const double dk = static_cast<double>(k), dp = static_cast<double>(p);
    const double sketch = (2.0 * dp + 2.0) * c.c_mul * dz * dl;
    if (model == CostModel::basic)
        return sketch + (dp + 1.0) * c.c_qr * dm * dl * dl + c.c_svd * dn * dl * dl +
               c.c_mul * dm * dl * dk;
    return sketch + (dp + 1.0) * (2.0 * c.c_mul * dn * dl * dl + c.c_eig * dl * dl * dl) +
           2.0 * c.c_mul * dm * dl * dl + c.c_eig * dl * dl * dl + dp * c.c_mul * dn * dl +
           c.c_mul * dn * dl * dk;
}

}  // namespace dashsvd
