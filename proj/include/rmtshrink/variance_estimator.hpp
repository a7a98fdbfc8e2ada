#ifndef RMTSHRINK_VARIANCE_ESTIMATOR_HPP
#define RMTSHRINK_VARIANCE_ESTIMATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>

namespace rmtshrink {

/// Noise scale chosen by minimizing the Kolmogorov-Smirnov distance between
/// the observed singular values and the sigma-scaled Marchenko-Pastur law.
struct SigmaEstimate {
    double sigma_hat = 0.0;
    double ks_value = 1.0;        // K(sigma_hat)
    std::size_t window_count = 0; // singular values inside the sigma_hat window
    std::size_t grid_size = 0;    // grid points evaluated
};

struct SigmaSearchOptions {
    std::size_t coarse_points = 512;
    std::size_t refine_points = 64;
};

/// Singular values inside the closed window [sigma |1 - sqrt c|, sigma (1 + sqrt c)].
std::size_t window_count(double sigma, std::span<const double> values, double c);

/// K(sigma) = max_i |F(s_i / sigma) - (i - 1/2) / N| + 1 / (2N) over the N
/// values s_1 <= ... <= s_N inside the window. Returns 1 when the window is
/// empty. `values` may be in any order.
double ks_objective(double sigma, std::span<const double> values, double c);

/// Grid minimizer of ks_objective over the sigma range where more than half of
/// the min(m, n) singular values fall in the window and sigma (1 + sqrt c) is
/// below twice the largest singular value. Throws InfeasibleSigma when that
/// range is empty.
SigmaEstimate estimate_sigma(std::span<const double> values, std::int64_t m, std::int64_t n,
                             const SigmaSearchOptions& options = {});

} // namespace rmtshrink

#endif // RMTSHRINK_VARIANCE_ESTIMATOR_HPP
