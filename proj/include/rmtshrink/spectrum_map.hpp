#ifndef RMTSHRINK_SPECTRUM_MAP_HPP
#define RMTSHRINK_SPECTRUM_MAP_HPP

#include <optional>

namespace rmtshrink {

// Asymptotic maps between signal and observed singular values for
// Y = A + n^{-1/2} W with aspect ratio c = m / n. Every function here works on
// noise-normalized (sigma = 1) values; callers divide by sigma first.

/// Per-singular-value estimate of the signal value, the two singular-vector
/// cosines and the resulting shrinkage coefficient.
struct SpikeEstimate {
    double lambda_y = 0.0;
    double lambda_a_hat = 0.0;
    double cos2_left = 0.0;
    double cos2_right = 0.0;
    double coefficient = 0.0;
    bool detected = false;
};

/// Phase-transition point c^{1/4} for signal singular values.
double signal_threshold(double c);
/// Upper edge 1 + sqrt(c) of the noise bulk.
double detection_threshold(double c);

/// Limit of lambda_j(Y) given lambda_j(A).
double forward_limit(double lambda_a, double c);

/// Positive root estimating lambda(A) from lambda(Y) > 1 + sqrt(c). Empty when
/// the discriminant is negative, which rounding can cause right at the gate.
std::optional<double> inverse_estimate(double lambda_y, double c);

/// Limit of <u_j(Y), u_j(A)>^2; requires lambda_a > c^{1/4}.
double cos2_left(double lambda_a, double c);
/// Limit of <v_j(Y), v_j(A)>^2; requires lambda_a > c^{1/4}.
double cos2_right(double lambda_a, double c);

/// Full estimate for one observed singular value. Values at or below
/// 1 + sqrt(c) are treated as noise and get a zero coefficient.
SpikeEstimate shrink_coefficient(double lambda_y, double c);

} // namespace rmtshrink

#endif // RMTSHRINK_SPECTRUM_MAP_HPP
