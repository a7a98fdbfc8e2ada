#ifndef RMTSHRINK_SCHEMES_HPP
#define RMTSHRINK_SCHEMES_HPP

#include <rmtshrink/linalg.hpp>
#include <rmtshrink/spectrum_map.hpp>
#include <rmtshrink/variance_estimator.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rmtshrink {

// Every scheme here is orthogonally invariant: it keeps the singular vectors
// of Y and only replaces the singular values,
//     A_hat = sum_j c_j u_j(Y) v_j(Y)'.
// Observations follow Y = A + (sigma / sqrt(n)) W.

namespace scheme_id {
inline constexpr const char* hard = "hard";
inline constexpr const char* soft = "soft";
inline constexpr const char* hard_oracle = "hard_oracle";
inline constexpr const char* soft_oracle = "soft_oracle";
inline constexpr const char* oi_oracle = "oi_oracle";
inline constexpr const char* rmt_known = "rmt_known";
inline constexpr const char* rmt = "rmt";
} // namespace scheme_id

enum class SigmaSource {
    none,      // thresholding and oracle schemes never look at sigma
    known,     // supplied by the caller
    estimated, // Kolmogorov-Smirnov estimate from the spectrum of Y
};

struct Reconstruction {
    Matrix a_hat;
    Vector coefficients;
    std::string scheme_id;
    SigmaSource sigma_source = SigmaSource::none;
    double sigma_used = 0.0;
    std::optional<double> parameter;           // threshold lambda or nu
    std::vector<SpikeEstimate> diagnostics;    // RMT schemes only, on sigma-normalized values
    std::optional<SigmaEstimate> sigma_estimate;

    /// Number of non-zero coefficients.
    Index detected_rank() const;
};

// Coefficient-level rules. These act on singular values alone and are what
// the matrix-level schemes below apply.

Vector hard_threshold_coefficients(const Vector& values, double lambda);
Vector soft_threshold_coefficients(const Vector& values, double nu);

/// c_j = <A, u_j v_j'> = u_j' A v_j.
Vector projection_coefficients(const Svd& f, const Matrix& a);

/// ||A - sum_j c_j u_j v_j'||_F^2 expanded in the orthonormal basis {u_j v_j'}:
/// ||A||^2 - 2 sum_j c_j p_j + sum_j c_j^2, with p the projection coefficients.
double loss_from_coefficients(double a_norm_sq, const Vector& projections, const Vector& coefficients);

struct OracleChoice {
    double parameter = 0.0;
    double loss = 0.0;
    Vector coefficients;
};

/// Exact best hard threshold: the loss is piecewise constant in lambda, so
/// only the truncations between distinct singular values are compared. Ties
/// go to the smaller rank.
OracleChoice hard_oracle_search(const Vector& values, const Vector& projections, double a_norm_sq);

/// Exact best soft threshold over nu >= 0: the loss is quadratic in nu between
/// consecutive singular values, so each piece is minimized in closed form.
/// Ties go to the smaller nu.
OracleChoice soft_oracle_search(const Vector& values, const Vector& projections, double a_norm_sq);

/// RMT coefficients sigma * c(lambda_j / sigma) for aspect ratio m / n, with
/// the per-component diagnostics on the normalized scale.
std::vector<SpikeEstimate> rmt_spectrum(const Vector& values, Index m, Index n, double sigma);

// Matrix-level schemes.

Reconstruction hard_threshold(const Svd& f, double lambda);
Reconstruction soft_threshold(const Svd& f, double nu);

Reconstruction oracle_hard(const Svd& f, const Matrix& a);
Reconstruction oracle_hard(const Matrix& y, const Matrix& a);
Reconstruction oracle_soft(const Svd& f, const Matrix& a);
Reconstruction oracle_soft(const Matrix& y, const Matrix& a);
Reconstruction oracle_oi(const Svd& f, const Matrix& a);
Reconstruction oracle_oi(const Matrix& y, const Matrix& a);

/// RMT shrinkage with the noise scale given (sigma = 1 is the unit model).
Reconstruction rmt_known_sigma(const Svd& f, double sigma = 1.0);
Reconstruction rmt_known_sigma(const Matrix& y, double sigma = 1.0);

/// RMT shrinkage with sigma estimated from the spectrum of Y:
/// sigma_hat * G(Y / sigma_hat).
Reconstruction rmt_reconstruct(const Svd& f, const SigmaSearchOptions& options = {});
Reconstruction rmt_reconstruct(const Matrix& y, const SigmaSearchOptions& options = {});

/// ||A_hat - A||_F^2.
double loss(const Matrix& a, const Matrix& a_hat);

} // namespace rmtshrink

#endif // RMTSHRINK_SCHEMES_HPP
