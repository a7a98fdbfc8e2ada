#include <rmtshrink/schemes.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmtshrink {

namespace {

void require_same_shape(const Svd& f, const Matrix& a, const char* what) {
    if (f.rows() != a.rows() || f.cols() != a.cols()) {
        throw ShapeMismatch(std::string(what) + ": signal and observation differ in shape");
    }
}

void require_same_shape(const Matrix& y, const Matrix& a, const char* what) {
    if (y.rows() != a.rows() || y.cols() != a.cols()) {
        throw ShapeMismatch(std::string(what) + ": signal and observation differ in shape");
    }
}

Reconstruction make(const Svd& f, Vector coefficients, const char* id) {
    Reconstruction r;
    r.a_hat = compose(coefficients, f);
    r.coefficients = std::move(coefficients);
    r.scheme_id = id;
    return r;
}

} // namespace

Index Reconstruction::detected_rank() const {
    return (coefficients.array() != 0.0).count();
}

Vector hard_threshold_coefficients(const Vector& values, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("hard threshold must be positive");
    return (values.array() >= lambda).select(values, 0.0);
}

Vector soft_threshold_coefficients(const Vector& values, double nu) {
    if (!(nu > 0.0)) throw InvalidArgument("soft threshold must be positive");
    return (values.array() - nu).max(0.0).matrix();
}

Vector projection_coefficients(const Svd& f, const Matrix& a) {
    require_same_shape(f, a, "projection_coefficients");
    const Eigen::MatrixXd av = a * f.right;
    return av.cwiseProduct(f.left).colwise().sum().transpose();
}

double loss_from_coefficients(double a_norm_sq, const Vector& projections, const Vector& coefficients) {
    if (projections.size() != coefficients.size()) {
        throw ShapeMismatch("loss_from_coefficients: coefficient and projection counts differ");
    }
    return a_norm_sq - 2.0 * coefficients.dot(projections) + coefficients.squaredNorm();
}

OracleChoice hard_oracle_search(const Vector& values, const Vector& projections, double a_norm_sq) {
    const Index k = values.size();
    if (projections.size() != k) {
        throw ShapeMismatch("hard_oracle_search: value and projection counts differ");
    }
    Index best_rank = 0;
    double best_loss = a_norm_sq;
    double running = a_norm_sq;
    for (Index r = 1; r <= k; ++r) {
        const double d = values(r - 1);
        running += d * d - 2.0 * d * projections(r - 1);
        // A threshold can only separate distinct, positive singular values.
        const bool realizable = d > 0.0 && (r == k || d > values(r));
        if (realizable && running < best_loss) {
            best_loss = running;
            best_rank = r;
        }
    }

    OracleChoice choice;
    if (best_rank == 0) {
        const double top = k > 0 ? values(0) : 0.0;
        choice.parameter = top > 0.0 ? std::nextafter(top, std::numeric_limits<double>::infinity()) : 1.0;
    } else {
        choice.parameter = values(best_rank - 1);
    }
    choice.coefficients = hard_threshold_coefficients(values, choice.parameter);
    choice.loss = loss_from_coefficients(a_norm_sq, projections, choice.coefficients);
    return choice;
}

OracleChoice soft_oracle_search(const Vector& values, const Vector& projections, double a_norm_sq) {
    const Index k = values.size();
    if (projections.size() != k) {
        throw ShapeMismatch("soft_oracle_search: value and projection counts differ");
    }
    auto coefficients_at = [&](double nu) -> Vector { return (values.array() - nu).max(0.0).matrix(); };

    OracleChoice best;
    best.parameter = k > 0 ? values(0) : 0.0;
    best.coefficients = Vector::Zero(k);
    best.loss = a_norm_sq;

    double sum_d = 0.0;
    double sum_p = 0.0;
    for (Index r = 1; r <= k; ++r) {
        // On [values(r), values(r - 1)] exactly the first r components are
        // active and the loss is a convex quadratic in nu.
        sum_d += values(r - 1);
        sum_p += projections(r - 1);
        const double hi = values(r - 1);
        const double lo = r < k ? values(r) : 0.0;
        const double nu = std::clamp((sum_d - sum_p) / static_cast<double>(r), lo, hi);
        Vector coefficients = coefficients_at(nu);
        const double piece_loss = loss_from_coefficients(a_norm_sq, projections, coefficients);
        if (piece_loss < best.loss || (piece_loss == best.loss && nu < best.parameter)) {
            best.parameter = nu;
            best.loss = piece_loss;
            best.coefficients = std::move(coefficients);
        }
    }
    return best;
}

std::vector<SpikeEstimate> rmt_spectrum(const Vector& values, Index m, Index n, double sigma) {
    if (m < 1 || n < 1) throw InvalidArgument("rmt_spectrum: dimensions must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("rmt_spectrum: sigma must be positive and finite");
    }
    const double c = static_cast<double>(m) / static_cast<double>(n);
    std::vector<SpikeEstimate> out;
    out.reserve(static_cast<std::size_t>(values.size()));
    for (Index j = 0; j < values.size(); ++j) {
        out.push_back(shrink_coefficient(values(j) / sigma, c));
    }
    return out;
}

Reconstruction hard_threshold(const Svd& f, double lambda) {
    auto r = make(f, hard_threshold_coefficients(f.values, lambda), scheme_id::hard);
    r.parameter = lambda;
    return r;
}

Reconstruction soft_threshold(const Svd& f, double nu) {
    auto r = make(f, soft_threshold_coefficients(f.values, nu), scheme_id::soft);
    r.parameter = nu;
    return r;
}

Reconstruction oracle_hard(const Svd& f, const Matrix& a) {
    const Vector p = projection_coefficients(f, a);
    auto choice = hard_oracle_search(f.values, p, frobenius_norm_sq(a));
    auto r = make(f, std::move(choice.coefficients), scheme_id::hard_oracle);
    r.parameter = choice.parameter;
    return r;
}

Reconstruction oracle_hard(const Matrix& y, const Matrix& a) {
    require_same_shape(y, a, "oracle_hard");
    return oracle_hard(svd(y), a);
}

Reconstruction oracle_soft(const Svd& f, const Matrix& a) {
    const Vector p = projection_coefficients(f, a);
    auto choice = soft_oracle_search(f.values, p, frobenius_norm_sq(a));
    auto r = make(f, std::move(choice.coefficients), scheme_id::soft_oracle);
    r.parameter = choice.parameter;
    return r;
}

Reconstruction oracle_soft(const Matrix& y, const Matrix& a) {
    require_same_shape(y, a, "oracle_soft");
    return oracle_soft(svd(y), a);
}

Reconstruction oracle_oi(const Svd& f, const Matrix& a) {
    return make(f, projection_coefficients(f, a), scheme_id::oi_oracle);
}

Reconstruction oracle_oi(const Matrix& y, const Matrix& a) {
    require_same_shape(y, a, "oracle_oi");
    return oracle_oi(svd(y), a);
}

Reconstruction rmt_known_sigma(const Svd& f, double sigma) {
    auto diagnostics = rmt_spectrum(f.values, f.rows(), f.cols(), sigma);
    Vector coefficients(f.size());
    for (Index j = 0; j < f.size(); ++j) {
        coefficients(j) = sigma * diagnostics[static_cast<std::size_t>(j)].coefficient;
    }
    auto r = make(f, std::move(coefficients), scheme_id::rmt_known);
    r.sigma_source = SigmaSource::known;
    r.sigma_used = sigma;
    r.diagnostics = std::move(diagnostics);
    return r;
}

Reconstruction rmt_known_sigma(const Matrix& y, double sigma) {
    return rmt_known_sigma(svd(y), sigma);
}

Reconstruction rmt_reconstruct(const Svd& f, const SigmaSearchOptions& options) {
    const SigmaEstimate estimate =
        estimate_sigma(std::span<const double>(f.values.data(), static_cast<std::size_t>(f.values.size())), f.rows(),
                       f.cols(), options);
    auto r = rmt_known_sigma(f, estimate.sigma_hat);
    r.scheme_id = scheme_id::rmt;
    r.sigma_source = SigmaSource::estimated;
    r.sigma_estimate = estimate;
    return r;
}

Reconstruction rmt_reconstruct(const Matrix& y, const SigmaSearchOptions& options) {
    return rmt_reconstruct(svd(y), options);
}

double loss(const Matrix& a, const Matrix& a_hat) {
    if (a.rows() != a_hat.rows() || a.cols() != a_hat.cols()) {
        throw ShapeMismatch("loss: signal and reconstruction differ in shape");
    }
    return (a_hat - a).squaredNorm();
}

} // namespace rmtshrink
