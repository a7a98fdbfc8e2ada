#include <rmtshrink/spectrum_map.hpp>

#include <rmtshrink/errors.hpp>

#include <cmath>

namespace rmtshrink {

namespace {

void require_aspect(double c, const char* what) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument(std::string(what) + ": aspect ratio must be positive and finite");
    }
}

void require_above_threshold(double lambda_a, double c, const char* what) {
    require_aspect(c, what);
    if (!(lambda_a > signal_threshold(c))) {
        throw InvalidArgument(std::string(what) + ": signal value must exceed c^{1/4}");
    }
}

} // namespace

double signal_threshold(double c) {
    return std::sqrt(std::sqrt(c));
}

double detection_threshold(double c) {
    return 1.0 + std::sqrt(c);
}

double forward_limit(double lambda_a, double c) {
    require_aspect(c, "forward_limit");
    if (!(lambda_a >= 0.0)) {
        throw InvalidArgument("forward_limit: signal value must be non-negative");
    }
    if (lambda_a <= signal_threshold(c)) return detection_threshold(c);
    const double l2 = lambda_a * lambda_a;
    return std::sqrt(1.0 + l2 + c + c / l2);
}

std::optional<double> inverse_estimate(double lambda_y, double c) {
    require_aspect(c, "inverse_estimate");
    if (!(lambda_y > detection_threshold(c))) {
        throw InvalidArgument("inverse_estimate: observed value must exceed 1 + sqrt(c)");
    }
    const double shifted = lambda_y * lambda_y - (1.0 + c);
    const double discriminant = shifted * shifted - 4.0 * c;
    if (discriminant < 0.0) return std::nullopt;
    return std::sqrt(0.5 * (shifted + std::sqrt(discriminant)));
}

double cos2_left(double lambda_a, double c) {
    require_above_threshold(lambda_a, c, "cos2_left");
    const double l2 = lambda_a * lambda_a;
    return (1.0 - c / (l2 * l2)) / (1.0 + c / l2);
}

double cos2_right(double lambda_a, double c) {
    require_above_threshold(lambda_a, c, "cos2_right");
    const double l2 = lambda_a * lambda_a;
    return (1.0 - c / (l2 * l2)) / (1.0 + 1.0 / l2);
}

SpikeEstimate shrink_coefficient(double lambda_y, double c) {
    require_aspect(c, "shrink_coefficient");
    if (!(lambda_y >= 0.0) || !std::isfinite(lambda_y)) {
        throw InvalidArgument("shrink_coefficient: observed value must be finite and non-negative");
    }
    SpikeEstimate est;
    est.lambda_y = lambda_y;
    if (!(lambda_y > detection_threshold(c))) return est;

    const auto lambda_a = inverse_estimate(lambda_y, c);
    if (!lambda_a || !(*lambda_a > signal_threshold(c))) return est;

    est.detected = true;
    est.lambda_a_hat = *lambda_a;
    est.cos2_left = cos2_left(*lambda_a, c);
    est.cos2_right = cos2_right(*lambda_a, c);
    est.coefficient = *lambda_a * std::sqrt(est.cos2_left * est.cos2_right);
    return est;
}

} // namespace rmtshrink
