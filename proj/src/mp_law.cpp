#include <rmtshrink/mp_law.hpp>

#include <rmtshrink/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rmtshrink {

MpLaw::MpLaw(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("MpLaw: aspect ratio must be positive and finite, got " + std::to_string(c));
    }
    c_ = c;
    sqrt_c_ = std::sqrt(c);
    a_ = (1.0 - sqrt_c_) * (1.0 - sqrt_c_);
    b_ = (1.0 + sqrt_c_) * (1.0 + sqrt_c_);
}

MpLaw::Support MpLaw::support() const {
    return {std::abs(1.0 - sqrt_c_), 1.0 + sqrt_c_};
}

double MpLaw::density(double s) const {
    const auto [lo, hi] = support();
    if (s < lo || s > hi || s < 0.0) return 0.0;
    if (c_ == 1.0) {
        // Quarter circle; the s^{-1} factor cancels against s^2 - a = s^2.
        return std::sqrt(std::max(0.0, 4.0 - s * s)) / std::numbers::pi;
    }
    if (s == 0.0) return 0.0;
    const double s2 = s * s;
    const double radicand = std::max(0.0, (b_ - s2) * (s2 - a_));
    return std::sqrt(radicand) / (std::numbers::pi * std::min(c_, 1.0) * s);
}

double MpLaw::cdf(double x) const {
    const auto [lo, hi] = support();
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pi = std::numbers::pi;
    double value = 0.0;
    if (c_ == 1.0) {
        value = (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(x / 2.0)) / (2.0 * pi);
    } else {
        // Substituting t = s^2 and z = (t - (1 + c)) / (2 sqrt c) turns the
        // integrand into sqrt(1 - z^2) / (z + q), whose antiderivative is
        //   H(z) = sqrt(1 - z^2) + q asin z - sqrt(q^2 - 1) atan[(q z + 1) / sqrt((q^2 - 1)(1 - z^2))].
        // The arctan term tends to -pi/2 at z = -1 and +pi/2 at z = +1; atan2
        // takes those limits without special-casing.
        const double q = (1.0 + c_) / (2.0 * sqrt_c_);
        const double r = std::abs(1.0 - c_) / (2.0 * sqrt_c_); // sqrt(q^2 - 1)
        const double z = std::clamp((x * x - (1.0 + c_)) / (2.0 * sqrt_c_), -1.0, 1.0);
        const double root = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double h = root + q * std::asin(z) - r * std::atan2(q * z + 1.0, r * root);
        const double h_lower = -0.5 * pi * (q - r);
        value = sqrt_c_ / (pi * std::min(c_, 1.0)) * (h - h_lower);
    }
    return std::clamp(value, 0.0, 1.0);
}

double MpLaw::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("MpLaw::quantile: probability must lie in [0, 1]");
    }
    auto [lo, hi] = support();
    if (p == 0.0) return lo;
    if (p == 1.0) return hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace rmtshrink
