#include <rmtshrink/variance_estimator.hpp>

#include <rmtshrink/errors.hpp>
#include <rmtshrink/mp_law.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rmtshrink {

namespace {

// K(sigma) over an ascending sample, sharing one MpLaw across evaluations.
class KsObjective {
public:
    KsObjective(std::vector<double> ascending, double c)
        : values_(std::move(ascending)), law_(c), lower_factor_(law_.support().lower),
          upper_factor_(law_.support().upper) {}

    struct Window {
        std::size_t begin;
        std::size_t end;
        std::size_t size() const { return end - begin; }
    };

    Window window(double sigma) const {
        const auto first = std::lower_bound(values_.begin(), values_.end(), sigma * lower_factor_);
        const auto last = std::upper_bound(first, values_.end(), sigma * upper_factor_);
        return {static_cast<std::size_t>(first - values_.begin()), static_cast<std::size_t>(last - values_.begin())};
    }

    double operator()(double sigma) const { return evaluate(sigma, window(sigma)); }

    double evaluate(double sigma, Window w) const {
        const std::size_t count = w.size();
        if (count == 0) return 1.0;
        const double inv_count = 1.0 / static_cast<double>(count);
        double worst = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double model = law_.cdf(values_[w.begin + i] / sigma);
            const double empirical = (static_cast<double>(i) + 0.5) * inv_count;
            worst = std::max(worst, std::abs(model - empirical));
        }
        return worst + 0.5 * inv_count;
    }

    const std::vector<double>& values() const { return values_; }
    double upper_factor() const { return upper_factor_; }

private:
    std::vector<double> values_;
    MpLaw law_;
    double lower_factor_;
    double upper_factor_;
};

std::vector<double> sorted_copy(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    return out;
}

void require_valid_values(std::span<const double> values, const char* what) {
    for (const double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument(std::string(what) + ": singular values must be finite and non-negative");
        }
    }
}

} // namespace

std::size_t window_count(double sigma, std::span<const double> values, double c) {
    if (!(sigma > 0.0)) throw InvalidArgument("window_count: sigma must be positive");
    const MpLaw law(c);
    const auto [lo, hi] = law.support();
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double s) {
        return s >= sigma * lo && s <= sigma * hi;
    }));
}

double ks_objective(double sigma, std::span<const double> values, double c) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("ks_objective: sigma must be positive and finite");
    }
    if (values.empty()) {
        throw InvalidArgument("ks_objective: no singular values supplied");
    }
    require_valid_values(values, "ks_objective");
    const KsObjective objective(sorted_copy(values), c);
    return objective(sigma);
}

SigmaEstimate estimate_sigma(std::span<const double> values, std::int64_t m, std::int64_t n,
                             const SigmaSearchOptions& options) {
    if (m < 1 || n < 1) {
        throw InvalidArgument("estimate_sigma: dimensions must be positive");
    }
    const auto k = static_cast<std::size_t>(std::min(m, n));
    if (values.size() != k) {
        throw InvalidArgument("estimate_sigma: expected min(m, n) = " + std::to_string(k) + " singular values, got " +
                              std::to_string(values.size()));
    }
    if (k < 8) {
        throw InvalidArgument("estimate_sigma: at least 8 singular values are required");
    }
    if (options.coarse_points < 2) {
        throw InvalidArgument("estimate_sigma: coarse grid needs at least 2 points");
    }
    require_valid_values(values, "estimate_sigma");

    const double c = static_cast<double>(m) / static_cast<double>(n);
    const KsObjective objective(sorted_copy(values), c);
    const auto& sorted = objective.values();
    const double largest = sorted.back();
    if (!(largest > 0.0)) {
        throw InfeasibleSigma("estimate_sigma: all singular values are zero");
    }

    auto feasible = [&](std::size_t count) { return 2 * count > k; };
    const double sigma_upper = 2.0 * largest / objective.upper_factor(); // open end

    // The window count only grows when its upper edge reaches a value, so the
    // smallest feasible sigma is one of the entry points s_i / (1 + sqrt c).
    double sigma_lower = 0.0;
    for (const double s : sorted) {
        if (!(s > 0.0)) continue;
        const double candidate = s / objective.upper_factor();
        if (!(candidate < sigma_upper)) break;
        if (feasible(objective.window(candidate).size())) {
            sigma_lower = candidate;
            break;
        }
    }
    if (!(sigma_lower > 0.0)) {
        throw InfeasibleSigma(
            "estimate_sigma: no noise scale places more than half of the singular values inside the "
            "Marchenko-Pastur window; the spectrum is inconsistent with the noise model");
    }

    struct Best {
        double sigma = 0.0;
        double ks = std::numeric_limits<double>::infinity();
        std::size_t count = 0;
    } best;
    std::size_t evaluated = 0;

    auto consider = [&](double sigma) -> bool {
        ++evaluated;
        const auto w = objective.window(sigma);
        if (!feasible(w.size())) return false;
        const double ks = objective.evaluate(sigma, w);
        if (ks < best.ks || (ks == best.ks && sigma < best.sigma)) {
            best = {sigma, ks, w.size()};
            return true;
        }
        return false;
    };

    const std::size_t coarse = options.coarse_points;
    const double ratio = sigma_upper / sigma_lower;
    std::vector<double> grid(coarse);
    for (std::size_t g = 0; g < coarse; ++g) {
        grid[g] = g == 0 ? sigma_lower
                         : sigma_lower * std::pow(ratio, static_cast<double>(g) / static_cast<double>(coarse));
    }
    std::size_t incumbent = 0;
    for (std::size_t g = 0; g < coarse; ++g) {
        if (consider(grid[g])) incumbent = g;
    }

    if (options.refine_points > 0) {
        const double left = grid[incumbent == 0 ? 0 : incumbent - 1];
        const double right = incumbent + 1 < coarse ? grid[incumbent + 1] : sigma_upper;
        const double span_ratio = right / left;
        const auto refine = static_cast<double>(options.refine_points);
        for (std::size_t t = 0; t < options.refine_points; ++t) {
            consider(left * std::pow(span_ratio, static_cast<double>(t) / refine));
        }
    }

    return {best.sigma, best.ks, best.count, evaluated};
}

} // namespace rmtshrink
