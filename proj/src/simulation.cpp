#include <rmtshrink/simulation.hpp>

#include <rmtshrink/random.hpp>
#include <rmtshrink/schemes.hpp>
#include <rmtshrink/variance_estimator.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace rmtshrink {

namespace {

struct ProfileInfo {
    Profile profile;
    std::string_view name;
    double ratio; // geometric decay, 0 for the non-geometric profiles
};

constexpr ProfileInfo kProfileTable[] = {
    {Profile::equal, "equal", 0.0},          {Profile::linear_to_zero, "linear-to-zero", 0.0},
    {Profile::linear_to_half, "linear-to-half", 0.0}, {Profile::exp_0_5, "exp-0.5", 0.5},
    {Profile::exp_0_7, "exp-0.7", 0.7},      {Profile::exp_0_9, "exp-0.9", 0.9},
    {Profile::exp_0_95, "exp-0.95", 0.95},   {Profile::exp_0_99, "exp-0.99", 0.99},
};

const ProfileInfo& info(Profile p) {
    for (const auto& entry : kProfileTable) {
        if (entry.profile == p) return entry;
    }
    throw InvalidArgument("unknown signal profile");
}

// p_j = u_j' A v_j for the diagonal signal, touching only its non-zero rows.
Vector diagonal_projections(const Svd& f, const Vector& diagonal) {
    Vector p = Vector::Zero(f.size());
    for (Index i = 0; i < diagonal.size(); ++i) {
        p += diagonal(i) * f.left.row(i).cwiseProduct(f.right.row(i)).transpose();
    }
    return p;
}

} // namespace

std::string_view profile_name(Profile p) {
    return info(p).name;
}

Profile parse_profile(std::string_view name) {
    for (const auto& entry : kProfileTable) {
        if (entry.name == name) return entry.profile;
    }
    throw InvalidArgument("unknown signal profile '" + std::string(name) + "'");
}

std::string_view scheme_key(Scheme s) {
    switch (s) {
    case Scheme::soft_oracle:
        return scheme_id::soft_oracle;
    case Scheme::hard_oracle:
        return scheme_id::hard_oracle;
    case Scheme::rmt:
        return scheme_id::rmt;
    case Scheme::oi_oracle:
        return scheme_id::oi_oracle;
    }
    throw InvalidArgument("unknown scheme");
}

void validate(const SignalSpec& spec) {
    if (spec.m < 1 || spec.n < 1) {
        throw InvalidArgument("signal dimensions must be positive");
    }
    if (spec.rank < 1 || 10 * spec.rank > std::min(spec.m, spec.n)) {
        throw InvalidArgument("signal rank must lie in [1, min(m, n) / 10], got " + std::to_string(spec.rank));
    }
    if (!(spec.lambda_max > 0.0) || !std::isfinite(spec.lambda_max)) {
        throw InvalidArgument("largest signal singular value must be positive and finite");
    }
    info(spec.profile);
}

Vector signal_values(const SignalSpec& spec) {
    validate(spec);
    const Index r = spec.rank;
    const double top = spec.lambda_max;
    Vector values(r);
    for (Index j = 0; j < r; ++j) {
        const auto jd = static_cast<double>(j); // j - 1 in one-based terms
        switch (spec.profile) {
        case Profile::equal:
            values(j) = top;
            break;
        case Profile::linear_to_zero:
            values(j) = top * static_cast<double>(r - j) / static_cast<double>(r);
            break;
        case Profile::linear_to_half:
            values(j) = r == 1 ? top : top * (1.0 - jd / (2.0 * static_cast<double>(r - 1)));
            break;
        default:
            values(j) = top * std::pow(info(spec.profile).ratio, jd);
            break;
        }
    }
    return values;
}

Matrix generate_signal(const SignalSpec& spec) {
    const Vector values = signal_values(spec);
    Matrix a = Matrix::Zero(spec.m, spec.n);
    for (Index j = 0; j < values.size(); ++j) a(j, j) = values(j);
    return a;
}

TrialReport run_trial(const SignalSpec& spec, std::uint64_t master_seed, std::uint64_t trial_index,
                      std::span<const Scheme> schemes) {
    const Vector signal = signal_values(spec);
    TrialReport report;
    report.spec = spec;
    report.master_seed = master_seed;
    report.trial_index = trial_index;

    RngStream stream = RngStream::for_trial(master_seed, trial_index);
    Matrix y = random_gaussian(spec.m, spec.n, stream) / std::sqrt(static_cast<double>(spec.n));
    for (Index j = 0; j < signal.size(); ++j) y(j, j) += signal(j);

    const Svd f = svd(y);
    const Vector p = diagonal_projections(f, signal);
    const double a_norm_sq = signal.squaredNorm();

    // Pythagoras in the orthonormal basis {u_j v_j'}: every coefficient
    // scheme loses the projection residual plus its distance from p.
    const double oi_loss = std::max(0.0, a_norm_sq - p.squaredNorm());
    auto loss_of = [&](const Vector& coefficients) { return oi_loss + (coefficients - p).squaredNorm(); };

    const std::string oi_key(scheme_key(Scheme::oi_oracle));
    report.losses[oi_key] = oi_loss;

    for (const Scheme s : schemes) {
        const std::string key(scheme_key(s));
        switch (s) {
        case Scheme::oi_oracle:
            break;
        case Scheme::soft_oracle:
            report.losses[key] = loss_of(soft_oracle_search(f.values, p, a_norm_sq).coefficients);
            break;
        case Scheme::hard_oracle:
            report.losses[key] = loss_of(hard_oracle_search(f.values, p, a_norm_sq).coefficients);
            break;
        case Scheme::rmt:
            try {
                const auto estimate = estimate_sigma(
                    std::span<const double>(f.values.data(), static_cast<std::size_t>(f.size())), spec.m, spec.n);
                const auto spikes = rmt_spectrum(f.values, spec.m, spec.n, estimate.sigma_hat);
                Vector coefficients(f.size());
                Index detected = 0;
                for (Index j = 0; j < f.size(); ++j) {
                    const auto& spike = spikes[static_cast<std::size_t>(j)];
                    coefficients(j) = estimate.sigma_hat * spike.coefficient;
                    if (spike.detected) ++detected;
                }
                report.sigma_hat = estimate.sigma_hat;
                report.rmt_rank = detected;
                report.losses[key] = loss_of(coefficients);
            } catch (const InfeasibleSigma& e) {
                report.excluded = true;
                report.exclusion_reason = e.what();
            }
            break;
        }
    }

    if (!(oi_loss >= 1e-12)) {
        report.excluded = true;
        report.exclusion_reason = "loss of the orthogonally invariant oracle is below 1e-12; REL undefined";
    }
    if (!report.excluded) {
        for (const auto& [key, value] : report.losses) {
            report.rel[key] = key == oi_key ? 0.0 : value / oi_loss - 1.0;
        }
    }
    return report;
}

std::vector<Index> grid_ranks(Index m, Index n) {
    const Index cap = std::min(m, n);
    std::vector<Index> ranks;
    for (int i = 0;; ++i) {
        const auto r = static_cast<Index>(std::lround(std::pow(10.0, 0.5 * i)));
        if (10 * r > cap) break;
        ranks.push_back(r);
    }
    return ranks;
}

std::vector<double> grid_multipliers() {
    std::vector<double> out;
    for (int i = 9; i <= 100; ++i) out.push_back(static_cast<double>(i) / 10.0);
    return out;
}

std::vector<SignalSpec> suite_grid(Index m, Index n) {
    const double c = static_cast<double>(m) / static_cast<double>(n);
    const double scale = std::sqrt(std::sqrt(c));
    std::vector<SignalSpec> cells;
    for (const Index r : grid_ranks(m, n)) {
        for (const Profile p : kAllProfiles) {
            for (const double mult : grid_multipliers()) {
                cells.push_back({m, n, r, mult * scale, p});
            }
        }
    }
    return cells;
}

SuiteReport run_suite(Index m, Index n, std::uint64_t master_seed, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.m = m;
    report.n = n;
    report.master_seed = master_seed;
    report.ranks = grid_ranks(m, n);
    report.multipliers = grid_multipliers();

    const std::vector<SignalSpec> cells = suite_grid(m, n);
    report.cell_count = cells.size();
    report.trials.resize(cells.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            try {
                report.trials[idx] = run_trial(cells[idx], master_seed, idx);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells.size();
                return;
            }
        }
    };
    const unsigned workers = std::max(1u, threads);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::map<std::string, double> sums;
    for (const Scheme s : kSuiteSchemes) sums[std::string(scheme_key(s))] = 0.0;
    for (const auto& trial : report.trials) {
        if (trial.excluded) {
            ++report.excluded_count;
            continue;
        }
        ++report.included_count;
        for (auto& [key, sum] : sums) sum += trial.rel.at(key);
    }
    for (const auto& [key, sum] : sums) {
        report.arel[key] = report.included_count > 0 ? sum / static_cast<double>(report.included_count) : 0.0;
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace rmtshrink
