#ifndef RMTSHRINK_SIMULATION_HPP
#define RMTSHRINK_SIMULATION_HPP

#include <rmtshrink/linalg.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rmtshrink {

/// Decay of the signal singular values after the largest one.
enum class Profile {
    equal,          // lambda_j = lambda_1
    linear_to_zero, // lambda_j = lambda_1 (r - j + 1) / r
    linear_to_half, // lambda_j = lambda_1 (1 - (j - 1) / (2 (r - 1)))
    exp_0_5,        // lambda_j = lambda_1 q^{j-1}
    exp_0_7,
    exp_0_9,
    exp_0_95,
    exp_0_99,
};

inline constexpr Profile kAllProfiles[] = {Profile::equal,   Profile::linear_to_zero, Profile::linear_to_half,
                                           Profile::exp_0_5, Profile::exp_0_7,        Profile::exp_0_9,
                                           Profile::exp_0_95, Profile::exp_0_99};

std::string_view profile_name(Profile p);
Profile parse_profile(std::string_view name);

struct SignalSpec {
    Index m = 0;
    Index n = 0;
    Index rank = 1;
    double lambda_max = 1.0;
    Profile profile = Profile::equal;
};

/// Throws InvalidArgument unless 1 <= rank <= min(m, n) / 10 and lambda_max > 0.
void validate(const SignalSpec& spec);

/// The rank non-zero singular values of the signal, non-increasing.
Vector signal_values(const SignalSpec& spec);

/// m x n diagonal signal carrying signal_values(spec).
Matrix generate_signal(const SignalSpec& spec);

enum class Scheme { soft_oracle, hard_oracle, rmt, oi_oracle };

inline constexpr Scheme kSuiteSchemes[] = {Scheme::soft_oracle, Scheme::hard_oracle, Scheme::rmt, Scheme::oi_oracle};

std::string_view scheme_key(Scheme s);

struct TrialReport {
    SignalSpec spec;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
    std::map<std::string, double> losses;
    std::map<std::string, double> rel;
    std::optional<double> sigma_hat;  // set when the RMT scheme ran
    Index rmt_rank = 0;
    bool excluded = false;            // REL undefined or the RMT estimator failed
    std::string exclusion_reason;
};

/// Y = A + n^{-1/2} W with W drawn from the (master_seed, trial_index) stream;
/// all requested schemes reconstruct the same Y. The orthogonally invariant
/// oracle always runs because REL is measured against it.
TrialReport run_trial(const SignalSpec& spec, std::uint64_t master_seed, std::uint64_t trial_index,
                      std::span<const Scheme> schemes = kSuiteSchemes);

/// Ranks round(sqrt(10)^i) not exceeding min(m, n) / 10.
std::vector<Index> grid_ranks(Index m, Index n);
/// The 92 multipliers 0.9, 1.0, ..., 10.0 applied to c^{1/4}.
std::vector<double> grid_multipliers();
/// Every cell of the simulation grid, ordered rank-major, then profile, then lambda.
std::vector<SignalSpec> suite_grid(Index m, Index n);

struct SuiteReport {
    Index m = 0;
    Index n = 0;
    std::uint64_t master_seed = 0;
    std::size_t cell_count = 0;
    std::size_t included_count = 0;
    std::size_t excluded_count = 0;
    std::vector<Index> ranks;
    std::vector<double> multipliers;
    std::map<std::string, double> arel;
    double wall_seconds = 0.0;
    std::vector<TrialReport> trials;
};

/// Runs the whole grid, one noise draw per cell (trial index = cell index).
/// The report is identical for any thread count.
SuiteReport run_suite(Index m, Index n, std::uint64_t master_seed, unsigned threads = 1);

} // namespace rmtshrink

#endif // RMTSHRINK_SIMULATION_HPP
