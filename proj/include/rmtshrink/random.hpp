#ifndef RMTSHRINK_RANDOM_HPP
#define RMTSHRINK_RANDOM_HPP

#include <rmtshrink/linalg.hpp>

#include <array>
#include <cstdint>
#include <optional>

namespace rmtshrink {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key);
};

/// A seedable, splittable random stream. A stream is identified by
/// (seed, stream_id); its draws are a pure function of that pair and the
/// draw position, so streams for different trials can be consumed in any
/// order or on any thread.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    /// Independent stream for one trial of a Monte-Carlo run.
    static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index);

    /// Derive an independent child stream; does not advance this stream.
    RngStream split(std::uint64_t child) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    Philox4x32::Counter next_block();
    /// Uniform on (0, 1].
    double next_uniform();
    /// Standard normal via Box-Muller.
    double next_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t position_ = 0;
    std::optional<double> spare_normal_;
};

/// m x n matrix with i.i.d. N(0, 1) entries, filled in row-major order.
Matrix random_gaussian(Index m, Index n, RngStream& stream);

/// Haar-distributed k x k orthogonal matrix (QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q).
Matrix random_orthogonal(Index k, RngStream& stream);

} // namespace rmtshrink

#endif // RMTSHRINK_RANDOM_HPP
