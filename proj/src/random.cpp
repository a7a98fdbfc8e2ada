#include <rmtshrink/random.hpp>

#include <cmath>
#include <numbers>

namespace rmtshrink {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // 53 random bits mapped to (0, 1].
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

RngStream RngStream::for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RngStream(master_seed, trial_index);
}

RngStream RngStream::split(std::uint64_t child) const {
    return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(child + 0x632BE59BD9B4E019ull)));
}

Philox4x32::Counter RngStream::next_block() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
                                  static_cast<std::uint32_t>(stream_id_),
                                  static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    ++position_;
    return Philox4x32::block(ctr, key);
}

double RngStream::next_uniform() {
    spare_normal_.reset();
    const auto b = next_block();
    return to_unit_interval(b[0], b[1]);
}

double RngStream::next_normal() {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return z;
    }
    const auto b = next_block();
    const double u1 = to_unit_interval(b[0], b[1]);
    const double u2 = to_unit_interval(b[2], b[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

Matrix random_gaussian(Index m, Index n, RngStream& stream) {
    if (m < 1 || n < 1) {
        throw InvalidArgument("random_gaussian: dimensions must be positive");
    }
    Matrix w(m, n);
    double* data = w.data();
    for (Index i = 0; i < w.size(); ++i) {
        data[i] = stream.next_normal();
    }
    return w;
}

Matrix random_orthogonal(Index k, RngStream& stream) {
    if (k < 1) {
        throw InvalidArgument("random_orthogonal: dimension must be positive");
    }
    const Eigen::MatrixXd g = random_gaussian(k, k, stream);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (Index j = 0; j < k; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
}

} // namespace rmtshrink
