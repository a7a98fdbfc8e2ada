#include <doctest.h>

#include <rmtshrink/random.hpp>
#include <rmtshrink/schemes.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace rmtshrink;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (const double x : xs) v(i++) = x;
    return v;
}

Matrix diag(Index m, Index n, std::initializer_list<double> xs) {
    Matrix d = Matrix::Zero(m, n);
    Index i = 0;
    for (const double x : xs) {
        d(i, i) = x;
        ++i;
    }
    return d;
}

struct Instance {
    Matrix a;
    Matrix y;
};

// Rank-2 signal plus moderate noise.
Instance random_instance(RngStream& stream, Index m = 8, Index n = 6) {
    const Matrix left = random_gaussian(m, 2, stream);
    const Matrix right = random_gaussian(2, n, stream);
    Instance inst;
    inst.a = left * right / std::sqrt(static_cast<double>(n));
    inst.y = inst.a + 0.5 * random_gaussian(m, n, stream) / std::sqrt(static_cast<double>(n));
    return inst;
}

double relative_frobenius(const Matrix& x, const Matrix& ref) {
    return std::sqrt(frobenius_norm_sq(x - ref) / std::max(frobenius_norm_sq(ref), 1e-300));
}

} // namespace

TEST_CASE("hard threshold") {
    const Svd f = svd(diag(2, 2, {3, 1}));
    CHECK(hard_threshold(f, 2.0).coefficients == vec({3, 0}));
    CHECK(hard_threshold(f, 1.0).coefficients == f.values);
    CHECK(hard_threshold(f, 0.5).coefficients == f.values);
    CHECK(hard_threshold(f, 2.0).parameter == 2.0);
    CHECK_THROWS_AS(hard_threshold(f, 0.0), InvalidArgument);
    CHECK_THROWS_AS(hard_threshold(f, -1.0), InvalidArgument);
}

TEST_CASE("hard threshold minimizes the rank-penalized loss") {
    RngStream stream(61);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix y = random_gaussian(3, 3, stream);
        const Svd f = svd(y);
        const double lambda = 0.2 + 2.0 * stream.next_uniform();
        const Reconstruction r = hard_threshold(f, lambda);
        const double ours = frobenius_norm_sq(y - r.a_hat) + lambda * lambda * static_cast<double>(r.detected_rank());
        double best = std::numeric_limits<double>::infinity();
        for (Index k = 0; k <= 3; ++k) {
            Vector truncated = f.values;
            truncated.tail(3 - k).setZero();
            const double objective =
                frobenius_norm_sq(y - compose(truncated, f)) + lambda * lambda * static_cast<double>(k);
            best = std::min(best, objective);
        }
        CHECK(ours == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("soft threshold") {
    const Svd f = svd(diag(2, 2, {3, 1}));
    CHECK(soft_threshold(f, 2.0).coefficients == vec({1, 0}));
    CHECK(soft_threshold(f, 3.0).a_hat.isZero(0.0));
    CHECK(soft_threshold(f, 5.0).a_hat.isZero(0.0));
    CHECK_THROWS_AS(soft_threshold(f, 0.0), InvalidArgument);
}

TEST_CASE("soft threshold minimizes the nuclear-norm-penalized loss") {
    // Over B = sum_j b_j u_j v_j' the objective ||Y - B||^2 + 2 nu ||B||_*
    // separates into (d_j - b_j)^2 + 2 nu b_j, each convex in b_j >= 0.
    RngStream stream(62);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix y = random_gaussian(3, 3, stream);
        const Svd f = svd(y);
        const double nu = 0.1 + 1.5 * stream.next_uniform();
        const Reconstruction r = soft_threshold(f, nu);
        const double step = 1e-4;
        for (Index j = 0; j < 3; ++j) {
            const double d = f.values(j);
            double best_b = 0.0;
            double best = std::numeric_limits<double>::infinity();
            for (double b = 0.0; b <= d + 1.0; b += step) {
                const double objective = (d - b) * (d - b) + 2.0 * nu * b;
                if (objective < best) {
                    best = objective;
                    best_b = b;
                }
            }
            CHECK(std::abs(r.coefficients(j) - best_b) <= step);
        }
    }
}

TEST_CASE("oracle hard threshold") {
    SUBCASE("noiseless observation is recovered exactly") {
        RngStream stream(1);
        const Matrix a = random_gaussian(7, 3, stream) * random_gaussian(3, 5, stream);
        const Reconstruction r = oracle_hard(a, a);
        CHECK(loss(a, r.a_hat) < 1e-20 * frobenius_norm_sq(a) + 1e-24);
    }
    SUBCASE("keeps only the signal component") {
        const Reconstruction r = oracle_hard(diag(2, 2, {5, 1}), diag(2, 2, {5, 0}));
        CHECK(r.coefficients == vec({5, 0}));
        CHECK(loss(diag(2, 2, {5, 0}), r.a_hat) == doctest::Approx(0.0));
        REQUIRE(r.parameter);
        CHECK(*r.parameter == 5.0);
    }
    SUBCASE("zero signal kills everything") {
        const Reconstruction r = oracle_hard(diag(3, 3, {2, 1, 0.5}), Matrix::Zero(3, 3));
        CHECK(r.coefficients.isZero(0.0));
        REQUIRE(r.parameter);
        CHECK(*r.parameter > 2.0);
    }
    SUBCASE("matches a dense threshold grid") {
        RngStream stream(808);
        for (int trial = 0; trial < 20; ++trial) {
            const Instance inst = random_instance(stream);
            const Svd f = svd(inst.y);
            const Reconstruction r = oracle_hard(f, inst.a);
            const double oracle_loss = loss(inst.a, r.a_hat);
            const double top = f.values(0) * 1.05;
            double grid_best = std::numeric_limits<double>::infinity();
            for (int i = 1; i <= 10000; ++i) {
                grid_best = std::min(grid_best, loss(inst.a, hard_threshold(f, top * i / 10000.0).a_hat));
            }
            CHECK(oracle_loss <= grid_best + 1e-9);
            const double gap = (f.values.head(5) - f.values.tail(5)).minCoeff();
            if (gap > 2.0 * top / 10000.0) CHECK(std::abs(oracle_loss - grid_best) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(oracle_hard(Matrix::Zero(3, 2), Matrix::Zero(2, 3)), ShapeMismatch);
}

TEST_CASE("oracle hard threshold breaks ties toward smaller rank") {
    // Keeping the second component changes the loss by d^2 - 2 d p = 0 when p = d / 2.
    const Vector values = vec({4, 2});
    const Vector projections = vec({4, 1});
    const auto choice = hard_oracle_search(values, projections, 17.0);
    CHECK(choice.coefficients == vec({4, 0}));
}

TEST_CASE("oracle soft threshold") {
    SUBCASE("noiseless diagonal observation gives nu = 0") {
        const Matrix a = diag(3, 3, {3, 2, 1});
        const Reconstruction r = oracle_soft(a, a);
        REQUIRE(r.parameter);
        CHECK(*r.parameter == 0.0);
        CHECK(loss(a, r.a_hat) < 1e-24);
    }
    SUBCASE("zero signal") {
        const Matrix y = diag(3, 3, {3, 2, 1});
        const Reconstruction r = oracle_soft(y, Matrix::Zero(3, 3));
        REQUIRE(r.parameter);
        CHECK(*r.parameter >= 3.0);
        CHECK(loss(Matrix::Zero(3, 3), r.a_hat) == 0.0);
    }
    SUBCASE("matches a dense shrinkage grid") {
        RngStream stream(909);
        for (int trial = 0; trial < 10; ++trial) {
            const Instance inst = random_instance(stream);
            const Svd f = svd(inst.y);
            const Reconstruction r = oracle_soft(f, inst.a);
            const double oracle_loss = loss(inst.a, r.a_hat);
            const double top = f.values(0);
            const int points = 100000;
            const Vector p = projection_coefficients(f, inst.a);
            const double a2 = frobenius_norm_sq(inst.a);
            double grid_best = a2;
            for (int i = 0; i <= points; ++i) {
                const double nu = top * i / points;
                const Vector c = (f.values.array() - nu).max(0.0).matrix();
                grid_best = std::min(grid_best, loss_from_coefficients(a2, p, c));
            }
            // |dL/dnu| <= 2 sum_j (|p_j| + d_j) bounds the grid error.
            const double lipschitz = 2.0 * (p.cwiseAbs().sum() + f.values.sum());
            CHECK(oracle_loss <= grid_best + 1e-9);
            CHECK(grid_best - oracle_loss <= lipschitz * top / points);
        }
    }
}

TEST_CASE("orthogonally invariant oracle") {
    RngStream stream(4242);
    const Matrix a = random_gaussian(6, 2, stream) * random_gaussian(2, 5, stream);
    const Reconstruction same = oracle_oi(a, a);
    CHECK((same.coefficients - svd(a).values).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(relative_frobenius(same.a_hat, a) < 1e-10);

    const Matrix y = a + random_gaussian(6, 5, stream);
    CHECK(oracle_oi(y, Matrix::Zero(6, 5)).coefficients.isZero(0.0));

    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = random_instance(stream, 30, 20);
        const Svd f = svd(inst.y);
        const double best = loss(inst.a, oracle_oi(f, inst.a).a_hat);
        CHECK(best <= loss(inst.a, oracle_hard(f, inst.a).a_hat) + 1e-9);
        CHECK(best <= loss(inst.a, oracle_soft(f, inst.a).a_hat) + 1e-9);
        CHECK(best <= loss(inst.a, rmt_known_sigma(f, 0.5).a_hat) + 1e-9);
        CHECK(best <= loss(inst.a, rmt_reconstruct(f).a_hat) + 1e-9);
    }
}

TEST_CASE("loss from coefficients agrees with the matrix loss") {
    RngStream stream(17);
    const Instance inst = random_instance(stream, 12, 9);
    const Svd f = svd(inst.y);
    const Vector p = projection_coefficients(f, inst.a);
    for (const Reconstruction& r : {oracle_hard(f, inst.a), oracle_soft(f, inst.a), oracle_oi(f, inst.a),
                                    soft_threshold(f, 0.3), rmt_known_sigma(f, 0.5)}) {
        CHECK(loss_from_coefficients(frobenius_norm_sq(inst.a), p, r.coefficients) ==
              doctest::Approx(loss(inst.a, r.a_hat)).epsilon(1e-10));
    }
}

TEST_CASE("RMT scheme with known noise") {
    SUBCASE("noise inside the bulk is removed") {
        RngStream stream(2);
        const Matrix y = 0.9 * random_gaussian(200, 200, stream) / std::sqrt(200.0);
        const Reconstruction r = rmt_known_sigma(y);
        CHECK(r.a_hat.isZero(0.0));
        CHECK(r.detected_rank() == 0);
        CHECK(r.sigma_source == SigmaSource::known);
        CHECK(r.sigma_used == 1.0);
    }
    SUBCASE("a single spike at 2.5 gets coefficient 1.5") {
        Matrix y = Matrix::Zero(10, 10);
        y(0, 0) = 2.5;
        for (Index j = 1; j < 10; ++j) y(j, j) = 1.9 - 0.1 * static_cast<double>(j);
        const Reconstruction r = rmt_known_sigma(y);
        CHECK(r.coefficients(0) == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(r.coefficients.tail(9).isZero(0.0));
        CHECK(r.diagnostics.front().detected);
        CHECK(r.detected_rank() == 1);
    }
    SUBCASE("diagonal in, diagonal out") {
        Matrix y = Matrix::Zero(6, 9);
        const double entries[] = {-4.0, 3.2, 0.5, -2.8, 1.0, 6.0};
        for (Index j = 0; j < 6; ++j) y(j, j) = entries[j];
        const Reconstruction r = rmt_known_sigma(y);
        Matrix off = r.a_hat;
        for (Index j = 0; j < 6; ++j) off(j, j) = 0.0;
        CHECK(frobenius_norm_sq(off) < 1e-10 * frobenius_norm_sq(r.a_hat));
        CHECK(r.a_hat(5, 5) > 0.0);
        CHECK(r.a_hat(0, 0) < 0.0);
    }
    SUBCASE("coefficients never exceed the observed singular values") {
        RngStream stream(3);
        const Instance inst = random_instance(stream, 60, 40);
        const Svd f = svd(Matrix(inst.y * 4.0));
        const Reconstruction r = rmt_known_sigma(f, 0.5);
        for (Index j = 0; j < f.size(); ++j) {
            CHECK(r.coefficients(j) >= 0.0);
            CHECK(r.coefficients(j) <= f.values(j));
        }
    }
    SUBCASE("transpose equivariance with the transposed normalization") {
        RngStream stream(5);
        for (const auto [m, n] : {std::pair<Index, Index>{40, 25}, {25, 40}}) {
            Matrix y = random_gaussian(m, n, stream) / std::sqrt(static_cast<double>(n));
            y += 3.0 * random_gaussian(m, 1, stream).normalized() * random_gaussian(1, n, stream).normalized();
            const double sigma = 1.1;
            const double c = static_cast<double>(m) / static_cast<double>(n);
            const Matrix direct = rmt_known_sigma(y, sigma).a_hat;
            const Matrix transposed = rmt_known_sigma(Matrix(y.transpose()), sigma * std::sqrt(c)).a_hat;
            CHECK(std::sqrt(frobenius_norm_sq(Matrix(transposed.transpose()) - direct)) < 1e-9);
            CHECK(frobenius_norm_sq(direct) > 0.0);
        }
    }
}

TEST_CASE("RMT scheme with estimated noise") {
    RngStream stream(6);
    Matrix y = random_gaussian(80, 60, stream) / std::sqrt(60.0);
    y(0, 0) += 4.0;
    y(1, 1) += 2.0;
    const Reconstruction base = rmt_reconstruct(y);
    REQUIRE(base.sigma_estimate);
    CHECK(base.sigma_source == SigmaSource::estimated);
    CHECK(base.scheme_id == "rmt");

    SUBCASE("scale equivariance") {
        for (const double beta : {0.01, 3.0, 250.0}) {
            const Reconstruction scaled = rmt_reconstruct(Matrix(beta * y));
            CHECK(relative_frobenius(scaled.a_hat, Matrix(beta * base.a_hat)) < 1e-12);
            CHECK(scaled.sigma_used == doctest::Approx(beta * base.sigma_used).epsilon(1e-12));
        }
    }
    SUBCASE("orthogonal invariance") {
        const Matrix u = random_orthogonal(80, stream);
        const Matrix v = random_orthogonal(60, stream);
        const Reconstruction rotated = rmt_reconstruct(Matrix(u * y * v.transpose()));
        CHECK(relative_frobenius(rotated.a_hat, Matrix(u * base.a_hat * v.transpose())) < 1e-8);
    }
}

TEST_CASE("RMT beats the thresholding oracles on a 500 x 500 rank-3 signal") {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream stream(900 + seed);
        Matrix a = Matrix::Zero(500, 500);
        a(0, 0) = 4.0;
        a(1, 1) = 3.0;
        a(2, 2) = 2.0;
        const Matrix y = a + random_gaussian(500, 500, stream) / std::sqrt(500.0);
        const Svd f = svd(y);
        const double rmt = loss(a, rmt_reconstruct(f).a_hat);
        if (rmt < loss(a, oracle_soft(f, a).a_hat) && rmt < loss(a, oracle_hard(f, a).a_hat)) ++wins;
    }
    CHECK(wins >= 18);
}

TEST_CASE("loss") {
    const Matrix a = diag(3, 3, {1, 2, 3});
    CHECK(loss(a, a) == 0.0);
    CHECK(loss(Matrix::Zero(3, 3), diag(3, 3, {3})) == 9.0);
    CHECK_THROWS_AS(loss(a, Matrix::Zero(3, 2)), ShapeMismatch);

    RngStream stream(8);
    const Matrix b = random_gaussian(5, 4, stream);
    const Matrix b_hat = random_gaussian(5, 4, stream);
    const Matrix u = random_orthogonal(5, stream);
    const Matrix v = random_orthogonal(4, stream);
    CHECK(loss(Matrix(u * b * v.transpose()), Matrix(u * b_hat * v.transpose())) ==
          doctest::Approx(loss(b, b_hat)).epsilon(1e-10));
}
