#include <doctest.h>

#include <rmtshrink/csv.hpp>
#include <rmtshrink/random.hpp>

#include <sstream>

using namespace rmtshrink;

TEST_CASE("matrix CSV round trip is exact") {
    RngStream stream(1);
    const Matrix b = random_gaussian(6, 4, stream) * 1e3;
    std::stringstream buffer;
    write_matrix_csv(buffer, b);
    CHECK(read_matrix_csv(buffer) == b);
}

TEST_CASE("matrix CSV parsing") {
    std::istringstream in("1, 2.5,-3\n4,5e-1,+6\n\n");
    const Matrix b = read_matrix_csv(in);
    REQUIRE(b.rows() == 2);
    REQUIRE(b.cols() == 3);
    CHECK(b(0, 1) == 2.5);
    CHECK(b(1, 1) == 0.5);
    CHECK(b(1, 2) == 6.0);
}

TEST_CASE("matrix CSV rejects malformed input") {
    std::istringstream ragged("1,2,3\n4,5\n");
    CHECK_THROWS_AS(read_matrix_csv(ragged), FormatError);
    std::istringstream empty("\n\n");
    CHECK_THROWS_AS(read_matrix_csv(empty), FormatError);
    std::istringstream text("1,abc\n");
    CHECK_THROWS_AS(read_matrix_csv(text), FormatError);
    std::istringstream trailing("1,2,\n");
    CHECK_THROWS_AS(read_matrix_csv(trailing), FormatError);
    std::istringstream nan("1,nan\n");
    CHECK_THROWS_AS(read_matrix_csv(nan), FormatError);
    CHECK_THROWS_AS(read_matrix_csv(std::filesystem::path("/nonexistent/in.csv")), IoError);
}
