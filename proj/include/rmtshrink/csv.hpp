#ifndef RMTSHRINK_CSV_HPP
#define RMTSHRINK_CSV_HPP

#include <rmtshrink/linalg.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace rmtshrink {

// Matrix CSV: one matrix row per line, comma-separated decimal floats, no
// header. Ragged rows and non-finite entries are rejected with FormatError.

Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& out, const Matrix& b);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& b);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

} // namespace rmtshrink

#endif // RMTSHRINK_CSV_HPP
