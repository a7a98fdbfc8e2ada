#include <rmtshrink/csv.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace rmtshrink {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line_no) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) +
                          "' as a number");
    }
    if (!std::isfinite(value)) {
        throw FormatError("line " + std::to_string(line_no) + ": non-finite entry");
    }
    return value;
}

} // namespace

Matrix read_matrix_csv(std::istream& in) {
    std::vector<double> entries;
    Index cols = -1;
    Index rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        Index count = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            entries.push_back(parse_field(body.substr(start, comma - start), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cols < 0) {
            cols = count;
        } else if (count != cols) {
            throw FormatError("line " + std::to_string(line_no) + ": ragged row (" + std::to_string(count) +
                              " fields, expected " + std::to_string(cols) + ")");
        }
        ++rows;
    }
    if (rows == 0) {
        throw FormatError("matrix CSV is empty");
    }
    Matrix b(rows, cols);
    std::copy(entries.begin(), entries.end(), b.data());
    return b;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_matrix_csv(in);
}

std::string format_double(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& b) {
    for (Index i = 0; i < b.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(b(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& b) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_matrix_csv(out, b);
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace rmtshrink
