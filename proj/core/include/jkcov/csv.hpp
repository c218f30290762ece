#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "jkcov/matrix.hpp"

namespace jkcov {

/// Samples in rows, features in columns, one header line of feature names.
struct CsvData {
    std::vector<std::string> header;
    DataMatrix data;
};

/// Strict comma-separated parser: every data row must have as many fields as
/// the header and every field must be a finite decimal number. Throws
/// ParseError with the 1-based line number.
CsvData parse_csv(std::istream& in);
CsvData read_csv(const std::filesystem::path& path);

/// Writes a header line followed by the p rows of the full matrix, values with
/// 17 significant digits. An empty header writes x1..xp.
void write_matrix_csv(const std::filesystem::path& path, const SymmetricMatrix& S,
                      std::vector<std::string> header = {});

/// "%.17g", or "NA" for NaN.
std::string format_double(double v);

} // namespace jkcov
