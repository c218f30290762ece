#include "jkcov/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>

#include "jkcov/error.hpp"

namespace jkcov {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (auto& f : fields) {
        const auto first = f.find_first_not_of(" \t");
        const auto last = f.find_last_not_of(" \t");
        f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
    }
    return fields;
}

double parse_number(const std::string& field, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(line, "not a finite number: '" + field + "'");
    }
    return value;
}

} // namespace

CsvData parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    CsvData out;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty()) break;
    }
    if (line.empty()) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header line");
    out.header = split_fields(line);
    const std::size_t p = out.header.size();

    std::vector<double> values;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != p) {
            throw ParseError(line_no, "expected " + std::to_string(p) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        for (const auto& f : fields) values.push_back(parse_number(f, line_no));
        ++n;
    }
    if (n == 0) throw ParseError(line_no, "no data rows");
    out.data = DataMatrix(n, p, std::move(values));
    return out;
}

CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    return parse_csv(in);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const SymmetricMatrix& S, std::vector<std::string> header) {
    const std::size_t p = S.dim();
    if (header.empty()) {
        for (std::size_t j = 0; j < p; ++j) header.push_back("x" + std::to_string(j + 1));
    }
    if (header.size() != p) throw InvalidInput("write_matrix_csv: header size does not match matrix dimension");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t j = 0; j < p; ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < p; ++k) out << (k ? "," : "") << format_double(S(j, k));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace jkcov
