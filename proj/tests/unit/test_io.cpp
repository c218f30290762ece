#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "jkcov/config.hpp"
#include "jkcov/csv.hpp"
#include "jkcov/error.hpp"

using namespace jkcov;

namespace {

std::size_t parse_error_line(const std::string& text, bool csv) {
    std::istringstream in(text);
    try {
        if (csv) parse_csv(in);
        else KeyValueConfig::parse(in).reject_unknown();
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("jkcov_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST(Csv, ParsesHeaderAndRows) {
    std::istringstream in("a,b\n1,2\n-3.5, 4e-1\r\n\n");
    auto csv = parse_csv(in);
    EXPECT_EQ(csv.header, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(csv.data.samples(), 2u);
    EXPECT_EQ(csv.data(1, 0), -3.5);
    EXPECT_EQ(csv.data(1, 1), 0.4);
}

TEST(Csv, StripsByteOrderMark) {
    std::istringstream in("\xEF\xBB\xBFx,y\n1,2\n");
    EXPECT_EQ(parse_csv(in).header[0], "x");
}

TEST(Csv, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("a,b\n1,2\n3\n", true), 3u);
    EXPECT_EQ(parse_error_line("a,b\n1,2\n3,x\n", true), 3u);
    EXPECT_EQ(parse_error_line("a,b\n1,nan\n", true), 2u);
    EXPECT_EQ(parse_error_line("a,b\n1,\n", true), 2u);
    EXPECT_EQ(parse_error_line("a,b\n1,2,3\n", true), 2u);
    EXPECT_NE(parse_error_line("a,b\n", true), 0u);
    EXPECT_NE(parse_error_line("", true), 0u);
}

TEST(Csv, MissingFile) { EXPECT_THROW(read_csv("/nonexistent/file.csv"), InvalidInput); }

TEST(Csv, MatrixRoundTrip) {
    auto dir = temp_dir("roundtrip");
    SymmetricMatrix s(2);
    s(0, 0) = 0.1;
    s(1, 0) = 1.0 / 3.0;
    s(1, 1) = 2.0;
    write_matrix_csv(dir / "m.csv", s);
    auto back = read_csv(dir / "m.csv");
    EXPECT_EQ(back.header, (std::vector<std::string>{"x1", "x2"}));
    EXPECT_EQ(back.data(0, 1), 1.0 / 3.0);
    EXPECT_EQ(back.data(1, 0), 1.0 / 3.0);
    EXPECT_EQ(back.data(0, 0), 0.1);
    write_matrix_csv(dir / "n.csv", s, {"g1", "g2"});
    EXPECT_EQ(read_csv(dir / "n.csv").header[1], "g2");
    EXPECT_THROW(write_matrix_csv(dir / "bad.csv", s, {"only"}), InvalidInput);
}

TEST(Csv, FormatDouble) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "NA");
}

TEST(Config, TypedAccessors) {
    std::istringstream in("# comment\nversion = 1\nn = 100\nrate = 0.25\nflag = true\n"
                          "names = a, b ,c\ndims = 30,100\nvals = 1.5, -2\n");
    auto kv = KeyValueConfig::parse(in);
    EXPECT_EQ(kv.get_uint("n"), 100u);
    EXPECT_EQ(kv.get_double("rate"), 0.25);
    EXPECT_EQ(kv.get_bool("flag"), true);
    EXPECT_EQ(kv.get_list("names"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(kv.get_uint_list("dims"), (std::vector<std::uint64_t>{30, 100}));
    EXPECT_EQ(kv.get_double_list("vals"), (std::vector<double>{1.5, -2.0}));
    EXPECT_FALSE(kv.get_uint("missing").has_value());
    EXPECT_EQ(kv.line_of("rate"), 4u);
    EXPECT_NO_THROW(kv.reject_unknown());
}

TEST(Config, StrictErrors) {
    EXPECT_EQ(parse_error_line("n = 1\n", false), 1u);                   // no version
    EXPECT_EQ(parse_error_line("version = 2\n", false), 1u);             // wrong version
    EXPECT_EQ(parse_error_line("version = 1\nn = 1\nn = 2\n", false), 3u);  // duplicate
    EXPECT_EQ(parse_error_line("version = 1\njunk\n", false), 2u);
    EXPECT_EQ(parse_error_line("version = 1\nx =\n", false), 2u);
    EXPECT_EQ(parse_error_line("version = 1\n= 3\n", false), 2u);
    EXPECT_EQ(parse_error_line("version = 1\nzeta = 1\nalpha = 2\n", false), 2u);  // first unknown by line
}

TEST(Config, BadValues) {
    std::istringstream in("version = 1\nn = -4\nx = abc\nb = yes\nl = 1,,2\n");
    auto kv = KeyValueConfig::parse(in);
    EXPECT_THROW(kv.get_uint("n"), ParseError);
    EXPECT_THROW(kv.get_double("x"), ParseError);
    EXPECT_THROW(kv.get_bool("b"), ParseError);
    EXPECT_THROW(kv.get_list("l"), ParseError);
}

TEST(Config, LoadFromFile) {
    auto dir = temp_dir("config");
    std::ofstream(dir / "c.cfg") << "version = 1\nseed = 9\n";
    auto kv = KeyValueConfig::load((dir / "c.cfg").string());
    EXPECT_EQ(kv.get_uint("seed"), 9u);
    EXPECT_THROW(KeyValueConfig::load((dir / "none.cfg").string()), InvalidInput);
}
