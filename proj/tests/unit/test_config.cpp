#include <nowcast/config.hpp>
#include <nowcast/csv.hpp>
#include <nowcast/error.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace nowcast {
namespace {

TEST(KeyValue, ParsesCommentsAndKeepsOrder) {
    const auto kv = KeyValueFile::parse("# header\nb = 2\n\na=  x y  # trailing\n", "t.cfg");
    ASSERT_EQ(kv.entries().size(), 2u);
    EXPECT_EQ(kv.entries()[0].first, "b");
    EXPECT_EQ(kv.require("a"), "x y");
    EXPECT_EQ(kv.require_double("b"), 2.0);
    EXPECT_FALSE(kv.has("c"));
    EXPECT_THROW((void)kv.require("c"), ConfigError);
}

TEST(KeyValue, DuplicateKeyIsAParseError) {
    try {
        (void)KeyValueFile::parse("a = 1\na = 2\n", "dup.cfg");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.file(), "dup.cfg");
    }
}

TEST(KeyValue, RoundTripsThroughText) {
    KeyValueFile kv;
    kv.set("x", "1.5");
    kv.set("name", "claims");
    const auto back = KeyValueFile::parse(kv.to_string());
    EXPECT_EQ(back.entries(), kv.entries());
}

TEST(Csv, ReadsRowsWithLineNumbers) {
    const auto t = parse_csv("a,b\n1, 2\n\n3,4\n", "x.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].fields[1], "2");
    EXPECT_EQ(t.rows[1].line, 4u);
    EXPECT_THROW(t.expect_header({"a", "c"}), ParseError);
}

TEST(Csv, DoubleTextIsStrictAndRoundTrips) {
    EXPECT_EQ(parse_double("-1.25"), -1.25);
    EXPECT_THROW(parse_double("1.2x"), ValidationError);
    EXPECT_THROW(parse_double(""), ValidationError);
    for (double v : {0.1, -3.0e-12, 1.0 / 3.0, 12345.678}) EXPECT_EQ(parse_double(format_double(v)), v);
    EXPECT_EQ(format_double(-0.0), "0");
}

TEST(Config, SplitList) {
    EXPECT_EQ(split_list(" a, b ,,c "), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(trim("  x "), "x");
}

}  // namespace
}  // namespace nowcast
