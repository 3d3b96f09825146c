#include <doctest.h>

#include "datacat/error.hpp"
#include "datacat/resources.hpp"
#include "support.hpp"

using namespace datacat;
using namespace datacat::resources;
using testsupport::error_code_of;

namespace {

TableResource table_from(std::string_view csv, bool header = true) {
    return TableResource("http://localhost:8080/res/t.csv", "t.csv", parse_csv(csv), header);
}

}  // namespace

TEST_CASE("tables map records directly onto the grid") {
    const auto t = table_from("a,b\n1,2\n3,4");
    CHECK(t.row_count() == 3);
    CHECK(t.col_count() == 2);
    CHECK(t.cell(1, 1) == "a");
    CHECK(t.cell(3, 2) == "4");
    CHECK(error_code_of([&] { t.cell(4, 1); }) == ErrorCode::OutOfBounds);
    CHECK(error_code_of([&] { t.cell(1, 0); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("short records are padded with empty strings") {
    const auto t = table_from("a,b\n1\n");
    CHECK(t.row_count() == 2);
    CHECK(t.col_count() == 2);
    CHECK(t.cell(2, 2) == "");
}

TEST_CASE("a single value table") {
    const auto t = table_from("x\n");
    CHECK(t.row_count() == 1);
    CHECK(t.col_count() == 1);
}

TEST_CASE("RFC 4180 quoting and line endings") {
    const auto recs = parse_csv("\"a,b\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",x\rlast,\"\"");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0] == std::vector<std::string>{"a,b", "say \"hi\""});
    CHECK(recs[1] == std::vector<std::string>{"multi\nline", "x"});
    CHECK(recs[2] == std::vector<std::string>{"last", ""});
    CHECK(parse_csv("a;b\n1;2", ';')[1] == std::vector<std::string>{"1", "2"});
    CHECK(parse_csv("").empty());
}

TEST_CASE("text resources split into lines") {
    CHECK(split_lines("hello\nworld\n").size() == 2);
    CHECK(split_lines("").empty());
    CHECK(split_lines("one line no terminator") == std::vector<std::string>{"one line no terminator"});
    CHECK(split_lines("a\r\nb\r\n") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("file loading errors") {
    testsupport::TempDir dir;
    testsupport::write_file(dir / "bad.csv", "ok,\xff\xfe\n");
    testsupport::write_file(dir / "empty.csv", "");
    testsupport::write_file(dir / "bom.csv", "\xef\xbb\xbfh\n1\n");
    CHECK(error_code_of([&] { load_csv(dir / "nope.csv", "x"); }) == ErrorCode::FileNotFound);
    CHECK(error_code_of([&] { load_csv(dir / "bad.csv", "x"); }) == ErrorCode::EncodingError);
    CHECK(error_code_of([&] { load_csv(dir / "empty.csv", "x"); }) == ErrorCode::EmptyFile);
    CHECK(load_csv(dir / "bom.csv", "x").cell(1, 1) == "h");
}

TEST_CASE("get_region examples") {
    const auto t = table_from("a,b\n1,2\n3,4");
    const auto one = get_region(t, deeplink::parse_fragment("cell=1,2"));
    CHECK(one.rows == std::vector<std::vector<std::string>>{{"b"}});
    const auto tail = get_region(t, deeplink::parse_fragment("row=2-*"));
    CHECK(tail.bounds == deeplink::Bounds{2, 3, 1, 2});
    CHECK(tail.rows == std::vector<std::vector<std::string>>{{"1", "2"}, {"3", "4"}});
    CHECK(error_code_of([&] { get_region(t, deeplink::parse_fragment("col=5")); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("random CSV text parses back to the generated records") {
    testsupport::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
        const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        const auto records = testsupport::random_records(rng, rows, cols);
        const char delim = i % 4 == 0 ? '\t' : ',';
        const auto parsed = parse_csv(testsupport::to_csv(records, rng, delim), delim);
        REQUIRE(parsed == records);
    }
}

TEST_CASE("regions are the sub-grid of the whole table") {
    testsupport::Rng rng(5);
    const auto records = testsupport::random_records(rng, 30, 6);
    const TableResource t("http://h/res/r.csv", "r.csv", records, false);
    for (int i = 0; i < 300; ++i) {
        std::uniform_int_distribution<std::size_t> rr(1, t.row_count()), cc(1, t.col_count());
        const std::size_t r = rr(rng), c = cc(rng);
        const std::string frag = "cell=" + std::to_string(r) + "," + std::to_string(c) + "-" +
                                 std::to_string(r + rr(rng) / 3) + "," + std::to_string(c + cc(rng) / 2);
        const auto region = get_region(t, deeplink::parse_fragment(frag));
        REQUIRE(region.rows.size() == region.bounds.row_count());
        for (std::size_t dr = 0; dr < region.rows.size(); ++dr) {
            REQUIRE(region.rows[dr].size() == region.bounds.col_count());
            for (std::size_t dc = 0; dc < region.rows[dr].size(); ++dc) {
                CHECK(region.rows[dr][dc] == t.cell(region.bounds.first_row + dr, region.bounds.first_col + dc));
            }
        }
    }
}

TEST_CASE("registry: IRIs, lookups and kinds") {
    testsupport::TempDir dir;
    testsupport::write_file(dir / "data/cars 2013.csv", "make,year\nVW,2013\n");
    testsupport::write_file(dir / "README.md", "# Notes\nline two\n");
    testsupport::write_file(dir / "broken.csv", "\xc3\x28\n");
    ResourceRegistry reg(dir.path(), "http://localhost:8080");
    const auto problems = reg.scan();
    CHECK(problems.size() == 1);
    CHECK(reg.all().size() == 2);

    const std::string table_iri = "http://localhost:8080/res/data/cars%202013.csv";
    CHECK(reg.base_iri_for(dir / "data/cars 2013.csv") == table_iri);
    CHECK(reg.find_table(table_iri)->cell(2, 1) == "VW");
    CHECK(decode_path(encode_path("data/cars 2013.csv")) == "data/cars 2013.csv");
    CHECK(error_code_of([&] { reg.find("http://localhost:8080/res/nothing.csv"); }) == ErrorCode::UnknownResource);
    CHECK(error_code_of([&] { reg.find_table("http://localhost:8080/res/README.md"); }) ==
          ErrorCode::ResourceKindMismatch);
    CHECK(error_code_of([&] { reg.base_iri_for("/etc/passwd"); }) == ErrorCode::OutOfBounds);
}
