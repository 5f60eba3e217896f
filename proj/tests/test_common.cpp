#include "helpers.hpp"
#include "revnet/common.hpp"
#include "revnet/csv.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace revnet;

TEST_SUITE("common") {

TEST_CASE("format_number is shortest round trip") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_number(2.0) == "2");
    for (double v : {1e-300, 123456.789, -7.25e12, std::nextafter(1.0, 2.0)})
        CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    Rng c = Rng::derive(5, 0), d = Rng::derive(5, 1);
    CHECK(c.next() != d.next());
    Rng e(1);
    double mean = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = e.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean += u;
    }
    CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
    for (int i = 0; i < 1000; ++i) CHECK(e.index(7) < 7u);
}

TEST_CASE("labels parse") {
    CHECK(parse_label("fake_buyer") == Label::fake_buyer);
    CHECK(parse_label("1") == Label::fake_buyer);
    CHECK(parse_label("organic") == Label::organic);
    CHECK(parse_label("0") == Label::organic);
    CHECK_THROWS_AS(parse_label("spam"), Error);
    CHECK(to_string(Label::fake_buyer) == "fake_buyer");
}

TEST_CASE("csv quoting round trips") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
    const auto rows = csv::parse(csv::join(fields) + "\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == fields);
    CHECK_THROWS_AS(csv::parse("\"unterminated\n"), Error);
}

TEST_CASE("atomic write leaves no temp file") {
    testing::TempDir dir("common");
    write_file_atomic(dir / "x.txt", "hello");
    CHECK(read_file(dir / "x.txt") == "hello");
    CHECK_FALSE(std::filesystem::exists(dir / "x.txt.partial"));
    CHECK_THROWS_AS(read_file(dir / "missing.txt"), Error);
}

}  // TEST_SUITE
