#include "wakefc/csv.hpp"
#include "wakefc/error.hpp"
#include "wakefc/svg_plot.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

using namespace wakefc;

TEST_CASE("doubles round-trip exactly")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        const double x = std::bit_cast<double>(rng());
        if (!std::isfinite(x)) {
            continue;
        }
        REQUIRE(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(5.0) == "5");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    CHECK(parse_double("1e3") == 1000.0);
    CHECK_THROWS(parse_double("1.0x"));
    CHECK_THROWS(parse_double(""));
}

TEST_CASE("quoting and line ends")
{
    Table t;
    t.header = {"id", "note"};
    t.rows = {{"a", "plain"}, {"b", "has,comma"}, {"c", "say \"hi\""}, {"d", "two\nlines"}};
    const std::string text = to_csv(t);
    CHECK(text.starts_with("id,note\r\n"));
    CHECK(text.find("\"has,comma\"") != std::string::npos);
    CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
    CHECK(parse_csv(text) == t);

    const Table lf = parse_csv("x,y\n1,2\n3,4\n");
    CHECK(lf.rows.size() == 2);
    CHECK(lf.rows[1][0] == "3");
    CHECK(lf.column("y") == 1);
    CHECK_THROWS(lf.column("z"));
    CHECK_THROWS(parse_csv("x,y\n1,2,3\n"));
    CHECK_THROWS(parse_csv("x,y\n\"1,2\n"));
}

TEST_CASE("file round trip")
{
    Table t;
    t.header = {"t_s", "f_hz"};
    for (int k = 0; k < 50; ++k) {
        t.rows.push_back({format_double(k * 0.01), format_double(50.0 - std::sin(k * 0.1))});
    }
    const auto path = std::filesystem::temp_directory_path() / "wakefc_csv_roundtrip.csv";
    write_csv_file(path.string(), t);
    CHECK(read_csv_file(path.string()) == t);
    std::filesystem::remove(path);
    CHECK_THROWS(read_csv_file("/nonexistent/x.csv"));
}

TEST_CASE("svg output is deterministic")
{
    PlotSpec spec;
    spec.title = "Rotor <speed> & pitch";
    spec.x_label = "t (s)";
    spec.y_label = "omega (pu)";
    for (int s = 0; s < 3; ++s) {
        PlotSeries p;
        p.name = "WT" + std::to_string(s + 1);
        for (int k = 0; k <= 100; ++k) {
            p.x.push_back(k * 0.6);
            p.y.push_back(0.8 + 0.01 * s + 0.05 * std::exp(-k * 0.05));
        }
        spec.series.push_back(p);
    }
    const std::string a = render_svg(spec);
    const std::string b = render_svg(spec);
    CHECK(a == b);
    CHECK((a.starts_with("<svg") || a.starts_with("<?xml")));
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("&lt;speed&gt; &amp; pitch") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = a.find("<polyline"); pos != std::string::npos; pos = a.find("<polyline", pos + 1)) {
        ++lines;
    }
    CHECK(lines == 3);
    CHECK(a.find("WT3") != std::string::npos);

    // A flat or empty series still renders.
    PlotSpec flat;
    flat.series.push_back({"c", {0.0, 1.0}, {2.0, 2.0}});
    CHECK(render_svg(flat).find("</svg>") != std::string::npos);
    CHECK(render_svg(PlotSpec{}).find("</svg>") != std::string::npos);
}
