#include <gtest/gtest.h>

#include <sstream>

#include "oscillab/errors.hpp"
#include "support.hpp"

using namespace oscillab;
using namespace oscillab::cli;

TEST(Csv, QuotesPerRfc4180) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RowsUseCrlfAndFixedWidth) {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"a", "b"});
    w.row({"1", "x,y"});
    EXPECT_EQ(os.str(), "a,b\r\n1,\"x,y\"\r\n");
    EXPECT_THROW(w.row({"only one"}), std::exception);
}

TEST(Num, ShortestRoundTrip) {
    EXPECT_EQ(num(0.1), "0.1");
    EXPECT_EQ(num(1e300), "1e+300");
    EXPECT_EQ(num(-INFINITY), "-inf");
    EXPECT_EQ(complex_str(cplx(1.5, -2.0)), "1.5-2i");
}

TEST(Grids, ParseForms) {
    auto g = grid_from(ojson("1,100,3"));
    ASSERT_EQ(g.size(), 3u);
    EXPECT_NEAR(g[1], 10.0, 1e-12);
    auto h = grid_from(ojson{{"lo", 1}, {"hi", 100}, {"count", 3}});
    EXPECT_EQ(g, h);
    auto l = ladder_from(ojson("10,2,4"));
    EXPECT_EQ(l, (std::vector<double>{10, 20, 40, 80}));
    EXPECT_EQ(list_from(ojson::array({1, 2})), (std::vector<double>{1, 2}));
    EXPECT_THROW(grid_from(ojson("1,2")), ConfigError);
    EXPECT_THROW(grid_from(ojson("5,1,3")), ConfigError);
}

TEST(ParallelMap, OrderIndependentOfThreads) {
    std::function<int(std::size_t)> sq = [](std::size_t i) { return static_cast<int>(i * i); };
    EXPECT_EQ(parallel_map<int>(50, 1, sq), parallel_map<int>(50, 4, sq));
    std::function<int(std::size_t)> boom = [](std::size_t i) -> int {
        if (i == 7) throw ConfigError("seven");
        return 0;
    };
    EXPECT_THROW(parallel_map<int>(20, 3, boom), ConfigError);
}

TEST(Svg, Deterministic) {
    SvgSeries s{"m", "#000", {10, 100, 1000}, {1, 2, 3}, true};
    std::string a = svg_loglog("t", "x", "y", {s});
    EXPECT_EQ(a, svg_loglog("t", "x", "y", {s}));
    EXPECT_NE(a.find("<svg"), std::string::npos);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
}
