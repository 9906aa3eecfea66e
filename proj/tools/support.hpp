#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "oscillab/numerics.hpp"

namespace oscillab::cli {

using ojson = nlohmann::ordered_json;

// Shortest decimal that reads back to the same double; "inf", "-inf", "nan".
std::string num(double v);
// "a+bi" / "a-bi" from num().
std::string complex_str(cplx z);

// RFC 4180: CRLF records, fields quoted when they hold a comma, quote or
// line break, embedded quotes doubled.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    std::size_t width_ = 0;
};

std::string csv_escape(const std::string& cell);

// Log-log plot of one or more series; points with non-positive values are
// dropped. Output is a pure function of the input.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
    bool markers = true;
};
std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<SvgSeries>& series);

// Runs fn(i) for i in [0, n) on `threads` workers; results land by index so
// the output does not depend on scheduling. The first exception is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn);

// "lo,hi,count" geometric grid, or an object {lo, hi, count}.
std::vector<double> grid_from(const ojson& v);
// "start,factor,count" or {start, factor, count}.
std::vector<double> ladder_from(const ojson& v);
// "a,b,c" or [a, b, c].
std::vector<double> list_from(const ojson& v);

std::vector<double> geometric(double lo, double hi, int count);

}  // namespace oscillab::cli

#include "support_impl.hpp"
