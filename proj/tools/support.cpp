#include "support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "oscillab/errors.hpp"

namespace oscillab::cli {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string complex_str(cplx z) {
    std::string im = num(z.imag());
    if (im[0] != '-') im = "+" + im;
    return num(z.real()) + im + "i";
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    width_ = cols.size();
    row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (width_ && cells.size() != width_) throw std::logic_error("csv row width differs from header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_escape(cells[i]);
    }
    os_ << "\r\n";
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("not a number: '" + item + "'");
        }
    }
    return out;
}

std::vector<double> triple(const ojson& v, const char* a, const char* b, const char* c) {
    if (v.is_string()) {
        auto xs = split_numbers(v.get<std::string>());
        if (xs.size() != 3) throw ConfigError(std::string("expected ") + a + "," + b + "," + c);
        return xs;
    }
    if (v.is_object()) {
        for (const char* key : {a, b, c})
            if (!v.contains(key) || !v[key].is_number()) throw ConfigError(std::string("missing number ") + key);
        return {v[a].get<double>(), v[b].get<double>(), v[c].get<double>()};
    }
    throw ConfigError(std::string("expected \"") + a + "," + b + "," + c + "\" or an object");
}

int count_of(double c) {
    if (!(c >= 1.0) || c != std::floor(c) || c > 1e6) throw ConfigError("count must be an integer >= 1");
    return static_cast<int>(c);
}

}  // namespace

std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<SvgSeries>& series) {
    const double W = 720, H = 480, L = 80, R = 160, T = 40, B = 60;
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, std::log10(s.x[i]));
            xhi = std::max(xhi, std::log10(s.x[i]));
            ylo = std::min(ylo, std::log10(s.y[i]));
            yhi = std::max(yhi, std::log10(s.y[i]));
        }
    if (!(xlo <= xhi)) xlo = 0, xhi = 1;
    if (!(ylo <= yhi)) ylo = 0, yhi = 1;
    xlo = std::floor(xlo), xhi = std::max(std::ceil(xhi), xlo + 1);
    double pad = std::max(0.05 * (yhi - ylo), 0.05);
    ylo -= pad, yhi += pad;
    auto px = [&](double lx) { return L + (lx - xlo) / (xhi - xlo) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ylo) / (yhi - ylo) * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << f2(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(xlo); d <= static_cast<int>(xhi); ++d) {
        double x = px(d);
        o << "<line x1=\"" << f2(x) << "\" y1=\"" << H - B << "\" x2=\"" << f2(x) << "\" y2=\"" << H - B + 5
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << f2(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e" << d
          << "</text>\n";
    }
    const int yt = 5;
    for (int i = 0; i <= yt; ++i) {
        double ly = ylo + (yhi - ylo) * i / yt;
        double y = py(ly);
        o << "<line x1=\"" << L - 5 << "\" y1=\"" << f2(y) << "\" x2=\"" << L << "\" y2=\"" << f2(y)
          << "\" stroke=\"black\"/>\n";
        char lab[32];
        std::snprintf(lab, sizeof lab, "%.3g", std::pow(10.0, ly));
        o << "<text x=\"" << L - 8 << "\" y=\"" << f2(y + 4) << "\" text-anchor=\"end\">" << lab << "</text>\n";
    }
    o << "<text x=\"" << f2(L + (W - L - R) / 2) << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">"
      << xml_escape(xlabel) << "</text>\n";
    o << "<text x=\"20\" y=\"" << f2(T + (H - T - B) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << f2(T + (H - T - B) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n";
    int li = 0;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            pts += f2(px(std::log10(s.x[i]))) + "," + f2(py(std::log10(s.y[i]))) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
                o << "<circle cx=\"" << f2(px(std::log10(s.x[i]))) << "\" cy=\"" << f2(py(std::log10(s.y[i])))
                  << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            }
        double ly = T + 16 + 18 * li++;
        o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << f2(ly) << "\" x2=\"" << W - R + 30 << "\" y2=\"" << f2(ly)
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 36 << "\" y=\"" << f2(ly + 4) << "\">" << xml_escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<double> geometric(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("grid needs 0 < lo <= hi");
    std::vector<double> g;
    for (int i = 0; i < count; ++i)
        g.push_back(count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    if (count > 1) g.back() = hi;
    return g;
}

std::vector<double> grid_from(const ojson& v) {
    auto t = triple(v, "lo", "hi", "count");
    return geometric(t[0], t[1], count_of(t[2]));
}

std::vector<double> ladder_from(const ojson& v) {
    auto t = triple(v, "start", "factor", "count");
    if (!(t[0] > 0.0)) throw ConfigError("ladder start must be positive");
    if (!(t[1] > 1.0)) throw ConfigError("ladder factor must exceed 1");
    int n = count_of(t[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(t[0] * std::pow(t[1], i));
    return out;
}

std::vector<double> list_from(const ojson& v) {
    if (v.is_string()) return split_numbers(v.get<std::string>());
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError("list entries must be numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    throw ConfigError("expected a list of numbers");
}

}  // namespace oscillab::cli
