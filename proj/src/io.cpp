#include "nfbm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nfbm::io {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
    os << "t,value\n";
    for (int i = 0; i <= path.grid.m; ++i)
        os << format_double(path.grid.at(i)) << ',' << format_double(path.values[i]) << '\n';
}

void write_ensemble_csv(std::ostream& os, const std::vector<SamplePath>& paths) {
    os << "path_id,t,value\n";
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (int i = 0; i <= paths[p].grid.m; ++i)
            os << p << ',' << format_double(paths[p].grid.at(i)) << ',' << format_double(paths[p].values[i]) << '\n';
}

int Table::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::ios_base::failure("csv: missing column '" + name + "'");
    return int(it - header.begin());
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        out.push_back(cell);
    }
    return out;
}
}  // namespace

Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw std::ios_base::failure("csv: empty input");
    t.header = split(line);
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw std::ios_base::failure("csv: wrong number of fields on line " + std::to_string(lineno));
        std::vector<double> row;
        for (const auto& c : cells) {
            double v;
            auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc() || res.ptr != c.data() + c.size())
                throw std::ios_base::failure("csv: bad number '" + c + "' on line " + std::to_string(lineno));
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::ios_base::failure("cannot open " + path);
    return read_csv(is);
}

void write_svg(std::ostream& os, const std::string& title, const std::vector<SvgSeries>& series) {
    constexpr double W = 800, H = 400, left = 70, right = 20, top = 30, bottom = 40;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        x0 = std::min(x0, s.x.minCoeff());
        x1 = std::max(x1, s.x.maxCoeff());
        y0 = std::min(y0, s.y.minCoeff());
        y1 = std::max(y1, s.y.maxCoeff());
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(4);
        s << v;
        return s.str();
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\">\n";
    os << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
       << "</text>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom << "\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom << "\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + k * (x1 - x0) / 5, yv = y0 + k * (y1 - y0) / 5;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << H - bottom << "\" x2=\"" << px(xv) << "\" y2=\"" << H - bottom + 5 << "\"/>\n";
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left << "\" y2=\"" << py(yv) << "\"/>\n";
    }
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + k * (x1 - x0) / 5, yv = y0 + k * (y1 - y0) / 5;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - bottom + 17 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 3 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    os << "</g>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t s = 0; s < series.size(); ++s) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[s % 4] << "\" stroke-width=\"1\" points=\"";
        for (Eigen::Index i = 0; i < series[s].x.size(); ++i) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series[s].x[i]), py(series[s].y[i]));
            os << buf;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace nfbm::io
