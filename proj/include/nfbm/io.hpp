#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "nfbm/simulation.hpp"

namespace nfbm::io {

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

void write_path_csv(std::ostream& os, const SamplePath& path);
void write_ensemble_csv(std::ostream& os, const std::vector<SamplePath>& paths);

// Rows of a numeric CSV with a header line; throws std::ios_base::failure on bad input.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const;
};
Table read_csv(std::istream& is);
Table read_csv_file(const std::string& path);

struct SvgSeries {
    Eigen::VectorXd x, y;
};
// Polyline plot in a 800x400 viewBox with axis ticks.
void write_svg(std::ostream& os, const std::string& title, const std::vector<SvgSeries>& series);

}  // namespace nfbm::io
