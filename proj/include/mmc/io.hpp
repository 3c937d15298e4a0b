#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mmc/neighborhoods.hpp"

namespace mmc {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits; parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Point-cloud CSV:
//   # key=value            metadata lines (seed is read back into the cloud)
//   x0,x1,...,x{D-1}[,label]
//   one row per point
void write_point_cloud(std::ostream& out, const PointCloud& cloud, const Metadata& metadata = {});
PointCloud read_point_cloud(std::istream& in, Metadata* metadata = nullptr);

// File variants; failures raise Error(Io) naming the path.
void save_point_cloud(const std::string& path, const PointCloud& cloud, const Metadata& metadata = {});
PointCloud load_point_cloud(const std::string& path, Metadata* metadata = nullptr);

// Labels CSV: header "label", one 1-based id per row.
void write_labels(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_labels(std::istream& in);
void save_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> load_labels(const std::string& path);

void save_text(const std::string& path, const std::string& text);

}  // namespace mmc
