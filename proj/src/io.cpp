#include "mmc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mmc/error.hpp"

namespace mmc {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::InvalidInput, "not an integer: '" + text + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || t.empty()) throw Error(ErrorKind::InvalidInput, "not a number: '" + text + "'");
  return value;
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
  if (cloud.seed && std::none_of(metadata.begin(), metadata.end(), [](const auto& kv) { return kv.first == "seed"; })) {
    out << "# seed=" << *cloud.seed << '\n';
  }
  for (Eigen::Index k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  if (cloud.labels) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index k = 0; k < cloud.dim(); ++k) {
      out << (k ? "," : "") << format_double(cloud.coords(static_cast<Eigen::Index>(i), k));
    }
    if (cloud.labels) out << ',' << (*cloud.labels)[i];
    out << '\n';
  }
}

PointCloud read_point_cloud(std::istream& in, Metadata* metadata) {
  PointCloud cloud;
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (metadata) metadata->emplace_back(key, value);
      if (key == "seed") cloud.seed = std::stoull(value);
      continue;
    }
    header = split(line, ',');
    break;
  }
  if (header.empty()) throw Error(ErrorKind::InvalidInput, "point cloud CSV has no header row");
  const bool has_labels = trim(header.back()) == "label";
  const std::size_t dim = header.size() - (has_labels ? 1 : 0);
  if (dim == 0) throw Error(ErrorKind::InvalidInput, "point cloud CSV has no coordinate columns");
  for (std::size_t k = 0; k < dim; ++k) {
    if (trim(header[k]) != "x" + std::to_string(k)) {
      throw Error(ErrorKind::InvalidInput, "unexpected column '" + header[k] + "' in header");
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " fields");
    }
    for (std::size_t k = 0; k < dim; ++k) values.push_back(parse_double(cells[k]));
    if (has_labels) labels.push_back(parse_int(trim(cells.back())));
  }
  const auto n = static_cast<Eigen::Index>(values.size() / dim);
  cloud.coords = Eigen::Map<const PointMatrix>(values.data(), n, static_cast<Eigen::Index>(dim));
  if (has_labels) cloud.labels = std::move(labels);
  cloud.validate();
  return cloud;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

void save_point_cloud(const std::string& path, const PointCloud& cloud, const Metadata& metadata) {
  std::ostringstream text;
  write_point_cloud(text, cloud, metadata);
  save_text(path, text.str());
}

PointCloud load_point_cloud(const std::string& path, Metadata* metadata) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  try {
    return read_point_cloud(in, metadata);
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, "'" + path + "': " + e.what());
  }
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(std::istream& in) {
  std::string line;
  bool header = false;
  std::vector<int> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "label") throw Error(ErrorKind::InvalidInput, "labels CSV must start with a 'label' header");
      header = true;
      continue;
    }
    out.push_back(parse_int(line));
  }
  if (!header) throw Error(ErrorKind::InvalidInput, "labels CSV has no header");
  return out;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
  std::ostringstream text;
  write_labels(text, labels);
  save_text(path, text.str());
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_labels(in);
}

}  // namespace mmc
