#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgl/grid.hpp"

namespace fgl {

// All floats serialize with 17 significant digits so runs reproduce
// byte-identically and values round-trip exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void write_field_csv(const std::filesystem::path& path,
                            const Field& f) {
  CsvWriter w(path);
  std::vector<std::string> header;
  header.push_back("x");
  if (f.grid.dim == 2) header.push_back("y");
  for (int r = 0; r < f.m; ++r) header.push_back("u" + std::to_string(r));
  w.row(header);
  for (int n = 0; n < f.grid.node_count(); ++n) {
    const auto c = f.grid.node_coords(n);
    std::vector<std::string> cells;
    cells.push_back(fmt17(c[0]));
    if (f.grid.dim == 2) cells.push_back(fmt17(c[1]));
    for (double v : f.node(n)) cells.push_back(fmt17(v));
    w.row(cells);
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace detail

// Reads a field back from the node-per-row format written above. The grid is
// reconstructed from the header (x[,y]) and the row count.
inline Field read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty field csv: " + path.string());
  const auto header = detail::split_csv_line(line);
  int dim = 0;
  std::size_t i = 0;
  for (; i < header.size() && (header[i] == "x" || header[i] == "y"); ++i)
    ++dim;
  const int m = static_cast<int>(header.size() - static_cast<std::size_t>(dim));
  if ((dim != 1 && dim != 2) || m < 1)
    throw std::runtime_error("bad field csv header: " + path.string());

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("ragged field csv row in " + path.string());
    for (std::size_t k = static_cast<std::size_t>(dim); k < cells.size(); ++k)
      values.push_back(std::stod(cells[k]));
    ++rows;
  }
  int n_side = 0;
  if (dim == 1) {
    n_side = static_cast<int>(rows);
  } else {
    n_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
    if (static_cast<std::size_t>(n_side) * n_side != rows)
      throw std::runtime_error("field csv is not a square grid: " +
                               path.string());
  }
  Field f(Grid(dim, n_side), m);
  f.v = std::move(values);
  return f;
}

}  // namespace fgl
