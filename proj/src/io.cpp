#include "epifv/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace epifv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot_csv(const std::string& path, const Mesh& mesh, const State& state) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("write_snapshot_csv: cannot open " + path);
  f << "x,y,u1,u2,u3\n";
  const auto& cells = mesh.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    f << format_double(cells[k].center[0]) << ',' << format_double(cells[k].center[1]) << ','
      << format_double(state.u1[k]) << ',' << format_double(state.u2[k]) << ','
      << format_double(state.u3[k]) << '\n';
  }
  if (!f) throw std::runtime_error("write_snapshot_csv: write failed for " + path);
}

namespace {

std::vector<double> split_doubles(const std::string& line, std::size_t expected,
                                  const std::string& path, std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(expected) + " columns");
  return out;
}

}  // namespace

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_snapshot_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line != "x,y,u1,u2,u3")
    throw std::runtime_error(path + ":1: expected header x,y,u1,u2,u3");
  SnapshotData data;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto v = split_doubles(line, 5, path, lineno);
    data.x.push_back(v[0]);
    data.y.push_back(v[1]);
    data.u[0].push_back(v[2]);
    data.u[1].push_back(v[3]);
    data.u[2].push_back(v[4]);
  }
  return data;
}

void write_timeseries_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("write_timeseries_csv: cannot open " + path);
  f << "t,a1,a2,a3,mass1,mass2,mass3,min_u1,min_u2,min_u3\n";
  for (const auto& r : rows) {
    f << format_double(r.t);
    for (int i = 0; i < 3; ++i) f << ',' << format_double(r.a[i]);
    for (int i = 0; i < 3; ++i) f << ',' << format_double(r.mass[i]);
    for (int i = 0; i < 3; ++i) f << ',' << format_double(r.min[i]);
    f << '\n';
  }
  if (!f) throw std::runtime_error("write_timeseries_csv: write failed for " + path);
}

}  // namespace epifv
