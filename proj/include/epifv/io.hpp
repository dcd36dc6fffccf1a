#ifndef EPIFV_IO_HPP
#define EPIFV_IO_HPP

#include <array>
#include <string>
#include <vector>

#include "epifv/mesh.hpp"
#include "epifv/solver.hpp"

namespace epifv {

/// Shortest decimal that round-trips the double (17 significant digits).
std::string format_double(double v);

/// CSV `x,y,u1,u2,u3`, one row per cell in mesh storage order.
void write_snapshot_csv(const std::string& path, const Mesh& mesh, const State& state);

struct SnapshotData {
  std::vector<double> x, y;
  std::array<std::vector<double>, 3> u;
};

/// Reads the snapshot format back; throws std::runtime_error on malformed
/// input. Values parse to the exact doubles that were written.
SnapshotData read_snapshot_csv(const std::string& path);

/// CSV `t,a1,a2,a3,mass1,mass2,mass3,min_u1,min_u2,min_u3`.
void write_timeseries_csv(const std::string& path, const std::vector<SeriesRow>& rows);

}  // namespace epifv

#endif
