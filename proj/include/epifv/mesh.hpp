#ifndef EPIFV_MESH_HPP
#define EPIFV_MESH_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "epifv/field.hpp"

namespace epifv {

using Vec3 = std::array<double, 3>;

struct CellRecord {
  Vec3 center{0.0, 0.0, 0.0};
  double measure = 0.0;  // m(K)
  double diam = 0.0;     // circumscribed diagonal, used by the regularity ratio
};

/// Interior interface between cells k and l. `normal` points from k to l.
struct InterfaceRecord {
  int k = -1;
  int l = -1;
  double measure = 0.0;   // m(sigma_{K,L})
  double distance = 0.0;  // d(K,L), center-to-center
  Vec3 normal{0.0, 0.0, 0.0};
};

/// Boundary face of `cell`; zero-flux Neumann, so it carries no unknown.
struct BoundaryFace {
  int cell = -1;
  double measure = 0.0;
};

/// Admissible finite-volume mesh: cell centers orthogonal to shared
/// interfaces, so fluxes are two-point differences scaled by m(sigma)/d.
/// Immutable after construction; safe to share across threads.
class Mesh {
 public:
  /// Uniform Cartesian grid of nx*ny cells on (0,lx)x(0,ly).
  /// Cells are stored row-major (x fastest); the interface list is
  /// x-faces then y-faces, lexicographic, so assembly order is fixed.
  static Mesh cartesian(int nx, int ny, double lx, double ly);

  int cell_count() const { return static_cast<int>(cells_.size()); }
  const std::vector<CellRecord>& cells() const { return cells_; }
  const std::vector<InterfaceRecord>& interfaces() const { return interfaces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_; }
  int dimension() const { return dimension_; }

  /// Sum of all cell measures.
  double domain_measure() const;

  /// m(sigma_{K,L}) / d(K,L) for one interface. Throws std::out_of_range.
  double transmissibility(std::size_t iface) const;

  /// min over interfaces and both orientations of d(K,L)/diam(K).
  /// Empty when the mesh has no interior interfaces.
  std::optional<double> regularity_ratio() const;

  // Cartesian metadata (zero/empty for non-Cartesian meshes built by hand).
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }

  // Mutable access for building general admissible meshes in tests.
  std::vector<CellRecord>& mutable_cells() { return cells_; }
  std::vector<InterfaceRecord>& mutable_interfaces() { return interfaces_; }
  std::vector<BoundaryFace>& mutable_boundary() { return boundary_; }
  void set_dimension(int d) { dimension_ = d; }

 private:
  std::vector<CellRecord> cells_;
  std::vector<InterfaceRecord> interfaces_;
  std::vector<BoundaryFace> boundary_;
  int dimension_ = 2;
  int nx_ = 0, ny_ = 0;
  double hx_ = 0.0, hy_ = 0.0, lx_ = 0.0, ly_ = 0.0;
};

/// Per-diamond gradient vectors, one entry per interior interface:
/// (m(sigma)/d)(u_L - u_K) eta_{K,L}. Boundary diamonds carry zero and are
/// not listed. Throws std::invalid_argument on size mismatch.
std::vector<Vec3> discrete_gradient(const Mesh& mesh, const Field& f);

}  // namespace epifv

#endif
