#include "epifv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epifv {

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

double min_value(const Field& f) {
  double m = f.values.empty() ? 0.0 : f.values.front();
  for (double v : f.values) m = std::min(m, v);
  return m;
}

double max_value(const Field& f) {
  double m = f.values.empty() ? 0.0 : f.values.front();
  for (double v : f.values) m = std::max(m, v);
  return m;
}

bool all_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

Mesh Mesh::cartesian(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("Mesh::cartesian: nx, ny must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Mesh::cartesian: lx, ly must be > 0");

  Mesh m;
  m.nx_ = nx;
  m.ny_ = ny;
  m.lx_ = lx;
  m.ly_ = ly;
  const double hx = lx / nx;
  const double hy = ly / ny;
  m.hx_ = hx;
  m.hy_ = hy;
  m.dimension_ = 2;

  const double measure = hx * hy;
  const double diam = std::sqrt(hx * hx + hy * hy);

  m.cells_.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.cells_.push_back({{(i + 0.5) * hx, (j + 0.5) * hy, 0.0}, measure, diam});

  auto id = [nx](int i, int j) { return j * nx + i; };

  // x-faces: between (i,j) and (i+1,j); measure is the shared edge length hy.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      m.interfaces_.push_back({id(i, j), id(i + 1, j), hy, hx, {1.0, 0.0, 0.0}});
  // y-faces: between (i,j) and (i,j+1).
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.interfaces_.push_back({id(i, j), id(i, j + 1), hx, hy, {0.0, 1.0, 0.0}});

  // Boundary faces, bottom/top rows then left/right columns.
  for (int i = 0; i < nx; ++i) {
    m.boundary_.push_back({id(i, 0), hx});
    m.boundary_.push_back({id(i, ny - 1), hx});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_.push_back({id(0, j), hy});
    m.boundary_.push_back({id(nx - 1, j), hy});
  }
  return m;
}

double Mesh::domain_measure() const {
  double s = 0.0;
  for (const auto& c : cells_) s += c.measure;
  return s;
}

double Mesh::transmissibility(std::size_t iface) const {
  if (iface >= interfaces_.size()) throw std::out_of_range("Mesh::transmissibility: bad interface index");
  const auto& f = interfaces_[iface];
  return f.measure / f.distance;
}

std::optional<double> Mesh::regularity_ratio() const {
  if (interfaces_.empty()) return std::nullopt;
  double ratio = std::numeric_limits<double>::infinity();
  for (const auto& f : interfaces_) {
    ratio = std::min(ratio, f.distance / cells_[f.k].diam);
    ratio = std::min(ratio, f.distance / cells_[f.l].diam);
  }
  return ratio;
}

std::vector<Vec3> discrete_gradient(const Mesh& mesh, const Field& f) {
  if (f.size() != static_cast<std::size_t>(mesh.cell_count()))
    throw std::invalid_argument("discrete_gradient: field does not match mesh");
  std::vector<Vec3> grad(mesh.interfaces().size());
  const auto& ifaces = mesh.interfaces();
  for (std::size_t e = 0; e < ifaces.size(); ++e) {
    const auto& face = ifaces[e];
    const double scale = face.measure / face.distance * (f[face.l] - f[face.k]);
    grad[e] = {scale * face.normal[0], scale * face.normal[1], scale * face.normal[2]};
  }
  return grad;
}

}  // namespace epifv
