#ifndef EPIFV_FIELD_HPP
#define EPIFV_FIELD_HPP

#include <cstddef>
#include <vector>

namespace epifv {

/// One scalar value per mesh cell, indexed like Mesh::cells().
struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }

  double* data() { return values.data(); }
  const double* data() const { return values.data(); }

  bool operator==(const Field&) const = default;
};

/// Max over cells of |f_K|.
double max_abs(const Field& f);

/// Smallest and largest cell values.
double min_value(const Field& f);
double max_value(const Field& f);

/// True when every cell value is finite (no NaN/Inf).
bool all_finite(const Field& f);

}  // namespace epifv

#endif
