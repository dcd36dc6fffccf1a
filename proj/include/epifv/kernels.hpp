#ifndef EPIFV_KERNELS_HPP
#define EPIFV_KERNELS_HPP

#include <cstddef>

namespace epifv {

struct SparseMatrix;

// Data-parallel inner loops. Every parallel kernel partitions work so that
// each output element is produced by exactly one serial per-element loop,
// which makes results bitwise identical to the serial reference for any
// thread count. Reductions (dot, weighted_sum) are intentionally serial
// with a fixed left-to-right order: the simulation contract is
// run-to-run determinism, and those sums are O(n) next to the O(nnz) work.
namespace kernels {

/// Disable/enable the OpenMP paths at runtime (tests compare both).
void set_parallel(bool enabled);
bool parallel_enabled();

/// y = A x
void spmv(const SparseMatrix& A, const double* x, double* y);

/// y = a*x + b*y
void axpby(std::size_t n, double a, const double* x, double b, double* y);

/// out[i] = x[i] + a*y[i]
void add_scaled(std::size_t n, const double* x, double a, const double* y, double* out);

/// Left-to-right sum of x[i]*y[i]; serial by contract.
double dot(std::size_t n, const double* x, const double* y);

/// Left-to-right sum of w[i]*x[i]; serial by contract.
double weighted_sum(std::size_t n, const double* w, const double* x);

/// Serial reference implementations of the parallel kernels above.
namespace serial {
void spmv(const SparseMatrix& A, const double* x, double* y);
void axpby(std::size_t n, double a, const double* x, double b, double* y);
void add_scaled(std::size_t n, const double* x, double a, const double* y, double* out);
}  // namespace serial

}  // namespace kernels
}  // namespace epifv

#endif
