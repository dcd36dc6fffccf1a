#ifndef EPIFV_LINALG_HPP
#define EPIFV_LINALG_HPP

#include <cstddef>
#include <vector>

namespace epifv {

/// Compressed-row sparse matrix. Build through SparseMatrixBuilder so the
/// entry layout (sorted columns, merged duplicates) is deterministic.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;
  bool symmetric = false;

  std::size_t nnz() const { return val.size(); }
  /// Value at (i,j), 0 if the entry is not stored.
  double at(int i, int j) const;
};

/// Accumulates (row, col, value) triplets. In symmetric mode only entries
/// with row <= col may be added; build() mirrors them, so (i,j) and (j,i)
/// are the same stored double.
class SparseMatrixBuilder {
 public:
  SparseMatrixBuilder(int n, bool symmetric);
  void add(int row, int colum, double value);
  SparseMatrix build();

 private:
  int n_;
  bool symmetric_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;    // ||Ax - b||_2
  double tolerance = 0.0;         // absolute threshold used, tol * ||b||_2
  bool converged = false;
  std::vector<double> residual_history;  // ||r||_2 at iteration 0,1,...
};

struct CgResult {
  std::vector<double> x;
  SolveReport report;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems.
/// Stops when ||Ax-b||_2 <= tol*||b||_2; report.converged is false when
/// max_iter is exhausted first. x0, when given, seeds the iteration.
CgResult cg_solve(const SparseMatrix& A, const std::vector<double>& b, double tol,
                  int max_iter, const std::vector<double>* x0 = nullptr);

}  // namespace epifv

#endif
