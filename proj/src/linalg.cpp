#include "epifv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epifv/kernels.hpp"

namespace epifv {

double SparseMatrix::at(int i, int j) const {
  for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col[k] == j) return val[k];
  return 0.0;
}

SparseMatrixBuilder::SparseMatrixBuilder(int n, bool symmetric)
    : n_(n), symmetric_(symmetric), rows_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("SparseMatrixBuilder: negative dimension");
}

void SparseMatrixBuilder::add(int row, int column, double value) {
  if (row < 0 || row >= n_ || column < 0 || column >= n_)
    throw std::out_of_range("SparseMatrixBuilder::add: index out of range");
  if (symmetric_ && row > column)
    throw std::invalid_argument("SparseMatrixBuilder::add: symmetric mode takes upper-triangle entries only");
  rows_[row].emplace_back(column, value);
}

SparseMatrix SparseMatrixBuilder::build() {
  if (symmetric_) {
    // Mirror strictly-upper entries so (i,j) and (j,i) hold the same double.
    // Entries with first > i are the originals; mirrored copies land below
    // the diagonal of their row and are skipped when that row is reached.
    for (int i = 0; i < n_; ++i) {
      const std::size_t count = rows_[i].size();
      for (std::size_t k = 0; k < count; ++k)
        if (rows_[i][k].first > i) rows_[rows_[i][k].first].emplace_back(i, rows_[i][k].second);
    }
  }
  SparseMatrix A;
  A.n = n_;
  A.symmetric = symmetric_;
  A.row_ptr.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) {
    auto& r = rows_[i];
    std::sort(r.begin(), r.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicates in place
    std::size_t out = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (out > 0 && r[out - 1].first == r[k].first) {
        r[out - 1].second += r[k].second;
      } else {
        r[out++] = r[k];
      }
    }
    r.resize(out);
    for (const auto& [c, v] : r) {
      A.col.push_back(c);
      A.val.push_back(v);
    }
    A.row_ptr[i + 1] = static_cast<int>(A.col.size());
  }
  rows_.clear();
  return A;
}

CgResult cg_solve(const SparseMatrix& A, const std::vector<double>& b, double tol,
                  int max_iter, const std::vector<double>* x0) {
  const std::size_t n = b.size();
  if (A.n != static_cast<int>(n)) throw std::invalid_argument("cg_solve: dimension mismatch");
  if (x0 && x0->size() != n) throw std::invalid_argument("cg_solve: x0 dimension mismatch");

  CgResult res;
  res.x.assign(n, 0.0);
  auto& rep = res.report;

  const double bnorm = std::sqrt(kernels::dot(n, b.data(), b.data()));
  rep.tolerance = tol * bnorm;
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    return res;  // x = 0 solves exactly
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = A.at(static_cast<int>(i), static_cast<int>(i));
    if (!(d > 0.0)) throw std::invalid_argument("cg_solve: nonpositive diagonal, matrix not SPD");
    diag[i] = d;
  }

  std::vector<double> r(n), z(n), p(n), Ap(n);
  if (x0) {
    res.x = *x0;
    kernels::spmv(A, res.x.data(), Ap.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  } else {
    r = b;
  }

  double rnorm = std::sqrt(kernels::dot(n, r.data(), r.data()));
  rep.residual_history.push_back(rnorm);
  if (rnorm <= rep.tolerance) {
    rep.converged = true;
    rep.final_residual = rnorm;
    return res;
  }

  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = kernels::dot(n, r.data(), z.data());

  for (int it = 1; it <= max_iter; ++it) {
    kernels::spmv(A, p.data(), Ap.data());
    const double pAp = kernels::dot(n, p.data(), Ap.data());
    if (!(pAp > 0.0)) break;  // not SPD or breakdown
    const double alpha = rz / pAp;
    kernels::axpby(n, alpha, p.data(), 1.0, res.x.data());
    kernels::axpby(n, -alpha, Ap.data(), 1.0, r.data());

    rnorm = std::sqrt(kernels::dot(n, r.data(), r.data()));
    rep.residual_history.push_back(rnorm);
    rep.iterations = it;
    bool restart = false;
    if (rnorm <= rep.tolerance) {
      // Guard against recurrence drift: accept only on the true residual.
      kernels::spmv(A, res.x.data(), Ap.data());
      for (std::size_t i = 0; i < n; ++i) z[i] = b[i] - Ap[i];
      const double true_norm = std::sqrt(kernels::dot(n, z.data(), z.data()));
      rep.residual_history.back() = true_norm;
      if (true_norm <= rep.tolerance) {
        rep.converged = true;
        rep.final_residual = true_norm;
        return res;
      }
      r = z;  // continue from the true residual
      rnorm = true_norm;
      restart = true;
    }

    const double rz_old = rz;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    rz = kernels::dot(n, r.data(), z.data());
    if (restart) {
      p = z;
    } else {
      kernels::add_scaled(n, z.data(), rz / rz_old, p.data(), p.data());
    }
  }

  rep.final_residual = rnorm;
  rep.converged = false;
  return res;
}

}  // namespace epifv
