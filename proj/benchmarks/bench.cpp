// Timing comparison of the OpenMP kernels against the serial reference:
// raw spmv on the five-point assembly, then full implicit steps.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "epifv/kernels.hpp"
#include "epifv/linalg.hpp"
#include "epifv/mesh.hpp"
#include "epifv/model.hpp"
#include "epifv/rng.hpp"
#include "epifv/solver.hpp"

using namespace epifv;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double bench_spmv(const SparseMatrix& A, const std::vector<double>& x, int reps, bool parallel) {
  kernels::set_parallel(parallel);
  std::vector<double> y(x.size());
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) kernels::spmv(A, x.data(), y.data());
  return seconds_since(t0);
}

double bench_steps(const Mesh& mesh, const State& init, const ModelParams& params,
                   const std::array<DiffusionLaw, 3>& laws, const SolverConfig& cfg, int reps,
                   bool parallel) {
  kernels::set_parallel(parallel);
  const auto t0 = std::chrono::steady_clock::now();
  State cur = init;
  for (int i = 0; i < reps; ++i) {
    StepResult r = step(cur, mesh, params, laws, cfg);
    if (!r.ok) {
      std::fprintf(stderr, "step failed: %s\n", r.error.c_str());
      break;
    }
    cur = std::move(r.state);
  }
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 256;
  const int spmv_reps = 200;
  const int step_reps = 5;

  Mesh mesh = Mesh::cartesian(n, n, 1.0, 1.0);
  const Field diag(mesh.cell_count(), 1.0);
  const Field zero(mesh.cell_count(), 0.0);
  SparseMatrix A = assemble_species_system(mesh, 0.1, 0.01, diag, zero).first;

  SplitMix64 rng(7);
  std::vector<double> x(mesh.cell_count());
  for (auto& v : x) v = rng.uniform();

  std::printf("grid %dx%d (%d cells, %zu nnz)\n", n, n, mesh.cell_count(), A.nnz());

  const double s_serial = bench_spmv(A, x, spmv_reps, false);
  const double s_omp = bench_spmv(A, x, spmv_reps, true);
  std::printf("%-22s serial %8.3f ms/op   openmp %8.3f ms/op   speedup %.2fx\n", "spmv",
              1e3 * s_serial / spmv_reps, 1e3 * s_omp / spmv_reps, s_serial / s_omp);

  ModelParams params;
  params.alpha_incidence = 2.0;
  params.mu = 0.01;
  params.gamma = 1.0;
  const std::array<DiffusionLaw, 3> laws = {DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1)};
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = 0.5;

  State init;
  init.u1 = Field(mesh.cell_count(), 0.01);
  init.u2 = project_initial(mesh, [](double xx, double yy) {
    return 1.0 / std::cosh(20.0 * (xx - 0.25)) / std::cosh(20.0 * (yy - 0.25));
  });
  init.u3 = Field(mesh.cell_count(), 0.0);

  const double t_serial = bench_steps(mesh, init, params, laws, cfg, step_reps, false);
  const double t_omp = bench_steps(mesh, init, params, laws, cfg, step_reps, true);
  std::printf("%-22s serial %8.3f ms/op   openmp %8.3f ms/op   speedup %.2fx\n", "implicit step",
              1e3 * t_serial / step_reps, 1e3 * t_omp / step_reps, t_serial / t_omp);

  kernels::set_parallel(true);
  return 0;
}
