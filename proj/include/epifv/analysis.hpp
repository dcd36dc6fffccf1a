#ifndef EPIFV_ANALYSIS_HPP
#define EPIFV_ANALYSIS_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "epifv/mesh.hpp"
#include "epifv/model.hpp"
#include "epifv/solver.hpp"

namespace epifv {

/// sqrt(sum_K m(K) u_K^2)
double l2_norm(const Mesh& mesh, const Field& f);

/// sqrt(sum over interfaces of tau_{K,L} (u_L - u_K)^2). Equals the
/// half-weighted ordered-pair double sum.
double h1_seminorm(const Mesh& mesh, const Field& f);

struct EquilibriumPoint {
  double u = 0.0, v = 0.0, w = 0.0;
  bool positive = false;  // flagged when any component is <= 0
};

struct Equilibria {
  EquilibriumPoint e1, e2;  // e1 takes the minus branch of the root formula
  double discriminant = 0.0;
};

struct NoRealEquilibria : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stationary points of the SARS reaction system (treatment active, v > 0).
/// Throws NoRealEquilibria when the discriminant is negative and
/// std::invalid_argument unless variant==SARS, alpha > 0 and mu > 0.
Equilibria sars_equilibria(const ModelParams& params);

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Complex3 = std::array<std::complex<double>, 3>;

/// Roots of x^3 + p x^2 + q x + r, sorted by descending real part.
Complex3 solve_cubic(double p, double q, double r);

/// Eigenvalues via the characteristic cubic, sorted by descending real part.
Complex3 eigenvalues_3x3(const Matrix3& M);

struct StabilityReport {
  Matrix3 jacobian{};
  Complex3 eigenvalues{};            // -mu plus the quadratic's roots
  double quad_b = 0.0, quad_c = 0.0; // lambda^2 + b lambda + c for the other two
  bool quadratic_coeffs_positive = false;
  bool routh_condition_holds = false;  // the printed total-population inequality
};

/// Linear stability of the reaction Jacobian at `point` = (u, v, w).
/// Throws std::invalid_argument when u+v+w <= 0.
StabilityReport stability(const ModelParams& params, const std::array<double, 3>& point);

struct TuringScan {
  bool base_point_stable = false;
  bool unstable = false;             // eigenvalue-scan verdict
  double witness_k2 = 0.0;           // wavenumber of the largest growth rate
  double max_growth = 0.0;           // max over the grid of max Re eig
  bool polynomial_applicable = false;   // requires d1 == d3
  double polynomial_value = 0.0;
  bool polynomial_predicts_instability = false;
};

/// Diffusion-driven instability scan: true when some k^2 in the grid makes
/// an eigenvalue of J - k^2 diag(d1,d2,d3) cross into the right half plane.
/// When d1 == d3 the report also carries the printed reference polynomial
/// for the worked SARS parameter set; the two verdicts are reported side by
/// side and never reconciled silently.
TuringScan turing_scan(const ModelParams& params, const std::array<double, 3>& point,
                       double d1, double d2, double d3, const std::vector<double>& k2_grid);

/// Log-spaced wavenumbers-squared between the first and n_max-th Neumann box
/// mode of a square of side `length`.
std::vector<double> default_k2_grid(double length, int n_max = 64, int points = 256);

/// Reference polynomial printed for the worked SARS example (d1 == d3):
/// (5.114590203 + 9 d1) d2 + 3.289620038 - 2.20024467 d1, instability when
/// negative.
double turing_reference_polynomial(double d1, double d2);

/// Manufactured problem: exact per-species solutions plus the compensating
/// sources that make them solve the continuous system.
struct ManufacturedProblem {
  std::array<std::function<double(double t, double x, double y)>, 3> exact;
  Sources sources;
};

/// Smooth profile 2 + cos(pi x/lx) cos(pi y/ly) e^{-t} for every species,
/// with sources derived from the reaction terms and the law evaluated at the
/// profile's constant integral 2 lx ly.
ManufacturedProblem mms_smooth(const ModelParams& params, const std::array<DiffusionLaw, 3>& laws,
                               double lx, double ly);

/// Space- and time-constant state with constant compensating sources; the
/// scheme reproduces it exactly.
ManufacturedProblem mms_constant(const ModelParams& params, const std::array<double, 3>& values);

struct ConvergenceLevel {
  int nx = 0, ny = 0;
  double dt = 0.0;
};

struct ConvergenceRow {
  double h = 0.0;
  double dt = 0.0;
  std::array<double, 3> error{0.0, 0.0, 0.0};  // L2(Q_T) per species
  std::array<double, 3> order{0.0, 0.0, 0.0};  // log2 ratio vs previous level
  bool has_error = false;
  bool has_order = false;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  bool manufactured = false;
};

/// Refinement study on (0,lx)x(0,ly). With a manufactured problem the error
/// is against the exact solution at cell centers; without one, successive
/// nested levels are compared (grids must then double). Levels must satisfy
/// dt proportional to h. Throws std::invalid_argument on fewer than 3 levels.
ConvergenceResult convergence_study(const ModelParams& params,
                                    const std::array<DiffusionLaw, 3>& laws, double lx, double ly,
                                    const SolverConfig& base_cfg,
                                    const std::vector<ConvergenceLevel>& levels,
                                    const ManufacturedProblem* mms);

}  // namespace epifv

#endif
