#ifndef EPIFV_SOLVER_HPP
#define EPIFV_SOLVER_HPP

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epifv/field.hpp"
#include "epifv/linalg.hpp"
#include "epifv/mesh.hpp"
#include "epifv/model.hpp"

namespace epifv {

/// Discrete state: one field per species plus its position on the time grid.
struct State {
  Field u1, u2, u3;
  double time = 0.0;
  long step = 0;
};

struct SolverConfig {
  double dt = 0.0;
  double t_end = 0.0;
  double picard_tol = 1e-8;
  int picard_max = 200;
  double cg_tol = 1e-10;
  int cg_max = 20000;
  double damping = 1.0;              // fixed-point relaxation, halved on stagnation
  double envelope_multiplier = 10.0; // slack on the discrete energy bound

  void validate() const;
  /// Smallest N with N*dt >= t_end (up to round-off slack).
  long step_count() const;
};

struct StepReport {
  int picard_iterations = 0;
  double picard_residual = 0.0;
  std::array<double, 3> diffusion_coeff{0.0, 0.0, 0.0};  // a_i frozen at time n
  std::array<double, 3> min_value{0.0, 0.0, 0.0};        // per species, after the step
  SolveReport solve_u1, solve_u2, solve_u3;              // last Picard sweep
  long cg_iterations_total = 0;
};

struct StepResult {
  bool ok = false;
  std::string error;
  State state;
  StepReport report;
};

/// Optional manufactured-solution sources, evaluated at (t^{n+1}, x_K) and
/// added to each equation as m(K)*g_i.
struct Sources {
  std::function<double(double t, double x, double y)> g1, g2, g3;
};

/// Cell averages of u0; function input uses the cell-center midpoint rule.
Field project_initial(const Mesh& mesh, const std::function<double(double, double)>& u0);
Field project_initial(const Mesh& mesh, const std::vector<double>& per_cell);

/// Measure-weighted sum over cells, the discrete integral feeding a_i.
double nonlocal_argument(const Mesh& mesh, const Field& f);

/// Backward-Euler system for one species at fixed diffusion coefficient:
/// diagonal m(K)/dt + m(K)*reaction_diag_K plus the coeff-scaled
/// transmissibility Laplacian. The rhs is passed through unchanged.
std::pair<SparseMatrix, std::vector<double>> assemble_species_system(
    const Mesh& mesh, double coeff, double dt, const Field& reaction_diag, const Field& rhs);

/// One implicit step of the coupled scheme: diffusion coefficients frozen at
/// time n, inner fixed-point sweeps solving u3, u2, u1 in turn with sigma
/// and H lagged to the previous iterate, each inner system linear SPD.
StepResult step(const State& state, const Mesh& mesh, const ModelParams& params,
                const std::array<DiffusionLaw, 3>& laws, const SolverConfig& cfg,
                const Sources* sources = nullptr);

/// Max-norm residual of the three discrete equations for a candidate step
/// next (at time n+1) given prev (at time n). Diagnostic for tests.
std::array<double, 3> scheme_residual(const State& prev, const State& next, const Mesh& mesh,
                                      const ModelParams& params,
                                      const std::array<DiffusionLaw, 3>& laws,
                                      const SolverConfig& cfg, const Sources* sources = nullptr);

struct SeriesRow {
  double t = 0.0;
  std::array<double, 3> a{0.0, 0.0, 0.0};     // diffusion coefficients at this state
  std::array<double, 3> mass{0.0, 0.0, 0.0};  // measure-weighted totals
  std::array<double, 3> min{0.0, 0.0, 0.0};
  std::array<double, 3> max{0.0, 0.0, 0.0};
};

class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_initial(const State&, const SeriesRow&) {}
  virtual void on_step(const State&, const StepReport&, const SeriesRow&) {}
};

/// Collects every state of a run; used by the translate diagnostics.
class StateHistory : public RunObserver {
 public:
  void on_initial(const State& s, const SeriesRow&) override { states.push_back(s); }
  void on_step(const State& s, const StepReport&, const SeriesRow&) override { states.push_back(s); }
  std::vector<State> states;
};

struct RunResult {
  bool ok = true;
  std::string error;
  long failed_step = -1;
  long steps_completed = 0;
  State final_state;
  std::vector<SeriesRow> series;  // one row per time level, t=0 included

  // Monitors.
  std::array<double, 3> max_l2_sq{0.0, 0.0, 0.0};     // max_n sum_K m(K) u_K^2
  std::array<double, 3> gradient_sum{0.0, 0.0, 0.0};  // sum_n dt sum_if tau (jump)^2
  double energy_envelope = 0.0;  // configured multiple of the Gronwall bound
  bool envelope_ok = true;
  double global_min = 0.0;        // min cell value over the whole run
  bool nonnegativity_ok = true;   // global_min >= -1e-12
  long total_picard = 0;
  long total_cg = 0;
};

/// Advances step_count() implicit steps, recording one series row per time
/// level and feeding the observer. Stops at the first failed step; the
/// result then carries the failing index and the partial series.
RunResult run(const State& initial, const Mesh& mesh, const ModelParams& params,
              const std::array<DiffusionLaw, 3>& laws, const SolverConfig& cfg,
              RunObserver* observer = nullptr, const Sources* sources = nullptr);

SeriesRow make_series_row(const State& s, const Mesh& mesh,
                          const std::array<DiffusionLaw, 3>& laws);

struct TranslateTable {
  struct SpaceRow {
    std::array<double, 2> shift{0.0, 0.0};
    double magnitude = 0.0;
    std::array<double, 3> value{0.0, 0.0, 0.0};  // squared space-translate integrals
  };
  struct TimeRow {
    double tau = 0.0;
    std::array<double, 3> value{0.0, 0.0, 0.0};  // squared time-translate integrals
  };
  std::vector<SpaceRow> space;
  std::vector<TimeRow> time;
};

/// Exact translate integrals of the piecewise-constant reconstruction over a
/// stored run. Shifts must be integer multiples of the cell size and taus
/// integer multiples of the time step; anything else is rejected.
TranslateTable translate_diagnostics(const std::vector<State>& history, const Mesh& mesh,
                                     const std::vector<std::array<double, 2>>& shifts,
                                     const std::vector<double>& taus);

}  // namespace epifv

#endif
