#include "epifv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epifv/kernels.hpp"

namespace epifv {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
  if (t_end < 0.0) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
  if (!(picard_tol > 0.0) || !(cg_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be > 0");
  if (picard_max < 1 || cg_max < 1)
    throw std::invalid_argument("SolverConfig: iteration limits must be >= 1");
  if (!(damping > 0.0) || damping > 1.0)
    throw std::invalid_argument("SolverConfig: damping must lie in (0, 1]");
}

long SolverConfig::step_count() const {
  if (t_end <= 0.0) return 0;
  const double slack = 1e-12 * std::max(1.0, t_end);
  return static_cast<long>(std::ceil((t_end - slack) / dt));
}

Field project_initial(const Mesh& mesh, const std::function<double(double, double)>& u0) {
  Field f(mesh.cell_count());
  const auto& cells = mesh.cells();
  for (std::size_t k = 0; k < cells.size(); ++k)
    f[k] = u0(cells[k].center[0], cells[k].center[1]);
  return f;
}

Field project_initial(const Mesh& mesh, const std::vector<double>& per_cell) {
  if (per_cell.size() != static_cast<std::size_t>(mesh.cell_count()))
    throw std::invalid_argument("project_initial: per-cell data does not match mesh");
  Field f(mesh.cell_count());
  f.values = per_cell;
  return f;
}

double nonlocal_argument(const Mesh& mesh, const Field& f) {
  if (f.size() != static_cast<std::size_t>(mesh.cell_count()))
    throw std::invalid_argument("nonlocal_argument: field does not match mesh");
  double s = 0.0;
  const auto& cells = mesh.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) s += cells[k].measure * f[k];
  return s;
}

std::pair<SparseMatrix, std::vector<double>> assemble_species_system(
    const Mesh& mesh, double coeff, double dt, const Field& reaction_diag, const Field& rhs) {
  const int n = mesh.cell_count();
  if (reaction_diag.size() != static_cast<std::size_t>(n) || rhs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("assemble_species_system: field size mismatch");
  if (!(coeff > 0.0)) throw std::invalid_argument("assemble_species_system: coeff must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_species_system: dt must be > 0");

  SparseMatrixBuilder builder(n, /*symmetric=*/true);
  const auto& cells = mesh.cells();
  for (int k = 0; k < n; ++k) {
    if (reaction_diag[k] < 0.0)
      throw std::invalid_argument("assemble_species_system: reaction_diag must be nonnegative");
    builder.add(k, k, cells[k].measure / dt + cells[k].measure * reaction_diag[k]);
  }
  for (const auto& face : mesh.interfaces()) {
    const double t = coeff * face.measure / face.distance;
    const int lo = std::min(face.k, face.l);
    const int hi = std::max(face.k, face.l);
    builder.add(lo, lo, t);
    builder.add(hi, hi, t);
    builder.add(lo, hi, -t);
  }
  return {builder.build(), rhs.values};
}

namespace {

struct SpeciesSolve {
  SparseMatrix A;
  std::vector<double> rhs;
};

double relative_max_change(const Field& next, const Field& prev) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    diff = std::max(diff, std::fabs(next[k] - prev[k]));
    scale = std::max(scale, std::fabs(next[k]));
  }
  return diff / std::max(scale, 1e-30);
}

}  // namespace

StepResult step(const State& state, const Mesh& mesh, const ModelParams& params,
                const std::array<DiffusionLaw, 3>& laws, const SolverConfig& cfg,
                const Sources* sources) {
  params.validate();
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(mesh.cell_count());
  if (state.u1.size() != n || state.u2.size() != n || state.u3.size() != n)
    throw std::invalid_argument("step: state does not match mesh");

  StepResult out;
  out.report.diffusion_coeff = {laws[0](nonlocal_argument(mesh, state.u1)),
                                laws[1](nonlocal_argument(mesh, state.u2)),
                                laws[2](nonlocal_argument(mesh, state.u3))};
  for (int i = 0; i < 3; ++i) {
    if (!(out.report.diffusion_coeff[i] > 0.0) || !std::isfinite(out.report.diffusion_coeff[i])) {
      out.error = "step: diffusion coefficient a_" + std::to_string(i + 1) +
                  " is not positive; the chosen law violates the lower-bound assumption";
      return out;
    }
  }

  const double dt = cfg.dt;
  const double t_new = state.time + dt;
  const bool sars = params.variant == Variant::SARS;
  const auto& cells = mesh.cells();

  // The linear parts are sweep-independent: assemble once per step.
  const Field diag1(n, params.mu);
  const Field diag2(n, params.gamma + params.mu);
  const Field diag3(n, sars ? params.mu : 0.0);
  const Field zero(n, 0.0);
  SparseMatrix A1 = assemble_species_system(mesh, out.report.diffusion_coeff[0], dt, diag1, zero).first;
  SparseMatrix A2 = assemble_species_system(mesh, out.report.diffusion_coeff[1], dt, diag2, zero).first;
  SparseMatrix A3 = assemble_species_system(mesh, out.report.diffusion_coeff[2], dt, diag3, zero).first;

  // Source samples at t^{n+1}, cell centers.
  std::vector<double> src1, src2, src3;
  if (sources) {
    src1.resize(n);
    src2.resize(n);
    src3.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = cells[k].center;
      src1[k] = sources->g1 ? sources->g1(t_new, c[0], c[1]) : 0.0;
      src2[k] = sources->g2 ? sources->g2(t_new, c[0], c[1]) : 0.0;
      src3[k] = sources->g3 ? sources->g3(t_new, c[0], c[1]) : 0.0;
    }
  }

  Field u1 = state.u1, u2 = state.u2, u3 = state.u3;  // Picard iterate, seeded at time n
  std::vector<double> rhs(n);
  double omega = cfg.damping;
  double prev_residual = std::numeric_limits<double>::infinity();

  auto damped = [&](Field& cur, const std::vector<double>& solved) {
    for (std::size_t k = 0; k < n; ++k) cur[k] += omega * (solved[k] - cur[k]);
  };

  for (int sweep = 1; sweep <= cfg.picard_max; ++sweep) {
    const Field u1_prev = u1, u2_prev = u2, u3_prev = u3;

    // u3: rhs couples to time-n data and, for SARS, the lagged treatment.
    for (std::size_t k = 0; k < n; ++k) {
      double r = state.u3[k] / dt + params.gamma * state.u2[k];
      if (sars) r += treatment(u2_prev[k], params.r);
      if (sources) r += src3[k];
      rhs[k] = cells[k].measure * r;
    }
    CgResult s3 = cg_solve(A3, rhs, cfg.cg_tol, cfg.cg_max, &u3.values);
    out.report.cg_iterations_total += s3.report.iterations;
    if (!s3.report.converged) {
      out.report.solve_u3 = std::move(s3.report);
      out.error = "step: CG failed on species 3";
      return out;
    }
    damped(u3, s3.x);

    // u2: sigma takes the time-n u1, the lagged u2, the fresh u3.
    for (std::size_t k = 0; k < n; ++k) {
      double r = state.u2[k] / dt +
                 incidence(state.u1[k], u2_prev[k], u3[k], params.alpha_incidence);
      if (sars) r -= treatment(u2_prev[k], params.r);
      if (sources) r += src2[k];
      rhs[k] = cells[k].measure * r;
    }
    CgResult s2 = cg_solve(A2, rhs, cfg.cg_tol, cfg.cg_max, &u2.values);
    out.report.cg_iterations_total += s2.report.iterations;
    if (!s2.report.converged) {
      out.report.solve_u2 = std::move(s2.report);
      out.error = "step: CG failed on species 2";
      return out;
    }
    damped(u2, s2.x);

    // u1: sigma takes the lagged u1 and the fresh u2, u3.
    for (std::size_t k = 0; k < n; ++k) {
      double r = state.u1[k] / dt -
                 incidence(u1_prev[k], u2[k], u3[k], params.alpha_incidence);
      if (sars) r += params.A;
      if (sources) r += src1[k];
      rhs[k] = cells[k].measure * r;
    }
    CgResult s1 = cg_solve(A1, rhs, cfg.cg_tol, cfg.cg_max, &u1.values);
    out.report.cg_iterations_total += s1.report.iterations;
    if (!s1.report.converged) {
      out.report.solve_u1 = std::move(s1.report);
      out.error = "step: CG failed on species 1";
      return out;
    }
    damped(u1, s1.x);

    const double residual = std::max({relative_max_change(u1, u1_prev),
                                      relative_max_change(u2, u2_prev),
                                      relative_max_change(u3, u3_prev)});
    out.report.picard_iterations = sweep;
    out.report.picard_residual = residual;
    out.report.solve_u1 = std::move(s1.report);
    out.report.solve_u2 = std::move(s2.report);
    out.report.solve_u3 = std::move(s3.report);

    if (residual <= cfg.picard_tol) {
      if (!all_finite(u1) || !all_finite(u2) || !all_finite(u3)) {
        out.error = "step: non-finite value in converged iterate";
        return out;
      }
      out.ok = true;
      out.state.u1 = std::move(u1);
      out.state.u2 = std::move(u2);
      out.state.u3 = std::move(u3);
      out.state.time = t_new;
      out.state.step = state.step + 1;
      out.report.min_value = {min_value(out.state.u1), min_value(out.state.u2),
                              min_value(out.state.u3)};
      return out;
    }

    // Stagnation late in the budget: relax harder. This is what rescues the
    // discontinuous treatment term when it flips between sweeps.
    if (sweep > cfg.picard_max / 2 && residual >= prev_residual)
      omega = std::max(omega * 0.5, 1.0 / 64.0);
    prev_residual = residual;
  }

  out.error = "step: fixed-point iteration did not converge within picard_max sweeps";
  return out;
}

std::array<double, 3> scheme_residual(const State& prev, const State& next, const Mesh& mesh,
                                      const ModelParams& params,
                                      const std::array<DiffusionLaw, 3>& laws,
                                      const SolverConfig& cfg, const Sources* sources) {
  const std::size_t n = static_cast<std::size_t>(mesh.cell_count());
  const double dt = cfg.dt;
  const bool sars = params.variant == Variant::SARS;
  const std::array<double, 3> a = {laws[0](nonlocal_argument(mesh, prev.u1)),
                                   laws[1](nonlocal_argument(mesh, prev.u2)),
                                   laws[2](nonlocal_argument(mesh, prev.u3))};

  // Transmissibility Laplacian applied to each next-field.
  std::array<std::vector<double>, 3> lap;
  for (auto& v : lap) v.assign(n, 0.0);
  const std::array<const Field*, 3> nf = {&next.u1, &next.u2, &next.u3};
  for (const auto& face : mesh.interfaces()) {
    const double t = face.measure / face.distance;
    for (int i = 0; i < 3; ++i) {
      const double flux = t * ((*nf[i])[face.l] - (*nf[i])[face.k]);
      lap[i][face.k] += flux;
      lap[i][face.l] -= flux;
    }
  }

  const auto& cells = mesh.cells();
  std::array<double, 3> res{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double m = cells[k].measure;
    const auto& c = cells[k].center;
    const double g1 = sources && sources->g1 ? sources->g1(next.time, c[0], c[1]) : 0.0;
    const double g2 = sources && sources->g2 ? sources->g2(next.time, c[0], c[1]) : 0.0;
    const double g3 = sources && sources->g3 ? sources->g3(next.time, c[0], c[1]) : 0.0;
    const double sig_full =
        incidence(next.u1[k], next.u2[k], next.u3[k], params.alpha_incidence);
    const double sig_lag =
        incidence(prev.u1[k], next.u2[k], next.u3[k], params.alpha_incidence);
    const double H = sars ? treatment(next.u2[k], params.r) : 0.0;

    double r1 = m * (next.u1[k] - prev.u1[k]) / dt - a[0] * lap[0][k] +
                m * (sig_full + params.mu * next.u1[k]) - m * g1;
    if (sars) r1 -= m * params.A;
    double r2 = m * (next.u2[k] - prev.u2[k]) / dt - a[1] * lap[1][k] -
                m * (sig_lag - (params.gamma + params.mu) * next.u2[k] - (sars ? H : 0.0)) -
                m * g2;
    double r3 = m * (next.u3[k] - prev.u3[k]) / dt - a[2] * lap[2][k] -
                m * (params.gamma * prev.u2[k] + (sars ? H - params.mu * next.u3[k] : 0.0)) -
                m * g3;
    res[0] = std::max(res[0], std::fabs(r1));
    res[1] = std::max(res[1], std::fabs(r2));
    res[2] = std::max(res[2], std::fabs(r3));
  }
  return res;
}

SeriesRow make_series_row(const State& s, const Mesh& mesh,
                          const std::array<DiffusionLaw, 3>& laws) {
  SeriesRow row;
  row.t = s.time;
  const std::array<const Field*, 3> f = {&s.u1, &s.u2, &s.u3};
  for (int i = 0; i < 3; ++i) {
    row.mass[i] = nonlocal_argument(mesh, *f[i]);
    row.a[i] = laws[i](row.mass[i]);
    row.min[i] = min_value(*f[i]);
    row.max[i] = max_value(*f[i]);
  }
  return row;
}

namespace {

double l2_sq(const Mesh& mesh, const Field& f) {
  double s = 0.0;
  const auto& cells = mesh.cells();
  for (std::size_t k = 0; k < f.size(); ++k) s += cells[k].measure * f[k] * f[k];
  return s;
}

double jump_energy(const Mesh& mesh, const Field& f) {
  double s = 0.0;
  for (const auto& face : mesh.interfaces()) {
    const double jump = f[face.l] - f[face.k];
    s += face.measure / face.distance * jump * jump;
  }
  return s;
}

}  // namespace

RunResult run(const State& initial, const Mesh& mesh, const ModelParams& params,
              const std::array<DiffusionLaw, 3>& laws, const SolverConfig& cfg,
              RunObserver* observer, const Sources* sources) {
  cfg.validate();
  params.validate();
  RunResult res;
  const long nsteps = cfg.step_count();
  res.series.reserve(nsteps + 1);

  State cur = initial;
  SeriesRow row0 = make_series_row(cur, mesh, laws);
  res.series.push_back(row0);
  if (observer) observer->on_initial(cur, row0);

  // Discrete energy envelope: exp-growth bound seeded by the initial data.
  // The growth rate alpha + gamma/2 matches the a priori estimate for the
  // base model; the SARS recruitment and treatment enter as data terms and
  // one extra Young split. The multiplier is configuration, not analysis.
  const double domain = mesh.domain_measure();
  const bool sars = params.variant == Variant::SARS;
  double base = l2_sq(mesh, cur.u1) + l2_sq(mesh, cur.u2) + l2_sq(mesh, cur.u3) +
                0.5 * params.gamma * cfg.dt * l2_sq(mesh, cur.u2);
  if (sars) base += (params.A * params.A + params.r * params.r) * domain * cfg.t_end;
  const double rate = params.alpha_incidence + 0.5 * params.gamma + (sars ? 1.0 : 0.0);
  const double growth = (rate * cfg.dt < 0.5)
                            ? std::exp(rate * cfg.t_end / (1.0 - rate * cfg.dt))
                            : std::exp(2.0 * rate * cfg.t_end);
  res.energy_envelope = cfg.envelope_multiplier * base * growth;

  auto absorb = [&](const State& s) {
    res.max_l2_sq[0] = std::max(res.max_l2_sq[0], l2_sq(mesh, s.u1));
    res.max_l2_sq[1] = std::max(res.max_l2_sq[1], l2_sq(mesh, s.u2));
    res.max_l2_sq[2] = std::max(res.max_l2_sq[2], l2_sq(mesh, s.u3));
    res.global_min = std::min({res.global_min, min_value(s.u1), min_value(s.u2), min_value(s.u3)});
  };
  res.global_min = std::min({min_value(cur.u1), min_value(cur.u2), min_value(cur.u3)});
  absorb(cur);

  for (long n = 0; n < nsteps; ++n) {
    StepResult sr = step(cur, mesh, params, laws, cfg, sources);
    res.total_picard += sr.report.picard_iterations;
    res.total_cg += sr.report.cg_iterations_total;
    if (!sr.ok) {
      res.ok = false;
      res.error = sr.error;
      res.failed_step = n;
      break;
    }
    cur = std::move(sr.state);
    cur.time = initial.time + (n + 1) * cfg.dt;  // keep the grid exact
    res.steps_completed = n + 1;

    absorb(cur);
    res.gradient_sum[0] += cfg.dt * jump_energy(mesh, cur.u1);
    res.gradient_sum[1] += cfg.dt * jump_energy(mesh, cur.u2);
    res.gradient_sum[2] += cfg.dt * jump_energy(mesh, cur.u3);

    SeriesRow row = make_series_row(cur, mesh, laws);
    res.series.push_back(row);
    if (observer) observer->on_step(cur, sr.report, row);
  }

  res.final_state = std::move(cur);
  res.envelope_ok = res.max_l2_sq[0] <= res.energy_envelope &&
                    res.max_l2_sq[1] <= res.energy_envelope &&
                    res.max_l2_sq[2] <= res.energy_envelope;
  res.nonnegativity_ok = res.global_min >= -1e-12;
  return res;
}

TranslateTable translate_diagnostics(const std::vector<State>& history, const Mesh& mesh,
                                     const std::vector<std::array<double, 2>>& shifts,
                                     const std::vector<double>& taus) {
  if (history.size() < 2) throw std::invalid_argument("translate_diagnostics: need at least two states");
  if (mesh.nx() < 1 || mesh.ny() < 1)
    throw std::invalid_argument("translate_diagnostics: requires a Cartesian mesh");
  const std::size_t n = static_cast<std::size_t>(mesh.cell_count());
  for (const auto& s : history)
    if (s.u1.size() != n || s.u2.size() != n || s.u3.size() != n)
      throw std::invalid_argument("translate_diagnostics: state does not match mesh");

  const long N = static_cast<long>(history.size()) - 1;
  const double dt = (history.back().time - history.front().time) / static_cast<double>(N);
  const int nx = mesh.nx(), ny = mesh.ny();
  const double hx = mesh.hx(), hy = mesh.hy();
  const double m = mesh.cells().front().measure;  // uniform on Cartesian builds

  auto lattice = [](double value, double h, const char* what) {
    const double q = value / h;
    const long p = std::lround(q);
    if (std::fabs(q - p) > 1e-9 * std::max(1.0, std::fabs(q)))
      throw std::invalid_argument(std::string("translate_diagnostics: ") + what +
                                  " is not a lattice multiple");
    return std::labs(p);
  };

  TranslateTable table;
  for (const auto& y : shifts) {
    const long p = lattice(y[0], hx, "shift x");
    const long q = lattice(y[1], hy, "shift y");
    TranslateTable::SpaceRow row;
    row.shift = y;
    row.magnitude = std::hypot(y[0], y[1]);
    for (long step = 1; step <= N; ++step) {
      const std::array<const Field*, 3> f = {&history[step].u1, &history[step].u2,
                                             &history[step].u3};
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (long j = 0; j + q < ny; ++j)
          for (long ii = 0; ii + p < nx; ++ii) {
            const double d =
                (*f[i])[(j + q) * nx + ii + p] - (*f[i])[j * nx + ii];
            acc += d * d;
          }
        row.value[i] += dt * m * acc;
      }
    }
    table.space.push_back(row);
  }

  for (double tau : taus) {
    const long s = lattice(tau, dt, "tau");
    TranslateTable::TimeRow row;
    row.tau = tau;
    for (long step = 1; step + s <= N; ++step) {
      const std::array<const Field*, 3> f0 = {&history[step].u1, &history[step].u2,
                                              &history[step].u3};
      const std::array<const Field*, 3> f1 = {&history[step + s].u1, &history[step + s].u2,
                                              &history[step + s].u3};
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double d = (*f1[i])[k] - (*f0[i])[k];
          acc += d * d;
        }
        row.value[i] += dt * m * acc;
      }
    }
    table.time.push_back(row);
  }
  return table;
}

}  // namespace epifv
