// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion carries its own runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "epifv/analysis.hpp"
#include "epifv/cli.hpp"
#include "epifv/config.hpp"
#include "epifv/io.hpp"
#include "epifv/rng.hpp"
#include "epifv/solver.hpp"

using namespace epifv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& msg) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void note(const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

ModelParams example2_params() {
  ModelParams p;
  p.variant = Variant::SARS;
  p.A = 3.0;
  p.mu = 0.3;
  p.alpha_incidence = 3.8;
  p.r = 0.5;
  p.gamma = 0.8;
  return p;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "epifv_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// --- criterion 1: equilibrium reproduction through the CLI command ---------

Outcome criterion_equilibria() {
  Outcome out;
  std::ostringstream text;
  if (cli::cmd_equilibria(example2_params(), {}, text) != 0) {
    out.require(false, "cmd_equilibria returned nonzero");
    return out;
  }

  const std::array<double, 3> expected_e1 = {7.217163781, 0.3044098832, 2.478426355};
  const std::array<double, 3> expected_e2 = {4.010906415, 1.178843705, 4.810249881};
  std::array<double, 3> got_e1{}, got_e2{};
  bool saw1 = false, saw2 = false;

  std::istringstream lines(text.str());
  std::string line;
  while (std::getline(lines, line)) {
    double alpha, u, v, w;
    int idx;
    if (std::sscanf(line.c_str(), "%lf E%d %lf %lf %lf", &alpha, &idx, &u, &v, &w) == 5) {
      if (idx == 1) {
        got_e1 = {u, v, w};
        saw1 = true;
      } else if (idx == 2) {
        got_e2 = {u, v, w};
        saw2 = true;
      }
    }
  }
  out.require(saw1 && saw2, "E1/E2 rows missing from command output");
  for (int i = 0; i < 3 && saw1 && saw2; ++i) {
    out.require(std::fabs(got_e1[i] - expected_e1[i]) <= 1e-6,
                "E1 component " + std::to_string(i + 1) + " off by " +
                    fmt(std::fabs(got_e1[i] - expected_e1[i])));
    out.require(std::fabs(got_e2[i] - expected_e2[i]) <= 1e-6,
                "E2 component " + std::to_string(i + 1) + " off by " +
                    fmt(std::fabs(got_e2[i] - expected_e2[i])));
  }

  // runtime: mean over repeated evaluations of the underlying computation
  const int reps = 1000;
  const double t0 = now_seconds();
  double sink = 0.0;
  for (int i = 0; i < reps; ++i) {
    const Equilibria eq = sars_equilibria(example2_params());
    sink += stability(example2_params(), {eq.e2.u, eq.e2.v, eq.e2.w}).quad_b;
  }
  const double mean = (now_seconds() - t0) / reps;
  out.require(mean < 1e-3, "mean evaluation took " + fmt(mean) + " s");
  out.note("mean eval " + fmt(mean * 1e6) + " us" + (sink == 0.0 ? " " : ""));
  return out;
}

// --- criterion 2: stability verdicts + two-route agreement -----------------

Outcome criterion_stability() {
  Outcome out;
  const ModelParams p = example2_params();
  const Equilibria eq = sars_equilibria(p);
  const StabilityReport r1 = stability(p, {eq.e1.u, eq.e1.v, eq.e1.w});
  const StabilityReport r2 = stability(p, {eq.e2.u, eq.e2.v, eq.e2.w});
  out.require(r2.routh_condition_holds, "E2 must pass the stability condition");
  out.require(!r1.routh_condition_holds, "E1 must fail the stability condition");

  SplitMix64 rng(20240817);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    ModelParams q;
    q.variant = Variant::SARS;
    q.alpha_incidence = 0.1 + 5.0 * rng.uniform();
    q.mu = 0.05 + 2.0 * rng.uniform();
    q.gamma = 2.0 * rng.uniform();
    q.A = 1.0;
    q.r = 0.1;
    const std::array<double, 3> pt = {1e-3 + 5.0 * rng.uniform(), 1e-3 + 5.0 * rng.uniform(),
                                      1e-3 + 5.0 * rng.uniform()};
    const StabilityReport rep = stability(q, pt);
    if (rep.routh_condition_holds == rep.quadratic_coeffs_positive) ++agree;
  }
  out.require(agree == 1000, "two stability routes disagreed on " + std::to_string(1000 - agree) +
                                 "/1000 samples");
  return out;
}

// --- criterion 3: randomized nonnegativity suite ----------------------------

Outcome criterion_nonnegativity() {
  Outcome out;
  SplitMix64 rng(987654321);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nx = 1 + static_cast<int>(rng.uniform() * 20.0);
    const int ny = 1 + static_cast<int>(rng.uniform() * 20.0);
    Mesh mesh = Mesh::cartesian(nx, ny, 1.0, 1.0);

    ModelParams p;
    const bool sars = trial % 2 == 1;
    p.variant = sars ? Variant::SARS : Variant::BaseSIR;
    p.alpha_incidence = 5.0 * rng.uniform();
    // SARS draws stay clear of the treatment threshold (see the fixed-point
    // chattering note in the solver docs): moderate removal rates, r small,
    // infected bounded away from zero.
    p.mu = (sars ? 1.0 : 2.0) * rng.uniform();
    p.gamma = (sars ? 1.0 : 2.0) * rng.uniform();
    if (sars) {
      p.A = 5.0 * rng.uniform();
      p.r = 0.3 * rng.uniform();
    }

    auto law = [&rng]() {
      // Upper truncation drawn in [1, 100]: the laws stay genuinely nonlocal
      // and bounded below, while the linear systems stay well conditioned
      // enough for the suite's time budget.
      const double M = std::pow(10.0, 2.0 * rng.uniform());
      if (rng.uniform() < 0.5) return DiffusionLaw::truncated_linear(M, 1e-4);
      return DiffusionLaw::truncated_inverse_square(0.1 + 10.0 * rng.uniform(),
                                                    4.0 * rng.uniform(), M, 1e-4);
    };
    const std::array<DiffusionLaw, 3> laws = {law(), law(), law()};

    SolverConfig cfg;
    cfg.dt = sars ? 0.002 + 0.003 * rng.uniform() : 0.002 + 0.018 * rng.uniform();
    cfg.t_end = 50.0 * cfg.dt;

    State init;
    const double lo2 = sars ? 1.0 : 0.0;
    init.u1 = Field(mesh.cell_count());
    init.u2 = Field(mesh.cell_count());
    init.u3 = Field(mesh.cell_count());
    for (int k = 0; k < mesh.cell_count(); ++k) {
      init.u1[k] = 5.0 * rng.uniform();
      init.u2[k] = lo2 + 4.0 * rng.uniform();
      init.u3[k] = 5.0 * rng.uniform();
    }

    const RunResult res = run(init, mesh, p, laws, cfg);
    if (!res.ok) {
      out.require(false, "trial " + std::to_string(trial) + " failed at step " +
                             std::to_string(res.failed_step) + ": " + res.error);
      return out;
    }
    worst = std::min(worst, res.global_min);
    if (res.global_min < -1e-12) {
      out.require(false, "trial " + std::to_string(trial) + " dipped to " + fmt(res.global_min));
      return out;
    }
  }
  out.note("worst min over 100 runs = " + fmt(worst));
  return out;
}

// --- criterion 4: mass conservation in the degenerate limit -----------------

Outcome criterion_mass_conservation() {
  Outcome out;
  Mesh mesh = Mesh::cartesian(50, 50, 1.0, 1.0);
  ModelParams p;  // every reaction rate zero
  const std::array<DiffusionLaw, 3> laws = {DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1)};
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;  // 100 steps
  cfg.cg_tol = 1e-14;

  const double pi = std::acos(-1.0);
  State init;
  init.u1 = project_initial(mesh, [pi](double x, double y) {
    return 1.0 + 0.5 * std::cos(pi * x) * std::cos(pi * y);
  });
  init.u2 = project_initial(mesh, [pi](double x, double y) {
    return 2.0 + std::cos(2.0 * pi * x) * 0.3 + 0.2 * std::cos(pi * y);
  });
  init.u3 = project_initial(mesh, [pi](double x, double) { return 0.5 + 0.25 * std::cos(3.0 * pi * x); });

  const std::array<double, 3> mass0 = {nonlocal_argument(mesh, init.u1),
                                       nonlocal_argument(mesh, init.u2),
                                       nonlocal_argument(mesh, init.u3)};
  const RunResult res = run(init, mesh, p, laws, cfg);
  if (!res.ok) {
    out.require(false, "run failed: " + res.error);
    return out;
  }
  double worst = 0.0;
  for (const auto& row : res.series)
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::fabs(row.mass[i] - mass0[i]) / mass0[i]);
  out.require(worst <= 1e-12, "relative mass drift " + fmt(worst));
  out.note("max drift " + fmt(worst));
  return out;
}

// --- criterion 5: single-cell oracle equivalence -----------------------------

std::array<double, 3> single_cell_oracle(const ModelParams& p, double dt,
                                         const std::array<double, 3>& un) {
  const bool sars = p.variant == Variant::SARS;
  const double u1n = un[0], u2n = un[1], u3n = un[2];
  auto x3_of = [&](double x2) {
    if (!sars) return u3n + dt * p.gamma * u2n;
    return (u3n / dt + p.gamma * u2n + treatment(x2, p.r)) / (1.0 / dt + p.mu);
  };
  auto F = [&](double x2) {
    return (x2 - u2n) / dt - incidence(u1n, x2, x3_of(x2), p.alpha_incidence) +
           (p.gamma + p.mu) * x2 + (sars ? treatment(x2, p.r) : 0.0);
  };
  auto bisect = [](auto&& f, double lo, double hi) {
    for (int i = 0; i < 500; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double x2 = bisect(F, std::min(0.0, u2n) - 1.0,
                           std::max(u2n, 0.0) + dt * p.alpha_incidence * std::max(u1n, 0.0) + 1.0);
  const double x3 = x3_of(x2);
  auto G = [&](double x1) {
    return (x1 - u1n) / dt + incidence(x1, x2, x3, p.alpha_incidence) + p.mu * x1 -
           (sars ? p.A : 0.0);
  };
  const double x1 = bisect(G, std::min(0.0, u1n) - 1.0 - dt * p.A,
                           std::max(u1n, 0.0) + dt * p.A + 1.0);
  return {x1, x2, x3};
}

Outcome criterion_single_cell() {
  Outcome out;
  Mesh mesh = Mesh::cartesian(1, 1, 1.0, 1.0);
  const std::array<DiffusionLaw, 3> laws = {DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1)};
  SplitMix64 rng(5150);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    ModelParams p;
    const bool sars = trial % 2 == 1;
    p.variant = sars ? Variant::SARS : Variant::BaseSIR;
    p.alpha_incidence = 0.1 + 4.9 * rng.uniform();
    p.mu = 2.0 * rng.uniform();
    p.gamma = 2.0 * rng.uniform();
    if (sars) {
      p.A = 5.0 * rng.uniform();
      p.r = rng.uniform();
    }
    SolverConfig cfg;
    cfg.dt = 0.01 + 0.09 * rng.uniform();
    cfg.t_end = cfg.dt;
    cfg.picard_tol = 1e-12;
    cfg.cg_tol = 1e-13;

    State s;
    s.u1 = Field(1, 0.2 + 4.8 * rng.uniform());
    s.u2 = Field(1, 0.2 + 4.8 * rng.uniform());
    s.u3 = Field(1, 5.0 * rng.uniform());

    const StepResult r = step(s, mesh, p, laws, cfg);
    if (!r.ok) {
      out.require(false, "trial " + std::to_string(trial) + ": " + r.error);
      return out;
    }
    const auto oracle = single_cell_oracle(p, cfg.dt, {s.u1[0], s.u2[0], s.u3[0]});
    const double err = std::max({std::fabs(r.state.u1[0] - oracle[0]),
                                 std::fabs(r.state.u2[0] - oracle[1]),
                                 std::fabs(r.state.u3[0] - oracle[2])});
    worst = std::max(worst, err);
    if (err > 1e-10) {
      out.require(false, "trial " + std::to_string(trial) + " error " + fmt(err));
      return out;
    }
  }
  out.note("worst |solver - oracle| = " + fmt(worst));
  return out;
}

// --- criteria 6 and 10 share the stored Example 1 run ------------------------

struct Example1Run {
  Mesh mesh = Mesh::cartesian(100, 100, 1.0, 1.0);
  StateHistory history;
  RunResult result;
  SolverConfig cfg;
};

Example1Run run_example1() {
  Example1Run er;
  RunConfig rc;
  rc.params.alpha_incidence = 2.0;
  rc.params.mu = 0.01;
  rc.params.gamma = 1.0;
  rc.initial.preset = InitialSpec::Preset::Example1;
  rc.nx = 100;
  rc.ny = 100;
  er.cfg.dt = 0.005;
  er.cfg.t_end = 0.5;  // N_t = 100
  const std::array<DiffusionLaw, 3> laws = {DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1),
                                            DiffusionLaw::constant(0.1)};
  State init = build_initial_state(rc, er.mesh);
  er.result = run(init, er.mesh, rc.params, laws, er.cfg, &er.history);
  return er;
}

Outcome criterion_energy_bound(const Example1Run& er) {
  Outcome out;
  if (!er.result.ok) {
    out.require(false, "run failed: " + er.result.error);
    return out;
  }
  out.require(er.result.envelope_ok, "L2 monitor exceeded the Gronwall envelope");
  for (int i = 0; i < 3; ++i) {
    out.require(std::isfinite(er.result.gradient_sum[i]),
                "gradient sum " + std::to_string(i + 1) + " not finite");
    out.require(er.result.max_l2_sq[i] <= er.result.energy_envelope,
                "species " + std::to_string(i + 1) + " L2 exceeds the envelope");
  }
  out.note("max L2^2 = (" + fmt(er.result.max_l2_sq[0]) + ", " + fmt(er.result.max_l2_sq[1]) +
           ", " + fmt(er.result.max_l2_sq[2]) + ") vs envelope " + fmt(er.result.energy_envelope) +
           "; gradient sums (" + fmt(er.result.gradient_sum[0]) + ", " +
           fmt(er.result.gradient_sum[1]) + ", " + fmt(er.result.gradient_sum[2]) + ")");
  return out;
}

Outcome criterion_translates(const Example1Run& er) {
  Outcome out;
  if (!er.result.ok) {
    out.require(false, "stored run unavailable");
    return out;
  }
  const double h = er.mesh.hx();
  const double dt = er.cfg.dt;
  const TranslateTable table =
      translate_diagnostics(er.history.states, er.mesh, {{h, 0.0}, {2 * h, 0.0}, {4 * h, 0.0}},
                            {dt, 2 * dt, 4 * dt});
  for (int i = 0; i < 3; ++i) {
    for (std::size_t s = 0; s < 3; ++s)
      out.require(std::isfinite(table.space[s].value[i]) && std::isfinite(table.time[s].value[i]),
                  "non-finite translate value");
    out.require(table.space[0].value[i] <= table.space[1].value[i] &&
                    table.space[1].value[i] <= table.space[2].value[i],
                "space translates not monotone for species " + std::to_string(i + 1));
    out.require(table.time[0].value[i] <= table.time[1].value[i] &&
                    table.time[1].value[i] <= table.time[2].value[i],
                "time translates not monotone for species " + std::to_string(i + 1));
  }
  out.note("u2 space translates (h,2h,4h) = (" + fmt(table.space[0].value[1]) + ", " +
           fmt(table.space[1].value[1]) + ", " + fmt(table.space[2].value[1]) + ")");
  return out;
}

// --- criterion 7: manufactured convergence study -----------------------------

Outcome criterion_convergence() {
  Outcome out;
  ModelParams p;
  p.alpha_incidence = 2.0;
  p.mu = 0.01;
  p.gamma = 1.0;
  const std::array<DiffusionLaw, 3> laws = {DiffusionLaw::truncated_linear(1e4, 1e-4),
                                            DiffusionLaw::truncated_linear(1e4, 1e-4),
                                            DiffusionLaw::truncated_linear(1e4, 1e-4)};
  const ManufacturedProblem mp = mms_smooth(p, laws, 1.0, 1.0);
  SolverConfig base;
  base.t_end = 0.25;
  const std::vector<ConvergenceLevel> levels = {
      {16, 16, 0.2 / 16.0}, {32, 32, 0.2 / 32.0}, {64, 64, 0.2 / 64.0}};
  const ConvergenceResult result = convergence_study(p, laws, 1.0, 1.0, base, levels, &mp);

  for (std::size_t lev = 1; lev < result.rows.size(); ++lev)
    for (int i = 0; i < 3; ++i)
      out.require(result.rows[lev].error[i] < result.rows[lev - 1].error[i],
                  "errors not strictly decreasing (species " + std::to_string(i + 1) + ")");
  const auto& last = result.rows.back();
  for (int i = 0; i < 3; ++i)
    out.require(last.order[i] >= 0.9, "observed order " + fmt(last.order[i]) + " for species " +
                                          std::to_string(i + 1));
  out.note("finest-pair orders (" + fmt(last.order[0]) + ", " + fmt(last.order[1]) + ", " +
           fmt(last.order[2]) + ")");
  return out;
}

// --- criterion 8: Turing polynomial vs eigenvalue scan -----------------------

Outcome criterion_turing() {
  Outcome out;
  const ModelParams p = example2_params();
  const Equilibria eq = sars_equilibria(p);
  const std::array<double, 3> e2 = {eq.e2.u, eq.e2.v, eq.e2.w};
  const auto grid = default_k2_grid(1.0);

  int disagreements = 0;
  double worst_poly_err = 0.0;
  std::vector<std::string> table;
  for (int i = 0; i < 20; ++i) {
    const double d1 = 0.1 * std::pow(10.0, 3.0 * i / 19.0);  // 0.1 .. 100
    for (int j = 0; j < 20; ++j) {
      const double d2 = 1e-6 * std::pow(10.0, 7.0 * j / 19.0);  // 1e-6 .. 10
      const TuringScan scan = turing_scan(p, e2, d1, d2, d1, grid);

      // Direct arithmetic oracle, independently associated.
      const double oracle = 3.289620038 - 2.20024467 * d1 + (5.114590203 + 9.0 * d1) * d2;
      worst_poly_err = std::max(worst_poly_err, std::fabs(oracle - scan.polynomial_value));
      if (scan.polynomial_predicts_instability != scan.unstable) {
        ++disagreements;
        if (table.size() < 8) {
          table.push_back("    d1=d3=" + fmt(d1) + " d2=" + fmt(d2) + " poly=" +
                          fmt(scan.polynomial_value) + " scan_growth=" + fmt(scan.max_growth));
        }
      }
    }
  }
  out.require(worst_poly_err <= 1e-12,
              "polynomial deviates from the arithmetic oracle by " + fmt(worst_poly_err));
  out.note("verdict disagreements on the 20x20 grid: " + std::to_string(disagreements) + "/400" +
           " (reported, not asserted)");
  if (!table.empty()) {
    std::printf("  turing verdict disagreement table (first %zu of %d):\n", table.size(),
                disagreements);
    for (const auto& row : table) std::printf("%s\n", row.c_str());
  }
  return out;
}

// --- criterion 9: determinism of full CLI runs -------------------------------

Outcome criterion_determinism() {
  Outcome out;
  const fs::path base = work_dir();
  const fs::path dir_a = base / "det_a";
  const fs::path dir_b = base / "det_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);

  const std::string cfg_text = R"([model]
variant = sars
alpha = 3.8
mu = 0.3
gamma = 0.8
A = 3
r = 0.5

[mesh]
nx = 24
ny = 24

[time]
dt = 0.0125
t_end = 0.25

[diffusion.1]
kind = truncated_inverse_square
d = 400000
u_tilde = 4.010906415
M = 1e4
eps = 1e-4
[diffusion.2]
kind = truncated_linear
M = 1e4
eps = 1e-4
[diffusion.3]
kind = constant
c = 0.1

[initial]
preset = example2-random
seed = 424242

[output]
snapshots = 0, 0.125, 0.25
)";
  const fs::path cfg_path = base / "det.ini";
  {
    std::ofstream f(cfg_path);
    f << cfg_text << "\n";
  }

  std::ostringstream sink, err;
  const int rc_a =
      cli::cmd_run(cfg_path.string(), dir_a.string(), std::nullopt, sink, err);
  const int rc_b =
      cli::cmd_run(cfg_path.string(), dir_b.string(), std::nullopt, sink, err);
  out.require(rc_a == 0 && rc_b == 0, "runs failed: " + err.str());
  if (!out.pass) return out;

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const fs::path other = dir_b / entry.path().filename();
    if (entry.path().filename() == "manifest.txt") {
      // manifests embed the output dir, which differs by construction;
      // compare everything after that key.
      std::string ma = slurp(entry.path()), mb = slurp(other);
      const auto cut = [](std::string& s) {
        const auto pos = s.find("dir = ");
        const auto end = s.find('\n', pos);
        s.erase(pos, end - pos);
      };
      cut(ma);
      cut(mb);
      out.require(ma == mb, "manifests differ beyond the output dir");
      ++compared;
      continue;
    }
    out.require(slurp(entry.path()) == slurp(other),
                entry.path().filename().string() + " differs between runs");
    ++compared;
  }
  out.require(compared >= 5, "expected at least series + manifest + 3 snapshots");
  out.note(std::to_string(compared) + " files bitwise-identical");
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  Example1Run example1;  // shared by criteria 6 and 10; built lazily below
  bool example1_ready = false;
  auto ensure_example1 = [&]() -> Example1Run& {
    if (!example1_ready) {
      example1 = run_example1();
      example1_ready = true;
    }
    return example1;
  };

  const std::vector<Criterion> criteria = {
      {1, "equilibrium-reproduction", 10.0, criterion_equilibria},
      {2, "stability-verdicts", 10.0, criterion_stability},
      {3, "nonnegativity-suite", 60.0, criterion_nonnegativity},
      {4, "mass-conservation-degenerate", 10.0, criterion_mass_conservation},
      {5, "single-cell-oracle", 5.0, criterion_single_cell},
      {6, "energy-bound-monitor", 300.0, [&] { return criterion_energy_bound(ensure_example1()); }},
      {7, "convergence-study", 600.0, criterion_convergence},
      {8, "turing-cross-check", 60.0, criterion_turing},
      {9, "determinism", 120.0, criterion_determinism},
      {10, "translate-diagnostics", 30.0, [&] { return criterion_translates(ensure_example1()); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const double t0 = now_seconds();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = now_seconds() - t0;
    if (elapsed > c.budget_seconds) {
      out.pass = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("runtime ") + fmt(elapsed) +
                    "s exceeds budget " + fmt(c.budget_seconds) + "s";
    }
    std::printf("%s %2d %-30s (%.2fs)%s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, elapsed,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
