#include "epifv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "epifv/analysis.hpp"
#include "epifv/io.hpp"
#include "epifv/solver.hpp"

namespace epifv::cli {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return dir;
  const char* root = std::getenv("EPIFV_OUT_ROOT");
  if (root && *root) return (fs::path(root) / p).string();
  return dir;
}

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

/// Writes snapshots at the scheduled step indices as the run advances.
class SnapshotWriter : public RunObserver {
 public:
  SnapshotWriter(const Mesh& mesh, const fs::path& dir, const std::set<long>& steps)
      : mesh_(mesh), dir_(dir), steps_(steps) {}

  void on_initial(const State& s, const SeriesRow&) override { maybe_write(s); }
  void on_step(const State& s, const StepReport&, const SeriesRow&) override { maybe_write(s); }

  const std::vector<std::pair<long, std::string>>& written() const { return written_; }

 private:
  void maybe_write(const State& s) {
    if (!steps_.count(s.step)) return;
    char name[40];
    std::snprintf(name, sizeof name, "snapshot_%06ld.csv", s.step);
    write_snapshot_csv((dir_ / name).string(), mesh_, s);
    written_.emplace_back(s.step, name);
  }

  const Mesh& mesh_;
  fs::path dir_;
  std::set<long> steps_;
  std::vector<std::pair<long, std::string>> written_;
};

void write_manifest(const fs::path& path, const RunConfig& cfg, const RunResult& res,
                    const std::vector<std::pair<long, std::string>>& snapshots, double dt,
                    const Mesh& mesh) {
  std::ofstream f(path, std::ios::trunc);
  f << "status = " << (res.ok ? "ok" : "failed") << '\n';
  if (const auto reg = mesh.regularity_ratio())
    f << "mesh_regularity_ratio = " << format_double(*reg) << '\n';
  if (!res.ok) {
    f << "failed_step = " << res.failed_step << '\n';
    f << "error = " << res.error << '\n';
  }
  f << "steps_completed = " << res.steps_completed << '\n'
    << "total_picard = " << res.total_picard << '\n'
    << "total_cg = " << res.total_cg << '\n'
    << "global_min = " << format_double(res.global_min) << '\n'
    << "nonnegativity_ok = " << (res.nonnegativity_ok ? 1 : 0) << '\n'
    << "energy_envelope = " << format_double(res.energy_envelope) << '\n'
    << "envelope_ok = " << (res.envelope_ok ? 1 : 0) << '\n';
  for (int i = 0; i < 3; ++i)
    f << "max_l2_sq_u" << i + 1 << " = " << format_double(res.max_l2_sq[i]) << '\n';
  for (int i = 0; i < 3; ++i)
    f << "gradient_sum_u" << i + 1 << " = " << format_double(res.gradient_sum[i]) << '\n';
  for (const auto& [step, name] : snapshots)
    f << "snapshot = step:" << step << " t:" << format_double(step * dt) << " file:" << name
      << '\n';
  f << "\n# resolved configuration\n" << serialize_config(cfg);
}

}  // namespace

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir_override,
            const std::optional<std::uint64_t>& seed_override, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (out_dir_override) cfg.out_dir = *out_dir_override;
    if (seed_override) cfg.initial.seed = *seed_override;
    cfg.validate();
  } catch (const std::exception& e) {
    err << config_path << ": " << e.what() << '\n';
    return 2;
  }

  try {
    const fs::path dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(dir);

    Mesh mesh = Mesh::cartesian(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    State init = build_initial_state(cfg, mesh);

    std::set<long> snap_steps;
    const long nsteps = cfg.solver.step_count();
    for (double t : cfg.snapshot_times)
      snap_steps.insert(std::clamp(std::lround(t / cfg.solver.dt), 0L, nsteps));

    SnapshotWriter snaps(mesh, dir, snap_steps);
    RunResult res = run(init, mesh, cfg.params, cfg.laws, cfg.solver, &snaps);

    write_timeseries_csv((dir / "timeseries.csv").string(), res.series);
    write_manifest(dir / "manifest.txt", cfg, res, snaps.written(), cfg.solver.dt, mesh);

    if (!res.ok) {
      err << "run failed at step " << res.failed_step << ": " << res.error << '\n';
      err << "partial outputs kept in " << dir.string() << '\n';
      return 3;
    }
    out << "run complete: " << res.steps_completed << " steps, outputs in " << dir.string()
        << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

int cmd_equilibria(const ModelParams& params, const std::vector<double>& alpha_sweep,
                   std::ostream& out) {
  std::vector<double> alphas = alpha_sweep;
  if (alphas.empty()) alphas.push_back(params.alpha_incidence);

  out << "alpha point u v w verdict\n";
  int status = 0;
  for (double alpha : alphas) {
    ModelParams p = params;
    p.alpha_incidence = alpha;
    Equilibria eq;
    try {
      eq = sars_equilibria(p);
    } catch (const NoRealEquilibria&) {
      out << fmt9(alpha) << " - - - - no-real-equilibria\n";
      status = 1;
      continue;
    }
    const std::array<const EquilibriumPoint*, 2> pts = {&eq.e1, &eq.e2};
    for (int i = 0; i < 2; ++i) {
      const auto& pt = *pts[i];
      out << fmt9(alpha) << " E" << i + 1 << " " << fmt9(pt.u) << " " << fmt9(pt.v) << " "
          << fmt9(pt.w) << " ";
      if (!pt.positive) {
        out << "flagged-nonpositive\n";
        continue;
      }
      try {
        const StabilityReport rep = stability(p, {pt.u, pt.v, pt.w});
        out << (rep.routh_condition_holds ? "stable" : "unstable") << '\n';
      } catch (const std::invalid_argument&) {
        out << "degenerate\n";
      }
    }
  }
  return status;
}

int cmd_stability(const ModelParams& params, const std::string& point, double d1, double d2,
                  double d3, std::ostream& out, std::ostream& err) {
  std::array<double, 3> p{0.0, 0.0, 0.0};
  try {
    if (point == "E1" || point == "E2") {
      const Equilibria eq = sars_equilibria(params);
      const auto& pt = point == "E1" ? eq.e1 : eq.e2;
      p = {pt.u, pt.v, pt.w};
    } else {
      if (std::sscanf(point.c_str(), "%lf,%lf,%lf", &p[0], &p[1], &p[2]) != 3) {
        err << "point must be E1, E2 or 'u,v,w'\n";
        return 2;
      }
    }

    const StabilityReport rep = stability(params, p);
    out << "point u=" << fmt9(p[0]) << " v=" << fmt9(p[1]) << " w=" << fmt9(p[2]) << '\n';
    out << "eigenvalues =";
    for (const auto& lam : rep.eigenvalues)
      out << " (" << format_double(lam.real()) << (lam.imag() < 0 ? "" : "+")
          << format_double(lam.imag()) << "i)";
    out << '\n';
    out << "quad_b = " << format_double(rep.quad_b) << '\n';
    out << "quad_c = " << format_double(rep.quad_c) << '\n';
    out << "routh_condition_holds = " << (rep.routh_condition_holds ? "true" : "false") << '\n';
    out << "quadratic_coeffs_positive = " << (rep.quadratic_coeffs_positive ? "true" : "false")
        << '\n';

    if (d1 > 0.0 || d2 > 0.0 || d3 > 0.0) {
      const auto grid = default_k2_grid(1.0);
      const TuringScan scan = turing_scan(params, p, d1, d2, d3, grid);
      out << "turing d1=" << format_double(d1) << " d2=" << format_double(d2)
          << " d3=" << format_double(d3) << '\n';
      out << "  eigen_scan_unstable = " << (scan.unstable ? "true" : "false")
          << " (witness_k2 = " << format_double(scan.witness_k2)
          << ", max_growth = " << format_double(scan.max_growth) << ")\n";
      if (scan.polynomial_applicable) {
        out << "  reference_polynomial = " << format_double(scan.polynomial_value)
            << " -> " << (scan.polynomial_predicts_instability ? "instability" : "no instability")
            << '\n';
      } else {
        out << "  reference_polynomial = n/a (requires d1 == d3)\n";
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_convergence(const std::string& config_path, std::optional<int> levels_override,
                    const std::optional<std::string>& out_dir_override, std::ostream& out,
                    std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (out_dir_override) cfg.out_dir = *out_dir_override;
    if (!cfg.convergence.manufactured)
      throw ConfigError(
          "[convergence]: 'manufactured' must be set (smooth, constant or none) "
          "so the study knows its reference");
  } catch (const std::exception& e) {
    err << config_path << ": " << e.what() << '\n';
    return 2;
  }

  try {
    std::vector<int> nxs = cfg.convergence.level_nx;
    if (levels_override) {
      if (*levels_override < 3) throw std::invalid_argument("--levels must be >= 3");
      nxs.clear();
      int nx = cfg.convergence.level_nx.empty() ? 16 : cfg.convergence.level_nx.front();
      for (int i = 0; i < *levels_override; ++i, nx *= 2) nxs.push_back(nx);
    }

    std::vector<ConvergenceLevel> levels;
    for (int nx : nxs) {
      const double h = cfg.lx / nx;
      levels.push_back({nx, static_cast<int>(std::lround(nx * cfg.ly / cfg.lx)),
                        cfg.convergence.dt_over_h * h});
    }

    SolverConfig base = cfg.solver;
    base.t_end = cfg.convergence.t_end;

    ManufacturedProblem problem;
    const ManufacturedProblem* mms = nullptr;
    switch (*cfg.convergence.manufactured) {
      case ConvergenceSpec::Manufactured::Smooth:
        problem = mms_smooth(cfg.params, cfg.laws, cfg.lx, cfg.ly);
        mms = &problem;
        break;
      case ConvergenceSpec::Manufactured::Constant:
        problem = mms_constant(cfg.params, cfg.convergence.constants);
        mms = &problem;
        break;
      case ConvergenceSpec::Manufactured::None:
        break;
    }

    const ConvergenceResult result =
        convergence_study(cfg.params, cfg.laws, cfg.lx, cfg.ly, base, levels, mms);

    const fs::path dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "convergence.csv", std::ios::trunc);
    csv << "h,dt,err1,err2,err3,order1,order2,order3\n";

    out << "h dt err1 err2 err3 order1 order2 order3\n";
    for (const auto& row : result.rows) {
      out << format_double(row.h) << ' ' << format_double(row.dt);
      csv << format_double(row.h) << ',' << format_double(row.dt);
      for (int i = 0; i < 3; ++i) {
        out << ' ' << (row.has_error ? format_double(row.error[i]) : "-");
        csv << ',' << (row.has_error ? format_double(row.error[i]) : "");
      }
      for (int i = 0; i < 3; ++i) {
        out << ' ' << (row.has_order ? format_double(row.order[i]) : "-");
        csv << ',' << (row.has_order ? format_double(row.order[i]) : "");
      }
      out << '\n';
      csv << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace epifv::cli
