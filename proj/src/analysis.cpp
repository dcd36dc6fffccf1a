#include "epifv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epifv {

double l2_norm(const Mesh& mesh, const Field& f) {
  if (f.size() != static_cast<std::size_t>(mesh.cell_count()))
    throw std::invalid_argument("l2_norm: field does not match mesh");
  double s = 0.0;
  const auto& cells = mesh.cells();
  for (std::size_t k = 0; k < f.size(); ++k) s += cells[k].measure * f[k] * f[k];
  return std::sqrt(s);
}

double h1_seminorm(const Mesh& mesh, const Field& f) {
  if (f.size() != static_cast<std::size_t>(mesh.cell_count()))
    throw std::invalid_argument("h1_seminorm: field does not match mesh");
  double s = 0.0;
  for (const auto& face : mesh.interfaces()) {
    const double jump = f[face.l] - f[face.k];
    s += face.measure / face.distance * jump * jump;
  }
  return std::sqrt(s);
}

Equilibria sars_equilibria(const ModelParams& params) {
  params.validate();
  if (params.variant != Variant::SARS)
    throw std::invalid_argument("sars_equilibria: requires the SARS variant");
  if (!(params.alpha_incidence > 0.0) || !(params.mu > 0.0))
    throw std::invalid_argument("sars_equilibria: requires alpha > 0 and mu > 0");

  const double alpha = params.alpha_incidence;
  const double A = params.A, r = params.r, mu = params.mu, gamma = params.gamma;
  const double R0 = mu + gamma;

  Equilibria eq;
  const double inner = r * alpha - A * R0 - A * alpha;
  eq.discriminant = inner * inner - 4.0 * A * A * R0 * alpha;
  if (eq.discriminant < 0.0)
    throw NoRealEquilibria("sars_equilibria: negative discriminant, no real equilibria");

  const double centroid = (A - r) / (2.0 * R0) - A / (2.0 * alpha);
  const double spread = std::sqrt(eq.discriminant) / (2.0 * alpha * R0);

  auto make_point = [&](double v) {
    EquilibriumPoint p;
    p.v = v;
    p.u = (A - r - R0 * v) / mu;
    p.w = (gamma * v + r) / mu;
    p.positive = p.u > 0.0 && p.v > 0.0 && p.w > 0.0;
    return p;
  };
  eq.e1 = make_point(centroid - spread);
  eq.e2 = make_point(centroid + spread);
  return eq;
}

Complex3 solve_cubic(double p, double q, double r) {
  // Depressed form t^3 + a t + b with x = t - p/3.
  const double a = q - p * p / 3.0;
  const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
  const double shift = -p / 3.0;

  Complex3 roots;
  if (a == 0.0 && b == 0.0) {
    roots = {std::complex<double>(shift), std::complex<double>(shift),
             std::complex<double>(shift)};
    return roots;
  }

  const double disc = -4.0 * a * a * a - 27.0 * b * b;
  if (disc > 0.0) {
    // Three distinct real roots; here a < 0 necessarily.
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots[k] = std::complex<double>(shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    // One real root plus a conjugate pair (pair collapses when disc == 0).
    const double s = std::sqrt(-disc / 108.0);
    const double u = std::cbrt(-b / 2.0 + s);
    const double v = std::cbrt(-b / 2.0 - s);
    roots[0] = std::complex<double>(shift + u + v);
    const double re = shift - (u + v) / 2.0;
    const double im = std::sqrt(3.0) / 2.0 * (u - v);
    roots[1] = std::complex<double>(re, im);
    roots[2] = std::complex<double>(re, -im);
  }
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

Complex3 eigenvalues_3x3(const Matrix3& M) {
  const double tr = M[0][0] + M[1][1] + M[2][2];
  const double minors = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) +
                        (M[0][0] * M[2][2] - M[0][2] * M[2][0]) +
                        (M[1][1] * M[2][2] - M[1][2] * M[2][1]);
  const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                     M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                     M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  return solve_cubic(-tr, minors, -det);
}

StabilityReport stability(const ModelParams& params, const std::array<double, 3>& point) {
  params.validate();
  const double u = point[0], v = point[1], w = point[2];
  const double total = u + v + w;
  if (!(total > 0.0))
    throw std::invalid_argument("stability: degenerate total population");

  const double alpha = params.alpha_incidence, mu = params.mu, gamma = params.gamma;
  const double s1 = alpha * v / total;
  const double s2 = alpha * u / total;
  const double s3 = alpha * u * v / (total * total);

  StabilityReport rep;
  rep.jacobian = {{{-s1 + s3 - mu, -s2 + s3, s3},
                   {s1 - s3, s2 - s3 - gamma - mu, -s3},
                   {0.0, gamma, -mu}}};

  // The third row structure always yields the eigenvalue -mu; the other two
  // eigenvalues solve lambda^2 + b lambda + c = 0.
  rep.quad_b = (2.0 * mu + gamma) + alpha * (v - u) / total;
  rep.quad_c = (mu + gamma) * mu + alpha * ((mu + gamma) * v - mu * u) / total;
  rep.quadratic_coeffs_positive = rep.quad_b > 0.0 && rep.quad_c > 0.0;

  if (alpha > 0.0 && mu > 0.0) {
    const double lhs = total / alpha;
    const double rhs =
        std::max((u - v) / (2.0 * mu + gamma), u / (mu + gamma) - v / mu);
    rep.routh_condition_holds = lhs > rhs;
  } else {
    rep.routh_condition_holds = rep.quadratic_coeffs_positive;
  }

  const double disc = rep.quad_b * rep.quad_b - 4.0 * rep.quad_c;
  Complex3 lam;
  lam[0] = std::complex<double>(-mu);
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    lam[1] = std::complex<double>((-rep.quad_b + s) / 2.0);
    lam[2] = std::complex<double>((-rep.quad_b - s) / 2.0);
  } else {
    const double s = std::sqrt(-disc);
    lam[1] = std::complex<double>(-rep.quad_b / 2.0, s / 2.0);
    lam[2] = std::complex<double>(-rep.quad_b / 2.0, -s / 2.0);
  }
  std::sort(lam.begin(), lam.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  rep.eigenvalues = lam;
  return rep;
}

double turing_reference_polynomial(double d1, double d2) {
  return (5.114590203 + 9.0 * d1) * d2 + 3.289620038 - 2.20024467 * d1;
}

std::vector<double> default_k2_grid(double length, int n_max, int points) {
  if (!(length > 0.0) || n_max < 1 || points < 2)
    throw std::invalid_argument("default_k2_grid: bad arguments");
  const double k2_min = std::pow(std::numbers::pi / length, 2);
  const double k2_max = std::pow(std::numbers::pi * n_max / length, 2);
  std::vector<double> grid(points);
  const double ratio = std::log(k2_max / k2_min);
  for (int i = 0; i < points; ++i)
    grid[i] = k2_min * std::exp(ratio * i / (points - 1));
  return grid;
}

TuringScan turing_scan(const ModelParams& params, const std::array<double, 3>& point,
                       double d1, double d2, double d3, const std::vector<double>& k2_grid) {
  TuringScan scan;
  StabilityReport base = stability(params, point);
  scan.base_point_stable = base.quadratic_coeffs_positive;

  scan.max_growth = -std::numeric_limits<double>::infinity();
  for (double k2 : k2_grid) {
    Matrix3 M = base.jacobian;
    M[0][0] -= k2 * d1;
    M[1][1] -= k2 * d2;
    M[2][2] -= k2 * d3;
    const Complex3 lam = eigenvalues_3x3(M);
    const double growth = lam[0].real();  // sorted by real part
    if (growth > scan.max_growth) {
      scan.max_growth = growth;
      scan.witness_k2 = k2;
    }
  }
  scan.unstable = scan.max_growth > 0.0;

  scan.polynomial_applicable =
      std::fabs(d1 - d3) <= 1e-12 * std::max({std::fabs(d1), std::fabs(d3), 1.0});
  if (scan.polynomial_applicable) {
    scan.polynomial_value = turing_reference_polynomial(d1, d2);
    scan.polynomial_predicts_instability = scan.polynomial_value < 0.0;
  }
  return scan;
}

ManufacturedProblem mms_smooth(const ModelParams& params, const std::array<DiffusionLaw, 3>& laws,
                               double lx, double ly) {
  params.validate();
  const double kappa = std::pow(std::numbers::pi / lx, 2) + std::pow(std::numbers::pi / ly, 2);
  const std::array<double, 3> a = {laws[0](2.0 * lx * ly), laws[1](2.0 * lx * ly),
                                   laws[2](2.0 * lx * ly)};
  auto phi = [lx, ly](double t, double x, double y) {
    return 2.0 + std::cos(std::numbers::pi * x / lx) * std::cos(std::numbers::pi * y / ly) * std::exp(-t);
  };

  ManufacturedProblem mp;
  mp.exact = {phi, phi, phi};

  const ModelParams p = params;
  // phi stays in [1,3], so positive parts are inactive and H(phi) = r.
  mp.sources.g1 = [phi, p, a, kappa](double t, double x, double y) {
    const double f = phi(t, x, y);
    const double bump = f - 2.0;
    double g = -bump + a[0] * kappa * bump + p.alpha_incidence * f / 3.0 + p.mu * f;
    if (p.variant == Variant::SARS) g -= p.A;
    return g;
  };
  mp.sources.g2 = [phi, p, a, kappa](double t, double x, double y) {
    const double f = phi(t, x, y);
    const double bump = f - 2.0;
    double g = -bump + a[1] * kappa * bump - p.alpha_incidence * f / 3.0 +
               (p.gamma + p.mu) * f;
    if (p.variant == Variant::SARS) g += p.r;
    return g;
  };
  mp.sources.g3 = [phi, p, a, kappa](double t, double x, double y) {
    const double f = phi(t, x, y);
    const double bump = f - 2.0;
    double g = -bump + a[2] * kappa * bump - p.gamma * f;
    if (p.variant == Variant::SARS) g += -p.r + p.mu * f;
    return g;
  };
  return mp;
}

ManufacturedProblem mms_constant(const ModelParams& params, const std::array<double, 3>& values) {
  params.validate();
  const ReactionRates f =
      reaction_rates(params, values[0], values[1], values[2], values[0], values[1]);
  ManufacturedProblem mp;
  mp.exact = {[c = values[0]](double, double, double) { return c; },
              [c = values[1]](double, double, double) { return c; },
              [c = values[2]](double, double, double) { return c; }};
  mp.sources.g1 = [g = -f.f1](double, double, double) { return g; };
  mp.sources.g2 = [g = -f.f2](double, double, double) { return g; };
  mp.sources.g3 = [g = -f.f3](double, double, double) { return g; };
  return mp;
}

ConvergenceResult convergence_study(const ModelParams& params,
                                    const std::array<DiffusionLaw, 3>& laws, double lx, double ly,
                                    const SolverConfig& base_cfg,
                                    const std::vector<ConvergenceLevel>& levels,
                                    const ManufacturedProblem* mms) {
  if (levels.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 refinement levels");
  std::vector<double> hs;
  for (const auto& lv : levels) {
    if (lv.nx < 1 || lv.ny < 1 || !(lv.dt > 0.0))
      throw std::invalid_argument("convergence_study: bad level");
    hs.push_back(std::max(lx / lv.nx, ly / lv.ny));
  }
  const double ratio0 = levels[0].dt / hs[0];
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (std::fabs(levels[i].dt / hs[i] - ratio0) > 1e-6 * ratio0)
      throw std::invalid_argument("convergence_study: dt must be proportional to h across levels");
    if (!(hs[i] < hs[i - 1]))
      throw std::invalid_argument("convergence_study: levels must refine");
  }
  if (!mms) {
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i].nx != 2 * levels[i - 1].nx || levels[i].ny != 2 * levels[i - 1].ny)
        throw std::invalid_argument(
            "convergence_study: self-convergence requires nested doubling grids");
  }

  ConvergenceResult result;
  result.manufactured = mms != nullptr;

  std::vector<State> prev_history;
  int prev_nx = 0;
  long prev_nsteps = 0;

  for (std::size_t lev = 0; lev < levels.size(); ++lev) {
    const auto& lv = levels[lev];
    Mesh mesh = Mesh::cartesian(lv.nx, lv.ny, lx, ly);
    SolverConfig cfg = base_cfg;
    cfg.dt = lv.dt;

    State init;
    if (mms) {
      init.u1 = project_initial(mesh, [&](double x, double y) { return mms->exact[0](0.0, x, y); });
      init.u2 = project_initial(mesh, [&](double x, double y) { return mms->exact[1](0.0, x, y); });
      init.u3 = project_initial(mesh, [&](double x, double y) { return mms->exact[2](0.0, x, y); });
    } else {
      // Deterministic smooth start shared by all levels.
      init.u1 = project_initial(mesh, [&](double x, double y) {
        return 1.0 + 0.5 * std::cos(std::numbers::pi * x / lx) * std::cos(std::numbers::pi * y / ly);
      });
      init.u2 = project_initial(mesh, [&](double x, double y) {
        return 0.5 + 0.25 * std::cos(2.0 * std::numbers::pi * x / lx) * std::cos(std::numbers::pi * y / ly);
      });
      init.u3 = Field(mesh.cell_count(), 0.0);
    }

    StateHistory history;
    RunResult rr = run(init, mesh, params, laws, cfg, &history, mms ? &mms->sources : nullptr);
    if (!rr.ok)
      throw std::runtime_error("convergence_study: level run failed: " + rr.error);

    ConvergenceRow row;
    row.h = hs[lev];
    row.dt = lv.dt;
    const long nsteps = cfg.step_count();
    const auto& cells = mesh.cells();

    if (mms) {
      std::array<double, 3> err_sq{0.0, 0.0, 0.0};
      for (long n = 1; n <= nsteps; ++n) {
        const State& s = history.states[static_cast<std::size_t>(n)];
        const std::array<const Field*, 3> f = {&s.u1, &s.u2, &s.u3};
        for (int i = 0; i < 3; ++i) {
          double acc = 0.0;
          for (std::size_t k = 0; k < f[i]->size(); ++k) {
            const auto& c = cells[k].center;
            const double d = (*f[i])[k] - mms->exact[i](s.time, c[0], c[1]);
            acc += cells[k].measure * d * d;
          }
          err_sq[i] += cfg.dt * acc;
        }
      }
      for (int i = 0; i < 3; ++i) row.error[i] = std::sqrt(err_sq[i]);
      row.has_error = true;
    } else if (lev > 0) {
      // Inject the coarse level into this one (factor-2 nesting, coarse
      // piecewise-constant in time over its own intervals).
      std::array<double, 3> diff_sq{0.0, 0.0, 0.0};
      for (long n = 0; n < nsteps; ++n) {
        const State& fine = history.states[static_cast<std::size_t>(n + 1)];
        const long nc = std::min(n / 2 + 1, prev_nsteps);
        const State& coarse = prev_history[static_cast<std::size_t>(nc)];
        const std::array<const Field*, 3> ff = {&fine.u1, &fine.u2, &fine.u3};
        const std::array<const Field*, 3> cf = {&coarse.u1, &coarse.u2, &coarse.u3};
        for (int i = 0; i < 3; ++i) {
          double acc = 0.0;
          for (int j = 0; j < lv.ny; ++j)
            for (int ii = 0; ii < lv.nx; ++ii) {
              const double d = (*ff[i])[j * lv.nx + ii] -
                               (*cf[i])[(j / 2) * prev_nx + ii / 2];
              acc += cells[0].measure * d * d;
            }
          diff_sq[i] += cfg.dt * acc;
        }
      }
      for (int i = 0; i < 3; ++i) row.error[i] = std::sqrt(diff_sq[i]);
      row.has_error = true;
    }

    if (row.has_error && !result.rows.empty() && result.rows.back().has_error) {
      row.has_order = true;
      for (int i = 0; i < 3; ++i) {
        const double prev = result.rows.back().error[i];
        row.order[i] = (prev > 0.0 && row.error[i] > 0.0)
                           ? std::log2(prev / row.error[i])
                           : 0.0;
      }
    }
    result.rows.push_back(row);

    prev_history = std::move(history.states);
    prev_nx = lv.nx;
    prev_nsteps = nsteps;
  }
  return result;
}

}  // namespace epifv
