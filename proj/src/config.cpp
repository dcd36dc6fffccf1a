#include "epifv/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "epifv/io.hpp"
#include "epifv/rng.hpp"

namespace epifv {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after number '" + v + "'");
  return out;
}

long parse_long(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  long out;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after integer '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  unsigned long long out;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected an unsigned integer, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after integer '" + v + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

struct LawSpec {
  std::string kind = "constant";
  double c = 0.1, slope = 1.0, M = 1e4, eps = 1e-4, d = 1.0, u_tilde = 0.0;
  std::size_t line = 0;

  DiffusionLaw build() const {
    try {
      if (kind == "constant") return DiffusionLaw::constant(c);
      if (kind == "linear") return DiffusionLaw::linear(slope);
      if (kind == "truncated_linear") return DiffusionLaw::truncated_linear(M, eps);
      if (kind == "truncated_inverse_square")
        return DiffusionLaw::truncated_inverse_square(d, u_tilde, M, eps);
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    }
    fail(line, "unknown diffusion kind '" + kind + "'");
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::array<LawSpec, 3> law_specs;
  std::optional<long> steps;
  bool have_dt = false;

  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"model",      "mesh",        "time",   "diffusion.1",
                                    "diffusion.2", "diffusion.3", "initial", "output",
                                    "solver",     "convergence"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) fail(lineno, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (section.empty()) fail(lineno, "key outside of any section");

    if (section == "model") {
      if (key == "variant") {
        if (value == "sir") cfg.params.variant = Variant::BaseSIR;
        else if (value == "sars") cfg.params.variant = Variant::SARS;
        else fail(lineno, "variant must be 'sir' or 'sars'");
      } else if (key == "alpha") cfg.params.alpha_incidence = parse_double(value, lineno);
      else if (key == "mu") cfg.params.mu = parse_double(value, lineno);
      else if (key == "gamma") cfg.params.gamma = parse_double(value, lineno);
      else if (key == "A") cfg.params.A = parse_double(value, lineno);
      else if (key == "r") cfg.params.r = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [model]");
    } else if (section == "mesh") {
      if (key == "nx") cfg.nx = static_cast<int>(parse_long(value, lineno));
      else if (key == "ny") cfg.ny = static_cast<int>(parse_long(value, lineno));
      else if (key == "lx") cfg.lx = parse_double(value, lineno);
      else if (key == "ly") cfg.ly = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [mesh]");
    } else if (section == "time") {
      if (key == "dt") {
        cfg.solver.dt = parse_double(value, lineno);
        have_dt = true;
      } else if (key == "t_end") cfg.solver.t_end = parse_double(value, lineno);
      else if (key == "steps") steps = parse_long(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [time]");
    } else if (section.rfind("diffusion.", 0) == 0) {
      LawSpec& spec = law_specs[section.back() - '1'];
      spec.line = lineno;
      if (key == "kind") spec.kind = value;
      else if (key == "c") spec.c = parse_double(value, lineno);
      else if (key == "slope") spec.slope = parse_double(value, lineno);
      else if (key == "M") spec.M = parse_double(value, lineno);
      else if (key == "eps") spec.eps = parse_double(value, lineno);
      else if (key == "d") spec.d = parse_double(value, lineno);
      else if (key == "u_tilde") spec.u_tilde = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [" + section + "]");
    } else if (section == "initial") {
      if (key == "preset") {
        if (value == "constant") cfg.initial.preset = InitialSpec::Preset::Constant;
        else if (value == "example1") cfg.initial.preset = InitialSpec::Preset::Example1;
        else if (value == "example2-random")
          cfg.initial.preset = InitialSpec::Preset::Example2Random;
        else if (value == "file") cfg.initial.preset = InitialSpec::Preset::File;
        else fail(lineno, "unknown preset '" + value + "'");
      } else if (key == "seed") cfg.initial.seed = parse_u64(value, lineno);
      else if (key == "c1") cfg.initial.constants[0] = parse_double(value, lineno);
      else if (key == "c2") cfg.initial.constants[1] = parse_double(value, lineno);
      else if (key == "c3") cfg.initial.constants[2] = parse_double(value, lineno);
      else if (key == "path") cfg.initial.path = value;
      else if (key == "eps0") cfg.initial.eps0 = parse_double(value, lineno);
      else if (key == "B") cfg.initial.bump_height = parse_double(value, lineno);
      else if (key == "beta") cfg.initial.bump_sharpness = parse_double(value, lineno);
      else if (key == "base1") cfg.initial.base[0] = parse_double(value, lineno);
      else if (key == "base2") cfg.initial.base[1] = parse_double(value, lineno);
      else if (key == "base3") cfg.initial.base[2] = parse_double(value, lineno);
      else if (key == "noise1") cfg.initial.noise[0] = parse_double(value, lineno);
      else if (key == "noise2") cfg.initial.noise[1] = parse_double(value, lineno);
      else if (key == "noise3") cfg.initial.noise[2] = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [initial]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else if (key == "snapshots") {
        cfg.snapshot_times.clear();
        for (const auto& item : split_list(value))
          cfg.snapshot_times.push_back(parse_double(item, lineno));
      } else fail(lineno, "unknown key '" + key + "' in [output]");
    } else if (section == "solver") {
      if (key == "picard_tol") cfg.solver.picard_tol = parse_double(value, lineno);
      else if (key == "picard_max") cfg.solver.picard_max = static_cast<int>(parse_long(value, lineno));
      else if (key == "cg_tol") cfg.solver.cg_tol = parse_double(value, lineno);
      else if (key == "cg_max") cfg.solver.cg_max = static_cast<int>(parse_long(value, lineno));
      else if (key == "damping") cfg.solver.damping = parse_double(value, lineno);
      else if (key == "envelope_multiplier")
        cfg.solver.envelope_multiplier = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [solver]");
    } else if (section == "convergence") {
      if (key == "manufactured") {
        if (value == "smooth") cfg.convergence.manufactured = ConvergenceSpec::Manufactured::Smooth;
        else if (value == "constant")
          cfg.convergence.manufactured = ConvergenceSpec::Manufactured::Constant;
        else if (value == "none") cfg.convergence.manufactured = ConvergenceSpec::Manufactured::None;
        else fail(lineno, "manufactured must be smooth, constant or none");
      } else if (key == "levels") {
        cfg.convergence.level_nx.clear();
        for (const auto& item : split_list(value))
          cfg.convergence.level_nx.push_back(static_cast<int>(parse_long(item, lineno)));
      } else if (key == "dt_over_h") cfg.convergence.dt_over_h = parse_double(value, lineno);
      else if (key == "t_end") cfg.convergence.t_end = parse_double(value, lineno);
      else if (key == "c1") cfg.convergence.constants[0] = parse_double(value, lineno);
      else if (key == "c2") cfg.convergence.constants[1] = parse_double(value, lineno);
      else if (key == "c3") cfg.convergence.constants[2] = parse_double(value, lineno);
      else fail(lineno, "unknown key '" + key + "' in [convergence]");
    }
  }

  if (steps) {
    if (have_dt) throw ConfigError("[time]: give either dt or steps, not both");
    if (*steps < 1) throw ConfigError("[time]: steps must be >= 1");
    cfg.solver.dt = cfg.solver.t_end / static_cast<double>(*steps);
  }
  for (int i = 0; i < 3; ++i) cfg.laws[i] = law_specs[i].build();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

void serialize_law(std::ostream& os, const DiffusionLaw& law) {
  switch (law.kind()) {
    case DiffusionLaw::Kind::Constant:
      os << "kind = constant\n"
         << "c = " << format_double(law.c()) << '\n';
      break;
    case DiffusionLaw::Kind::Linear:
      os << "kind = linear\n"
         << "slope = " << format_double(law.slope()) << '\n';
      break;
    case DiffusionLaw::Kind::TruncatedLinear:
      os << "kind = truncated_linear\n"
         << "M = " << format_double(law.M()) << '\n'
         << "eps = " << format_double(law.eps()) << '\n';
      break;
    case DiffusionLaw::Kind::TruncatedInverseSquare:
      os << "kind = truncated_inverse_square\n"
         << "d = " << format_double(law.d()) << '\n'
         << "u_tilde = " << format_double(law.u_tilde()) << '\n'
         << "M = " << format_double(law.M()) << '\n'
         << "eps = " << format_double(law.eps()) << '\n';
      break;
  }
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[model]\n"
     << "variant = " << (cfg.params.variant == Variant::SARS ? "sars" : "sir") << '\n'
     << "alpha = " << format_double(cfg.params.alpha_incidence) << '\n'
     << "mu = " << format_double(cfg.params.mu) << '\n'
     << "gamma = " << format_double(cfg.params.gamma) << '\n'
     << "A = " << format_double(cfg.params.A) << '\n'
     << "r = " << format_double(cfg.params.r) << '\n';

  os << "\n[mesh]\n"
     << "nx = " << cfg.nx << '\n'
     << "ny = " << cfg.ny << '\n'
     << "lx = " << format_double(cfg.lx) << '\n'
     << "ly = " << format_double(cfg.ly) << '\n';

  os << "\n[time]\n"
     << "dt = " << format_double(cfg.solver.dt) << '\n'
     << "t_end = " << format_double(cfg.solver.t_end) << '\n';

  for (int i = 0; i < 3; ++i) {
    os << "\n[diffusion." << i + 1 << "]\n";
    serialize_law(os, cfg.laws[i]);
  }

  os << "\n[initial]\n";
  switch (cfg.initial.preset) {
    case InitialSpec::Preset::Constant:
      os << "preset = constant\n"
         << "c1 = " << format_double(cfg.initial.constants[0]) << '\n'
         << "c2 = " << format_double(cfg.initial.constants[1]) << '\n'
         << "c3 = " << format_double(cfg.initial.constants[2]) << '\n';
      break;
    case InitialSpec::Preset::Example1:
      os << "preset = example1\n"
         << "eps0 = " << format_double(cfg.initial.eps0) << '\n'
         << "B = " << format_double(cfg.initial.bump_height) << '\n'
         << "beta = " << format_double(cfg.initial.bump_sharpness) << '\n';
      break;
    case InitialSpec::Preset::Example2Random:
      os << "preset = example2-random\n";
      if (cfg.initial.seed) os << "seed = " << *cfg.initial.seed << '\n';
      for (int i = 0; i < 3; ++i)
        os << "base" << i + 1 << " = " << format_double(cfg.initial.base[i]) << '\n';
      for (int i = 0; i < 3; ++i)
        os << "noise" << i + 1 << " = " << format_double(cfg.initial.noise[i]) << '\n';
      break;
    case InitialSpec::Preset::File:
      os << "preset = file\n"
         << "path = " << cfg.initial.path << '\n';
      break;
  }

  os << "\n[output]\n"
     << "dir = " << cfg.out_dir << '\n';
  os << "snapshots = ";
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
    os << (i ? "," : "") << format_double(cfg.snapshot_times[i]);
  os << '\n';

  os << "\n[solver]\n"
     << "picard_tol = " << format_double(cfg.solver.picard_tol) << '\n'
     << "picard_max = " << cfg.solver.picard_max << '\n'
     << "cg_tol = " << format_double(cfg.solver.cg_tol) << '\n'
     << "cg_max = " << cfg.solver.cg_max << '\n'
     << "damping = " << format_double(cfg.solver.damping) << '\n'
     << "envelope_multiplier = " << format_double(cfg.solver.envelope_multiplier) << '\n';

  os << "\n[convergence]\n";
  if (cfg.convergence.manufactured) {
    os << "manufactured = ";
    switch (*cfg.convergence.manufactured) {
      case ConvergenceSpec::Manufactured::Smooth: os << "smooth\n"; break;
      case ConvergenceSpec::Manufactured::Constant: os << "constant\n"; break;
      case ConvergenceSpec::Manufactured::None: os << "none\n"; break;
    }
  }
  os << "levels = ";
  for (std::size_t i = 0; i < cfg.convergence.level_nx.size(); ++i)
    os << (i ? "," : "") << cfg.convergence.level_nx[i];
  os << '\n'
     << "dt_over_h = " << format_double(cfg.convergence.dt_over_h) << '\n'
     << "t_end = " << format_double(cfg.convergence.t_end) << '\n'
     << "c1 = " << format_double(cfg.convergence.constants[0]) << '\n'
     << "c2 = " << format_double(cfg.convergence.constants[1]) << '\n'
     << "c3 = " << format_double(cfg.convergence.constants[2]) << '\n';
  return os.str();
}

void RunConfig::validate() const {
  params.validate();
  if (nx < 1 || ny < 1) throw ConfigError("[mesh]: nx and ny must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("[mesh]: lx and ly must be > 0");
  solver.validate();
  if (initial.preset == InitialSpec::Preset::Example2Random && !initial.seed)
    throw ConfigError("[initial]: preset example2-random requires a seed");
  if (initial.preset == InitialSpec::Preset::File && initial.path.empty())
    throw ConfigError("[initial]: preset file requires a path");
  for (double t : snapshot_times)
    if (t < 0.0 || t > solver.t_end + 1e-12)
      throw ConfigError("[output]: snapshot time outside [0, t_end]");
}

State build_initial_state(const RunConfig& cfg, const Mesh& mesh) {
  State s;
  const int n = mesh.cell_count();
  switch (cfg.initial.preset) {
    case InitialSpec::Preset::Constant:
      s.u1 = Field(n, cfg.initial.constants[0]);
      s.u2 = Field(n, cfg.initial.constants[1]);
      s.u3 = Field(n, cfg.initial.constants[2]);
      break;
    case InitialSpec::Preset::Example1: {
      const auto& init = cfg.initial;
      s.u1 = Field(n, init.eps0);
      s.u2 = project_initial(mesh, [&init](double x, double y) {
        double v = 0.0;
        for (const auto& c : init.bump_centers)
          v += 1.0 / std::cosh(init.bump_sharpness * (x - c[0])) /
               std::cosh(init.bump_sharpness * (y - c[1]));
        return init.bump_height * v;
      });
      s.u3 = Field(n, 0.0);
      break;
    }
    case InitialSpec::Preset::Example2Random: {
      if (!cfg.initial.seed)
        throw ConfigError("[initial]: preset example2-random requires a seed");
      SplitMix64 rng(*cfg.initial.seed);
      std::array<Field*, 3> f = {&s.u1, &s.u2, &s.u3};
      for (int i = 0; i < 3; ++i) {
        *f[i] = Field(n);
        for (int k = 0; k < n; ++k)
          (*f[i])[k] = cfg.initial.base[i] + cfg.initial.noise[i] * rng.uniform();
      }
      break;
    }
    case InitialSpec::Preset::File: {
      const SnapshotData data = read_snapshot_csv(cfg.initial.path);
      if (data.u[0].size() != static_cast<std::size_t>(n))
        throw ConfigError("[initial]: file has " + std::to_string(data.u[0].size()) +
                          " cells, mesh has " + std::to_string(n));
      s.u1 = project_initial(mesh, data.u[0]);
      s.u2 = project_initial(mesh, data.u[1]);
      s.u3 = project_initial(mesh, data.u[2]);
      break;
    }
  }
  return s;
}

}  // namespace epifv
