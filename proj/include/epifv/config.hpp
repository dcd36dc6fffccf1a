#ifndef EPIFV_CONFIG_HPP
#define EPIFV_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epifv/model.hpp"
#include "epifv/solver.hpp"

namespace epifv {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitialSpec {
  enum class Preset { Constant, Example1, Example2Random, File };
  Preset preset = Preset::Constant;

  std::optional<std::uint64_t> seed;      // required by Example2Random
  std::array<double, 3> constants{0.0, 0.0, 0.0};
  std::string path;                        // per-cell CSV for File

  // Example1: flat susceptible background plus sech-bump infection pockets.
  double eps0 = 0.01;
  double bump_height = 5000.0;   // B
  double bump_sharpness = 2000.0;  // beta
  std::vector<std::array<double, 2>> bump_centers{
      {0.25, 0.25}, {0.125, 0.125}, {0.125, 0.375}, {0.375, 0.125}, {0.375, 0.375}};

  // Example2Random: equilibrium plus small uniform noise.
  std::array<double, 3> base{4.010906415, 1.178843705, 4.810249881};
  std::array<double, 3> noise{0.001, 0.001, 0.001};
};

struct ConvergenceSpec {
  enum class Manufactured { Smooth, Constant, None };
  std::optional<Manufactured> manufactured;  // required by cmd_convergence
  std::vector<int> level_nx{16, 32, 64};
  double dt_over_h = 0.2;
  double t_end = 0.25;
  std::array<double, 3> constants{1.0, 2.0, 3.0};  // for Manufactured::Constant
};

struct RunConfig {
  ModelParams params;
  std::array<DiffusionLaw, 3> laws{DiffusionLaw::constant(0.1), DiffusionLaw::constant(0.1),
                                   DiffusionLaw::constant(0.1)};
  int nx = 100, ny = 100;
  double lx = 1.0, ly = 1.0;
  SolverConfig solver;
  InitialSpec initial;
  std::vector<double> snapshot_times;
  std::string out_dir = "out";
  ConvergenceSpec convergence;

  /// Cross-field rules (the per-field ones are enforced while parsing).
  void validate() const;
};

/// Parses the flat key-value format; errors carry "line N:" diagnostics.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Deterministic serialization; parse(serialize(c)) is semantically c and
/// serialize is idempotent over parse.
std::string serialize_config(const RunConfig& cfg);

/// Builds the initial state for the configured preset. Example2Random draws
/// species-major (all u1 cells, then u2, then u3) from one SplitMix64 stream.
State build_initial_state(const RunConfig& cfg, const Mesh& mesh);

}  // namespace epifv

#endif
