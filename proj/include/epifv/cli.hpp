#ifndef EPIFV_CLI_HPP
#define EPIFV_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epifv/config.hpp"

namespace epifv::cli {

/// Runs the configured simulation, writing snapshots, the time series and a
/// run manifest under the output directory. Exit codes: 0 ok, 2 config
/// error, 3 solver failure (partial outputs retained, manifest marks the
/// failure).
int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir_override,
            const std::optional<std::uint64_t>& seed_override, std::ostream& out,
            std::ostream& err);

/// Prints one row per equilibrium point and alpha value, 9 decimal places,
/// with linear-stability verdicts. Exit 1 when any alpha has no real
/// equilibria.
int cmd_equilibria(const ModelParams& params, const std::vector<double>& alpha_sweep,
                   std::ostream& out);

/// Stability report plus Turing scan at an equilibrium (point = "E1"/"E2")
/// or an explicit "u,v,w" triple.
int cmd_stability(const ModelParams& params, const std::string& point, double d1, double d2,
                  double d3, std::ostream& out, std::ostream& err);

/// Refinement study per the config's [convergence] section; prints the table
/// and writes convergence.csv to the output directory. `levels_override`
/// regenerates the level list by doubling the first configured grid.
int cmd_convergence(const std::string& config_path, std::optional<int> levels_override,
                    const std::optional<std::string>& out_dir_override, std::ostream& out,
                    std::ostream& err);

/// Output directory resolution: absolute stays as is, otherwise prefixed by
/// $EPIFV_OUT_ROOT when that is set.
std::string resolve_out_dir(const std::string& dir);

}  // namespace epifv::cli

#endif
