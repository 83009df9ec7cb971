#pragma once

// Configured runs behind the command-line front end.

#include "hgks/io.hpp"

#include <iosfwd>
#include <vector>

namespace hgks {

struct Simulation {
  Mesh mesh;
  State state;
  RunReport report;
};

/// Runs a configuration. With `write`, the output directory receives the final
/// field (field.vtk), the profile (profile.csv), the residual log (residuals.log),
/// the resolved configuration (config.ini) and the report (report.txt).
/// `progress` gets one line per physical step when given.
Simulation simulate(const SolverConfig& config, bool write, std::ostream* progress = nullptr);

/// Density L2 errors of the accuracy case over a mesh sequence.
std::vector<ConvergenceRow> convergence_study(const SolverConfig& base, const std::vector<int>& meshes,
                                              std::ostream* progress = nullptr);

struct Comparison {
  RunReport a, b;
  double wall_ratio = 0.0;       ///< b over a
  double max_density_delta = 0.0;
  double max_velocity_delta = 0.0;
};

/// Runs two configurations of the same case on the same mesh.
Comparison compare_runs(const SolverConfig& a, const SolverConfig& b, std::ostream* progress = nullptr);
void write_comparison(const Comparison& c, std::ostream& out);

}  // namespace hgks
