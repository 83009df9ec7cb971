#pragma once

// Configuration files, field and profile output, residual logs and run reports.
// All formats are plain text; see docs/formats.md.

#include "hgks/cases.hpp"
#include "hgks/mesh.hpp"
#include "hgks/solver.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hgks {

/// Cells whose centroid lies within half a cell of an axis-aligned line.
struct LineSpec {
  int axis = 0;                ///< direction of the line
  Vec3 point = Vec3::Zero();   ///< any point on the line
  bool operator==(const LineSpec&) const = default;
};

LineSpec parse_line(const std::string& s);  ///< "x 0.05 0.05": axis, then the other two coordinates
std::string to_string(const LineSpec& l);

struct OutputConfig {
  std::string directory = "out";
  int vtk_every = 0;             ///< also write a field every this many steps; 0 = final only
  bool vtk = true;
  bool residual_log = true;
  std::string profile;           ///< line spec, empty for none
  bool operator==(const OutputConfig&) const = default;
};

struct SolverConfig {
  std::string case_name = "sod";
  int resolution = 0;            ///< 0 keeps the case default
  std::string mesh;              ///< mesh file replacing the generated one
  SolverOptions options;
  double stop_time = 0.0;
  int max_steps = 0;
  double steady_tol = 0.0;
  int threads = 1;
  OutputConfig output;
  bool operator==(const SolverConfig&) const = default;
};

/// Defaults of a case before any overrides.
SolverConfig default_config(const std::string& case_name, int resolution = 0);

/// Parses "[section]" headers and "key = value" lines; '#' starts a comment.
/// `overrides` are "section.key=value" items applied after the file.
/// Throws ConfigError naming the key and line.
SolverConfig parse_config(std::istream& in, const std::string& source = "<config>",
                          const std::vector<std::string>& overrides = {});
SolverConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
void write_config(const SolverConfig& c, std::ostream& out);

/// The mesh and case a configuration describes.
CaseSpec config_case(const SolverConfig& c);
Mesh config_mesh(const SolverConfig& c, const CaseSpec& cs);

/// 17 significant digits.
std::string format_double(double v);

/// Legacy ASCII unstructured grid with density, velocity, pressure and |grad rho| cell data.
/// Without gradients |grad rho| comes from cell averages.
void write_vtk(const Mesh& mesh, const State& q, std::ostream& out,
               const std::vector<Grad5>* gradients = nullptr);
void write_vtk(const Mesh& mesh, const State& q, const std::string& path,
               const std::vector<Grad5>* gradients = nullptr);

struct ProfileSample {
  double coord;
  double rho;
  Vec3 u;
  double p;
};

/// Samples sorted by the coordinate along the line. Throws Error if no cell qualifies.
std::vector<ProfileSample> extract_profile(const Mesh& mesh, const State& q, const LineSpec& line);
void write_profile(const std::vector<ProfileSample>& s, std::ostream& out);
std::vector<ProfileSample> read_profile(std::istream& in);

/// One line per pseudo-iteration: step stage m and the five residuals.
class ResidualLog {
 public:
  explicit ResidualLog(std::ostream& out);
  void operator()(int step, const PseudoReport& r);
  int lines() const { return lines_; }

 private:
  std::ostream* out_;
  int lines_ = 0;
};

struct ResidualEntry {
  int step, stage, iteration;
  Vec5 residual;
};
std::vector<ResidualEntry> read_residual_log(std::istream& in);

struct RunReport {
  std::string case_name;
  std::string scheme;
  std::string flavor;
  int cells = 0;
  int steps = 0;
  double time = 0.0;
  double min_dt = 0.0;
  double wall_seconds = 0.0;
  int diverging_steps = 0;
  bool steady = false;
  std::string residual_log;  ///< file name, empty if none
  std::map<std::string, double> diagnostics;
  bool operator==(const RunReport&) const = default;
};

void write_report(const RunReport& r, std::ostream& out);
RunReport read_report(std::istream& in);

struct ConvergenceRow {
  int n = 0;          ///< cells per direction
  int cells = 0;
  double error = 0.0; ///< L2 density error
  double order = 0.0; ///< against the previous row; NaN for the first
  double wall_seconds = 0.0;
};

/// "mesh,error,order" with meshes written as N^3x6.
void write_convergence_table(const std::vector<ConvergenceRow>& rows, std::ostream& out);

}  // namespace hgks
