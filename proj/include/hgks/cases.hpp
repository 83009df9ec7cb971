#pragma once

// Benchmark problems, the exact Riemann solution and error norms.

#include "hgks/mesh.hpp"
#include "hgks/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hgks {

using Field = std::function<Vec5(const Vec3&)>;
using ExactField = std::function<Vec5(const Vec3&, double)>;

struct CaseSpec {
  std::string name;
  std::function<Mesh()> build_mesh;
  Field initial;               ///< conserved state as a function of position
  bool smooth = false;         ///< compact runs take initial gradients from the analytic field
  SolverOptions options;       ///< case defaults
  double stop_time = 0.0;
  int max_steps = 0;           ///< > 0 caps the run (steady cases)
  double steady_tol = 0.0;     ///< > 0 stops once the physical residual drop reaches this factor
  ExactField exact;            ///< empty if none
};

/// Smooth density wave in [0,2]^3 on N^3 x 6 tetrahedra.
CaseSpec case_accuracy3d(int n);
CaseSpec case_sod();
CaseSpec case_lax();
CaseSpec case_riemann2d(int n = 100);
CaseSpec case_viscous_shock_tube(int nx = 250, int ny = 125);
CaseSpec case_cavity(double re = 1000.0, int n = 12);

std::vector<std::string> case_names();
/// Named case with its default resolution.
CaseSpec make_case(const std::string& name);
/// Named case at a resolution (cells along the leading axis); 0 keeps the default.
/// Throws ConfigError for cases with a fixed mesh.
CaseSpec make_case(const std::string& name, int resolution);

/// Cell averages of a field by n^3-point cell quadrature.
State cell_averages(const Mesh& mesh, const Field& f, int n = 4);
/// Gauss-theorem gradients of a field from its values at face quadrature points.
std::vector<Grad5> analytic_gradients(const Mesh& mesh, const Field& f);

/// Exact solution of the 1D Riemann problem for a gamma-law gas.
class ExactRiemann {
 public:
  struct State1 {
    double rho, u, p;
  };

  ExactRiemann(State1 left, State1 right);

  bool vacuum() const { return vacuum_; }
  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }
  /// Density left and right of the contact.
  double rho_star_left() const;
  double rho_star_right() const;
  /// Solution at similarity coordinate s = (x - x0) / t.
  State1 sample(double s) const;

 private:
  double pressure_function(double p, const State1& k, double a, double& dfdp) const;

  State1 l_, r_;
  double al_, ar_;
  double p_star_ = 0.0, u_star_ = 0.0;
  bool vacuum_ = false;
};

struct Norms {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

/// Volume-weighted norms of a - b.
Norms error_norms(const Mesh& mesh, const std::vector<double>& a, const std::vector<double>& b);

/// Observed order between two errors on meshes whose sizes differ by h_ratio (> 1).
double observed_order(double coarse, double fine, double h_ratio);

/// Density error norms against exact cell averages at time t.
Norms density_error(const Mesh& mesh, const State& q, const ExactField& exact, double t);

struct ProfileCheck {
  int samples = 0;
  double l1 = 0.0;         ///< integral of |rho - rho_exact| along the line
  double overshoot = 0.0;  ///< excursion beyond the exact extrema over the exact density range
};

/// Centerline density of a 1D Riemann case (line along x through the box center)
/// against the exact solution at time t. The membrane sits at x = 0.5.
ProfileCheck riemann_centerline_check(const Mesh& mesh, const State& q, const CaseSpec& c,
                                      double t);

/// Largest density difference between cells mirrored across x = y, over the density range.
double diagonal_symmetry_error(const Mesh& mesh, const State& q);

/// Height of the primary vortex behind the reflected shock: the highest cell centroid in
/// 0.3 < x < 0.7, y > 0.02 whose vorticity has the sign of the strongest rotation there
/// and at least a tenth of its magnitude.
double primary_vortex_height(const Mesh& mesh, const State& q);

struct RunOptions {
  double stop_time = 0.0;
  int max_steps = 0;
  double steady_tol = 0.0;
  std::function<void(const FlowSolver&, const StepInfo&)> on_step;
};

struct RunResult {
  int steps = 0;
  double time = 0.0;
  double min_dt = 0.0;
  double wall_seconds = 0.0;
  int diverging_steps = 0;
  std::vector<Vec5> physical_residual;  ///< rms of (Q^{n+1} - Q^n) / dt per step
  bool steady = false;                  ///< steady_tol reached
};

/// Steps until stop_time (last step clipped), max_steps, or the steady criterion.
RunResult run(FlowSolver& solver, const RunOptions& options);

/// Solver for a case; `options` overrides the case defaults.
std::unique_ptr<FlowSolver> make_solver(const Mesh& mesh, const CaseSpec& c,
                                        const SolverOptions& options);

}  // namespace hgks
