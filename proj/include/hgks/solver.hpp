#pragma once

// Flow solver: couples the spatial operator with the explicit S2O4 step or the
// implicit S2O3 dual-time step solved by LUSGS or GMRES.

#include "hgks/flow.hpp"
#include "hgks/implicit.hpp"
#include "hgks/timestepping.hpp"

#include <functional>
#include <string>

namespace hgks {

enum class Scheme { s2o4_e, s2o3_l, s2o3_g };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverOptions {
  Scheme scheme = Scheme::s2o3_l;
  FlowOptions flow;
  TimeControls time;
  LusgsOptions lusgs;
  KrylovConfig krylov;
  RadiusMode radius = RadiusMode::average;
  int dt_halvings = 0;  ///< retries with half the step after an inadmissible iterate
  bool operator==(const SolverOptions&) const = default;
};

struct StepInfo {
  double dt = 0.0;      ///< step actually taken
  double dt_s = 0.0;
  double dt_a = 0.0;
  int evaluations = 0;
  int halvings = 0;
  bool diverging = false;
};

/// Step number (1-based, the step being taken) and the pseudo-iteration report.
using StepResidualSink = std::function<void(int, const PseudoReport&)>;

/// Throws StateError naming the first inadmissible cell.
void check_admissible(const State& q);

/// Gauss-theorem gradients from face values averaged between the adjacent cells.
std::vector<Grad5> cell_average_gradients(const Mesh& mesh, const State& q);

class FlowSolver {
 public:
  /// Compact flavors start from `grad` if given, otherwise from cell_average_gradients.
  FlowSolver(const Mesh& mesh, SolverOptions options, State q, std::vector<Grad5> grad = {});
  ~FlowSolver();
  FlowSolver(const FlowSolver&) = delete;
  FlowSolver& operator=(const FlowSolver&) = delete;

  const Mesh& mesh() const { return *mesh_; }
  const SolverOptions& options() const { return options_; }
  const State& state() const { return q_; }
  const std::vector<Grad5>& gradients() const { return grad_; }
  double time() const { return time_; }
  int steps() const { return steps_; }

  /// CFL-limited physical step at the current state.
  double cfl_dt() const;
  StepInfo step(double dt);

  void set_residual_sink(StepResidualSink sink) { sink_ = std::move(sink); }

  /// L(Q) at the current state with the given averaging step.
  State residual(double dt_s);

 private:
  class Implicit;
  class Explicit;

  void take_step(double dt, StepInfo& info);

  const Mesh* mesh_;
  SolverOptions options_;
  SpatialOperator op_;
  State q_;
  std::vector<Grad5> grad_;
  std::vector<Grad5> pending_;
  double time_ = 0.0;
  int steps_ = 0;
  StepResidualSink sink_;
};

}  // namespace hgks
