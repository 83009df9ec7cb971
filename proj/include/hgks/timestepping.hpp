#pragma once

// Two-stage time discretizations on a vector of 5-component cell states:
// the explicit fourth-order scheme driven by L and dL/dt, and the implicit
// third-order dual-time scheme whose stages are solved by pseudo-iterations.

#include "hgks/types.hpp"

#include <functional>
#include <vector>

namespace hgks {

using State = std::vector<Vec5>;

struct TimeControls {
  double cfl = 1.0;
  double cfl_a = 2000.0;     ///< pseudo time step
  double cfl_s = 1.0;        ///< cap on the flux-averaging step
  int k_a = 3;               ///< pseudo-iterations per stage
  double pseudo_tol = 0.0;   ///< > 0 stops a stage once the pseudo-residual falls below it
  double divergence = 1e6;   ///< explicit runs abort when |L| grows by this factor in one step
  bool operator==(const TimeControls&) const = default;
};

/// One line of the residual log.
struct PseudoReport {
  int stage = 1;
  int iteration = 0;
  Vec5 residual = Vec5::Zero();  ///< root mean square over cells, per equation
};

using ResidualSink = std::function<void(const PseudoReport&)>;

Vec5 rms(const State& r);

/// A semi-discrete system dQ/dt = L(Q) with an increment solver for
/// [alpha I - sigma dL/dQ] dQ = rhs.
class ImplicitSystem {
 public:
  virtual ~ImplicitSystem() = default;
  virtual void residual(const State& q, State& l) = 0;
  /// Called after every pseudo update; compact systems adopt their refreshed gradients.
  virtual void accept() {}
  /// Throws StateError if q is not acceptable.
  virtual void check(const State&) const {}
  virtual void solve(const State& q, double alpha, double sigma, const State& rhs, State& dq) = 0;
};

struct ImplicitStepInfo {
  int evaluations = 0;
  bool diverging = false;  ///< pseudo-residual grew over a stage
};

/// Advances q by dt. dt_a is the pseudo time step (infinite allowed).
/// Throws StateError if an iterate leaves the admissible set.
ImplicitStepInfo s2o3_step(ImplicitSystem& sys, State& q, double dt, double dt_a,
                           const TimeControls& controls, const ResidualSink& sink = {});

/// Stage-1 and stage-2 pseudo-residuals (the right-hand sides being driven to zero).
void stage1_rhs(const State& qn, const State& qm, const State& ln, const State& lm, double dt,
                State& rhs);
void stage2_rhs(const State& qn, const State& qm, const State& ln, const State& ls,
                const State& lm, double dt, State& rhs);

class ExplicitSystem {
 public:
  virtual ~ExplicitSystem() = default;
  /// L and dL/dt at q for a step of length dt.
  virtual void rates(const State& q, double dt, State& l, State& lt) = 0;
  virtual void accept() {}
  virtual void check(const State&) const {}
};

/// Two-stage fourth-order step. Throws StateError on inadmissible stages.
void s2o4_step(ExplicitSystem& sys, State& q, double dt, const TimeControls& controls);

}  // namespace hgks
