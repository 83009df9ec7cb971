#include "hgks/solver.hpp"

#include "hgks/boundary.hpp"

#include <cmath>
#include <limits>

namespace hgks {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::s2o4_e:
      return "s2o4_e";
    case Scheme::s2o3_l:
      return "s2o3_l";
    case Scheme::s2o3_g:
      return "s2o3_g";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "s2o4_e") return Scheme::s2o4_e;
  if (s == "s2o3_l") return Scheme::s2o3_l;
  if (s == "s2o3_g") return Scheme::s2o3_g;
  throw ConfigError("unknown scheme '" + s + "'");
}

void check_admissible(const State& q) {
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!q[i].allFinite() || !admissible(q[i]))
      throw StateError("inadmissible state in cell " + std::to_string(i), static_cast<int>(i));
}

std::vector<Grad5> cell_average_gradients(const Mesh& mesh, const State& q) {
  std::vector<std::vector<Vec5>> values(mesh.n_faces());
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    const Vec5 qr = f.right >= 0 ? q[f.right] : ghost_state(mesh.boundary(f), f.normal, q[f.left]);
    values[fi].assign(f.quad.size(), 0.5 * (q[f.left] + qr));
  }
  return gauss_gradients(mesh, values);
}

namespace {

FlowOptions adjusted(FlowOptions flow, Scheme scheme) {
  // The explicit scheme needs the flux and its derivative at the start of the step.
  if (scheme == Scheme::s2o4_e) flow.flux_time = FluxTime::instantaneous;
  return flow;
}

double min_wave_time(const Mesh& mesh, const State& q) { return cfl_time_step(mesh, q, 1.0); }

}  // namespace

class FlowSolver::Implicit : public ImplicitSystem {
 public:
  Implicit(FlowSolver& s, double dt_s) : s_(s), dt_s_(dt_s) {}

  void residual(const State& q, State& l) override {
    FlowRequest req;
    req.dt_s = dt_s_;
    req.gradients = s_.op_.compact();
    s_.op_.evaluate(q, s_.op_.compact() ? &s_.grad_ : nullptr, req, eval_);
    l = eval_.L;
    if (req.gradients) s_.pending_ = std::move(eval_.grad);
  }

  void accept() override {
    if (s_.op_.compact()) s_.grad_ = s_.pending_;
  }

  void check(const State& q) const override { check_admissible(q); }

  void solve(const State& q, double alpha, double sigma, const State& rhs, State& dq) override {
    IncrementSystem sys(*s_.mesh_, q, alpha, sigma, s_.options_.radius);
    if (s_.options_.scheme == Scheme::s2o3_l) {
      lusgs_solve(sys, rhs, s_.options_.lusgs, dq);
    } else {
      sys.assemble_blocks();
      gmres_solve(sys, rhs, s_.options_.krylov, dq);
    }
  }

 private:
  FlowSolver& s_;
  double dt_s_;
  FlowEvaluation eval_;
};

class FlowSolver::Explicit : public ExplicitSystem {
 public:
  explicit Explicit(FlowSolver& s) : s_(s) {}

  void rates(const State& q, double dt, State& l, State& lt) override {
    FlowRequest req;
    req.dt_s = dt;
    req.rate = true;
    req.gradients = s_.op_.compact();
    req.t_point = 0.5 * dt;
    s_.op_.evaluate(q, s_.op_.compact() ? &s_.grad_ : nullptr, req, eval_);
    l = eval_.L;
    lt = eval_.Lt;
    if (req.gradients) s_.pending_ = std::move(eval_.grad);
  }

  void accept() override {
    if (s_.op_.compact()) s_.grad_ = s_.pending_;
  }

  void check(const State& q) const override { check_admissible(q); }

 private:
  FlowSolver& s_;
  FlowEvaluation eval_;
};

FlowSolver::FlowSolver(const Mesh& mesh, SolverOptions options, State q, std::vector<Grad5> grad)
    : mesh_(&mesh),
      options_(options),
      op_(mesh, adjusted(options.flow, options.scheme)),
      q_(std::move(q)),
      grad_(std::move(grad)) {
  if (static_cast<int>(q_.size()) != mesh.n_cells())
    throw SolverError("initial state size does not match the mesh");
  check_admissible(q_);
  if (op_.compact() && grad_.empty()) grad_ = cell_average_gradients(mesh, q_);
  if (op_.compact() && static_cast<int>(grad_.size()) != mesh.n_cells())
    throw SolverError("initial gradient size does not match the mesh");
}

FlowSolver::~FlowSolver() = default;

double FlowSolver::cfl_dt() const { return cfl_time_step(*mesh_, q_, options_.time.cfl); }

State FlowSolver::residual(double dt_s) {
  FlowRequest req;
  req.dt_s = dt_s;
  FlowEvaluation e;
  op_.evaluate(q_, op_.compact() ? &grad_ : nullptr, req, e);
  return e.L;
}

void FlowSolver::take_step(double dt, StepInfo& info) {
  info.dt = dt;
  const TimeControls& tc = options_.time;
  if (options_.scheme == Scheme::s2o4_e) {
    info.dt_s = dt;
    info.dt_a = std::numeric_limits<double>::infinity();
    Explicit sys(*this);
    s2o4_step(sys, q_, dt, tc);
    info.evaluations = 2;
    return;
  }
  const double wave = min_wave_time(*mesh_, q_);
  info.dt_s = std::min(dt, tc.cfl_s * wave);
  info.dt_a = tc.cfl_a > 0.0 ? tc.cfl_a * wave : std::numeric_limits<double>::infinity();
  Implicit sys(*this, info.dt_s);
  const int step_no = steps_ + 1;
  ResidualSink sink;
  if (sink_) sink = [&](const PseudoReport& r) { sink_(step_no, r); };
  const ImplicitStepInfo r = s2o3_step(sys, q_, dt, info.dt_a, tc, sink);
  info.evaluations = r.evaluations;
  info.diverging = r.diverging;
}

StepInfo FlowSolver::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError("physical time step must be positive");
  const State q0 = q_;
  const std::vector<Grad5> g0 = grad_;
  StepInfo info;
  for (;;) {
    try {
      take_step(dt, info);
      break;
    } catch (const StateError&) {
      if (info.halvings >= options_.dt_halvings) throw;
      q_ = q0;
      grad_ = g0;
      dt *= 0.5;
      ++info.halvings;
    }
  }
  time_ += info.dt;
  ++steps_;
  return info;
}

}  // namespace hgks
