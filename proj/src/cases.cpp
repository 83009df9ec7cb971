#include "hgks/cases.hpp"

#include "hgks/io.hpp"

#include <chrono>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace hgks {

namespace {

constexpr double kPi = std::numbers::pi;

BoundarySpec bc(BoundaryKind k) {
  BoundarySpec s;
  s.kind = k;
  return s;
}

Field two_state(double x0, Vec5 left, Vec5 right) {
  return [=](const Vec3& x) { return x[0] < x0 ? left : right; };
}

}  // namespace

CaseSpec case_accuracy3d(int n) {
  CaseSpec c;
  c.name = "accuracy3d";
  c.build_mesh = [n] {
    BoxSpec box;
    box.n = {n, n, n};
    box.hi = Vec3::Constant(2.0);
    make_all_periodic(box);
    return generate_box_tet6(box);
  };
  c.exact = [](const Vec3& x, double t) {
    return to_conserved(1.0 + 0.2 * std::sin(kPi * (x.sum() - 3.0 * t)), 1.0, 1.0, 1.0, 1.0);
  };
  c.initial = [e = c.exact](const Vec3& x) { return e(x, 0.0); };
  c.smooth = true;
  c.stop_time = 2.0;
  auto& o = c.options;
  o.flow.collision.kind = kinetic::CollisionModel::Kind::zero;
  o.flow.recon.linear_weights = true;
  o.time.cfl = 4.0;
  o.time.k_a = 5;
  o.krylov.dim = 10;
  return c;
}

CaseSpec case_sod() {
  CaseSpec c;
  c.name = "sod";
  c.build_mesh = [] {
    BoxSpec box;
    box.n = {100, 5, 5};
    box.hi = Vec3(1.0, 0.1, 0.1);
    return generate_box_hex(box);
  };
  c.initial = two_state(0.5, to_conserved(1.0, 0, 0, 0, 1.0), to_conserved(0.125, 0, 0, 0, 0.1));
  c.stop_time = 0.2;
  c.options.time.cfl = 2.5;
  c.options.time.k_a = 4;
  return c;
}

CaseSpec case_lax() {
  CaseSpec c = case_sod();
  c.name = "lax";
  c.initial =
      two_state(0.5, to_conserved(0.445, 0.698, 0, 0, 3.528), to_conserved(0.5, 0, 0, 0, 0.571));
  c.stop_time = 0.14;
  c.options.time.cfl = 3.0;
  c.options.time.k_a = 3;
  return c;
}

CaseSpec case_riemann2d(int n) {
  CaseSpec c;
  c.name = "riemann2d";
  c.build_mesh = [n] {
    BoxSpec box;
    box.n = {n, n, 3};
    box.hi = Vec3(1.0, 1.0, 0.03);
    return generate_box_hex(box);
  };
  c.initial = [](const Vec3& x) {
    const bool right = x[0] > 0.5, top = x[1] > 0.5;
    if (right && top) return to_conserved(1.5, 0, 0, 0, 1.5);
    if (!right && top) return to_conserved(0.5323, 1.206, 0, 0, 0.3);
    if (!right && !top) return to_conserved(0.138, 1.206, 1.206, 0, 0.029);
    return to_conserved(0.5323, 0, 1.206, 0, 0.3);
  };
  c.stop_time = 0.4;
  c.options.time.cfl = 3.0;
  c.options.time.k_a = 3;
  return c;
}

CaseSpec case_viscous_shock_tube(int nx, int ny) {
  CaseSpec c;
  c.name = "viscous_shock_tube";
  c.build_mesh = [nx, ny] {
    BoxSpec box;
    box.n = {nx, ny, 3};
    box.hi = Vec3(1.0, 0.5, 0.006);
    box.stretch[1] = wall_clustering_map();
    box.boundaries = {bc(BoundaryKind::wall_adiabatic), bc(BoundaryKind::wall_adiabatic),
                      bc(BoundaryKind::wall_adiabatic), bc(BoundaryKind::symmetry),
                      bc(BoundaryKind::symmetry),       bc(BoundaryKind::symmetry)};
    return generate_box_hex(box);
  };
  c.initial = two_state(0.5, to_conserved(120.0, 0, 0, 0, 120.0 / kGamma),
                        to_conserved(1.2, 0, 0, 0, 1.2 / kGamma));
  c.stop_time = 1.0;
  auto& o = c.options;
  o.flow.collision.kind = kinetic::CollisionModel::Kind::viscous;
  const double a_ref = 1.0;  // sound speed of the right state
  o.flow.collision.mu = 1.2 * a_ref * 1.0 / 200.0;
  o.time.cfl = 3.5;
  o.time.k_a = 3;
  return c;
}

CaseSpec case_cavity(double re, int n) {
  CaseSpec c;
  c.name = re >= 2000.0 ? "cavity3200" : "cavity1000";
  const double lid = 0.15;  // Mach 0.15 with unit sound speed
  const double rho = 1.0, p = 1.0 / kGamma;
  c.build_mesh = [n, lid, rho, p] {
    BoxSpec box;
    box.n = {n, n, n};
    for (int k = 0; k < 3; ++k) box.stretch[k] = tanh_two_sided_map(n, 0.025);
    BoundarySpec wall = bc(BoundaryKind::wall_isothermal);
    wall.temperature = p / rho;
    BoundarySpec top = wall;
    top.kind = BoundaryKind::moving_wall;
    top.wall_velocity = Vec3(lid, 0, 0);
    box.boundaries = {wall, wall, wall, top, wall, wall};
    return generate_box_tet6(box);
  };
  c.initial = [rho, p](const Vec3&) { return to_conserved(rho, 0, 0, 0, p); };
  auto& o = c.options;
  o.flow.collision.kind = kinetic::CollisionModel::Kind::viscous;
  o.flow.collision.mu = rho * lid * 1.0 / re;
  o.time.k_a = 1;
  o.lusgs.sweeps = 2;
  if (re >= 2000.0) {
    o.time.cfl = 6.0;
    o.krylov.dim = 2;
    c.stop_time = 20.0;
  } else {
    o.time.cfl = 4.0;
    c.max_steps = 2500;
    c.stop_time = 1e9;
    c.steady_tol = 1e-4;
  }
  return c;
}

std::vector<std::string> case_names() {
  return {"accuracy3d", "sod", "lax", "riemann2d", "viscous_shock_tube", "cavity1000", "cavity3200"};
}

CaseSpec make_case(const std::string& name) {
  if (name == "accuracy3d") return case_accuracy3d(10);
  if (name == "sod") return case_sod();
  if (name == "lax") return case_lax();
  if (name == "riemann2d") return case_riemann2d();
  if (name == "viscous_shock_tube") return case_viscous_shock_tube();
  if (name == "cavity1000") return case_cavity(1000.0);
  if (name == "cavity3200") return case_cavity(3200.0);
  throw ConfigError("unknown case '" + name + "'");
}

CaseSpec make_case(const std::string& name, int resolution) {
  if (resolution == 0) return make_case(name);
  if (resolution < 0) throw ConfigError("resolution must be positive");
  if (name == "accuracy3d") return case_accuracy3d(resolution);
  if (name == "riemann2d") return case_riemann2d(resolution);
  if (name == "viscous_shock_tube") return case_viscous_shock_tube(resolution, std::max(1, resolution / 2));
  if (name == "cavity1000") return case_cavity(1000.0, resolution);
  if (name == "cavity3200") return case_cavity(3200.0, resolution);
  make_case(name);
  throw ConfigError("case '" + name + "' has a fixed mesh");
}

State cell_averages(const Mesh& mesh, const Field& f, int n) {
  State q(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) {
    Vec5 s = Vec5::Zero();
    for (const auto& qp : cell_quadrature(mesh, i, n)) s += qp.w * f(qp.x);
    q[i] = s;
  }
  return q;
}

std::vector<Grad5> analytic_gradients(const Mesh& mesh, const Field& f) {
  return field_gradients(mesh, f);
}

ExactRiemann::ExactRiemann(State1 left, State1 right) : l_(left), r_(right) {
  al_ = std::sqrt(kGamma * l_.p / l_.rho);
  ar_ = std::sqrt(kGamma * r_.p / r_.rho);
  const double g = kGamma;
  if (2.0 / (g - 1.0) * (al_ + ar_) <= r_.u - l_.u) {
    vacuum_ = true;
    return;
  }
  // Primitive-variable guess, then Newton on f_l(p) + f_r(p) + du = 0.
  const double du = r_.u - l_.u;
  double p = 0.5 * (l_.p + r_.p) - 0.125 * du * (l_.rho + r_.rho) * (al_ + ar_);
  p = std::max(p, 1e-8);
  for (int it = 0; it < 200; ++it) {
    double dl, dr;
    const double f = pressure_function(p, l_, al_, dl) + pressure_function(p, r_, ar_, dr) + du;
    double next = p - f / (dl + dr);
    if (next <= 0.0) next = 0.5 * p;
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-14) break;
  }
  double dl, dr;
  p_star_ = p;
  u_star_ = 0.5 * (l_.u + r_.u) +
            0.5 * (pressure_function(p, r_, ar_, dr) - pressure_function(p, l_, al_, dl));
}

double ExactRiemann::pressure_function(double p, const State1& k, double a, double& dfdp) const {
  const double g = kGamma;
  if (p > k.p) {
    const double A = 2.0 / ((g + 1.0) * k.rho);
    const double B = (g - 1.0) / (g + 1.0) * k.p;
    const double s = std::sqrt(A / (p + B));
    dfdp = s * (1.0 - 0.5 * (p - k.p) / (p + B));
    return (p - k.p) * s;
  }
  const double e = (g - 1.0) / (2.0 * g);
  dfdp = 1.0 / (k.rho * a) * std::pow(p / k.p, -(g + 1.0) / (2.0 * g));
  return 2.0 * a / (g - 1.0) * (std::pow(p / k.p, e) - 1.0);
}

double ExactRiemann::rho_star_left() const {
  const double g = kGamma;
  const double r = p_star_ / l_.p;
  if (p_star_ > l_.p) {
    const double m = (g - 1.0) / (g + 1.0);
    return l_.rho * (r + m) / (m * r + 1.0);
  }
  return l_.rho * std::pow(r, 1.0 / g);
}

double ExactRiemann::rho_star_right() const {
  const double g = kGamma;
  const double r = p_star_ / r_.p;
  if (p_star_ > r_.p) {
    const double m = (g - 1.0) / (g + 1.0);
    return r_.rho * (r + m) / (m * r + 1.0);
  }
  return r_.rho * std::pow(r, 1.0 / g);
}

ExactRiemann::State1 ExactRiemann::sample(double s) const {
  if (vacuum_) throw SolverError("exact Riemann solution contains vacuum");
  const double g = kGamma;
  if (s <= u_star_) {
    if (p_star_ > l_.p) {
      const double sl = l_.u - al_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / l_.p +
                                                (g - 1.0) / (2.0 * g));
      if (s <= sl) return l_;
      return {rho_star_left(), u_star_, p_star_};
    }
    const double head = l_.u - al_;
    const double a_star = al_ * std::pow(p_star_ / l_.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - a_star;
    if (s <= head) return l_;
    if (s >= tail) return {rho_star_left(), u_star_, p_star_};
    const double c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * al_) * (l_.u - s);
    return {l_.rho * std::pow(c, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (al_ + (g - 1.0) / 2.0 * l_.u + s),
            l_.p * std::pow(c, 2.0 * g / (g - 1.0))};
  }
  if (p_star_ > r_.p) {
    const double sr = r_.u + ar_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / r_.p +
                                              (g - 1.0) / (2.0 * g));
    if (s >= sr) return r_;
    return {rho_star_right(), u_star_, p_star_};
  }
  const double head = r_.u + ar_;
  const double a_star = ar_ * std::pow(p_star_ / r_.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + a_star;
  if (s >= head) return r_;
  if (s <= tail) return {rho_star_right(), u_star_, p_star_};
  const double c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * ar_) * (r_.u - s);
  return {r_.rho * std::pow(c, 2.0 / (g - 1.0)),
          2.0 / (g + 1.0) * (-ar_ + (g - 1.0) / 2.0 * r_.u + s),
          r_.p * std::pow(c, 2.0 * g / (g - 1.0))};
}

Norms error_norms(const Mesh& mesh, const std::vector<double>& a, const std::vector<double>& b) {
  Norms n;
  double vol = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double v = mesh.cell(i).volume;
    const double e = std::abs(a[i] - b[i]);
    n.l1 += v * e;
    n.l2 += v * e * e;
    n.linf = std::max(n.linf, e);
    vol += v;
  }
  n.l1 /= vol;
  n.l2 = std::sqrt(n.l2 / vol);
  return n;
}

double observed_order(double coarse, double fine, double h_ratio) {
  return std::log(coarse / fine) / std::log(h_ratio);
}

Norms density_error(const Mesh& mesh, const State& q, const ExactField& exact, double t) {
  const State ex = cell_averages(mesh, [&](const Vec3& x) { return exact(x, t); });
  std::vector<double> a(mesh.n_cells()), b(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) {
    a[i] = q[i][0];
    b[i] = ex[i][0];
  }
  return error_norms(mesh, a, b);
}

ProfileCheck riemann_centerline_check(const Mesh& mesh, const State& q, const CaseSpec& c,
                                      double t) {
  Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
  for (const auto& v : mesh.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3 mid = 0.5 * (lo + hi);
  auto one_d = [](const Vec5& s) {
    return ExactRiemann::State1{s[0], velocity(s)[0], pressure(s)};
  };
  const ExactRiemann exact(one_d(c.initial(Vec3(lo[0], mid[1], mid[2]))),
                           one_d(c.initial(Vec3(hi[0], mid[1], mid[2]))));
  LineSpec line;
  line.axis = 0;
  line.point = mid;
  const auto prof = extract_profile(mesh, q, line);
  const double x0 = 0.5;
  double emin = INFINITY, emax = -INFINITY;
  for (int k = 0; k <= 4000; ++k) {
    const double x = lo[0] + (hi[0] - lo[0]) * k / 4000.0;
    const double r = exact.sample((x - x0) / t).rho;
    emin = std::min(emin, r);
    emax = std::max(emax, r);
  }
  ProfileCheck pc;
  pc.samples = static_cast<int>(prof.size());
  for (std::size_t k = 0; k < prof.size(); ++k) {
    // Width of the sample: midpoints to the neighbors, domain ends at the edges.
    const double a = k == 0 ? lo[0] : 0.5 * (prof[k - 1].coord + prof[k].coord);
    const double b = k + 1 == prof.size() ? hi[0] : 0.5 * (prof[k].coord + prof[k + 1].coord);
    pc.l1 += (b - a) * std::abs(prof[k].rho - exact.sample((prof[k].coord - x0) / t).rho);
    pc.overshoot = std::max({pc.overshoot, prof[k].rho - emax, emin - prof[k].rho});
  }
  pc.overshoot /= emax - emin;
  return pc;
}

double diagonal_symmetry_error(const Mesh& mesh, const State& q) {
  auto key = [](const Vec3& c) {
    return std::array<long long, 3>{std::llround(c[0] * 1e8), std::llround(c[1] * 1e8),
                                    std::llround(c[2] * 1e8)};
  };
  std::map<std::array<long long, 3>, int> index;
  for (int i = 0; i < mesh.n_cells(); ++i) index[key(mesh.cell(i).centroid)] = i;
  double lo = INFINITY, hi = -INFINITY, err = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    lo = std::min(lo, q[i][0]);
    hi = std::max(hi, q[i][0]);
    const Vec3 c = mesh.cell(i).centroid;
    const auto it = index.find(key(Vec3(c[1], c[0], c[2])));
    if (it == index.end()) throw MeshError("mesh is not symmetric about x = y");
    err = std::max(err, std::abs(q[i][0] - q[it->second][0]));
  }
  return hi > lo ? err / (hi - lo) : err;
}

double primary_vortex_height(const Mesh& mesh, const State& q) {
  const std::vector<Grad5> g = cell_average_gradients(mesh, q);
  std::vector<double> omega(mesh.n_cells(), 0.0);
  std::vector<bool> window(mesh.n_cells(), false);
  double strongest = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const Vec3 c = mesh.cell(i).centroid;
    window[i] = c[0] > 0.3 && c[0] < 0.7 && c[1] > 0.02;
    const double rho = q[i][0];
    const Vec3 u = velocity(q[i]);
    const double dvdx = (g[i](2, 0) - u[1] * g[i](0, 0)) / rho;
    const double dudy = (g[i](1, 1) - u[0] * g[i](0, 1)) / rho;
    omega[i] = dvdx - dudy;
    if (window[i] && std::abs(omega[i]) > std::abs(strongest)) strongest = omega[i];
  }
  double h = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i)
    if (window[i] && omega[i] * strongest > 0.0 && std::abs(omega[i]) >= 0.1 * std::abs(strongest))
      h = std::max(h, mesh.cell(i).centroid[1]);
  return h;
}

RunResult run(FlowSolver& solver, const RunOptions& options) {
  RunResult r;
  r.min_dt = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  double first = 0.0;
  const double eps = 1e-12 * std::max(1.0, std::abs(options.stop_time));
  while (solver.time() < options.stop_time - eps &&
         (options.max_steps <= 0 || r.steps < options.max_steps)) {
    double dt = solver.cfl_dt();
    const bool last = solver.time() + dt >= options.stop_time - eps;
    if (last) dt = options.stop_time - solver.time();
    const State before = solver.state();
    const StepInfo info = solver.step(dt);
    ++r.steps;
    if (info.diverging) ++r.diverging_steps;
    if (!last || r.steps == 1) r.min_dt = std::min(r.min_dt, info.dt);
    State change(before.size());
    for (std::size_t i = 0; i < before.size(); ++i)
      change[i] = (solver.state()[i] - before[i]) / info.dt;
    const Vec5 res = rms(change);
    r.physical_residual.push_back(res);
    if (options.on_step) options.on_step(solver, info);
    if (r.steps == 1) first = res.norm();
    if (options.steady_tol > 0.0 && first > 0.0 && res.norm() < options.steady_tol * first) {
      r.steady = true;
      break;
    }
  }
  r.time = solver.time();
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.steps == 0) r.min_dt = 0.0;
  return r;
}

std::unique_ptr<FlowSolver> make_solver(const Mesh& mesh, const CaseSpec& c,
                                        const SolverOptions& options) {
  State q = cell_averages(mesh, c.initial);
  std::vector<Grad5> g;
  if (options.flow.recon.flavor == ReconFlavor::hweno && c.smooth)
    g = analytic_gradients(mesh, c.initial);
  return std::make_unique<FlowSolver>(mesh, options, std::move(q), std::move(g));
}

}  // namespace hgks
