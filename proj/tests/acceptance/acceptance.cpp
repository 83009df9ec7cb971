// Acceptance checks. Each group prints one PASS/FAIL/SKIP line per criterion.
// Usage: acceptance [--long] group...   (no group runs all of them)

#include "hgks/cases.hpp"
#include "hgks/driver.hpp"
#include "hgks/gas.hpp"
#include "hgks/implicit.hpp"
#include "hgks/io.hpp"
#include "hgks/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hgks;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void skip(const std::string& id, const std::string& why) {
  std::printf("SKIP %s: %s\n", id.c_str(), why.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

std::string fmt(const char* f, int a, int b) {
  char s[160];
  std::snprintf(s, sizeof s, f, a, b);
  return s;
}

std::string fmt(const char* f, double a, double b) {
  char s[160];
  std::snprintf(s, sizeof s, f, a, b);
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverConfig quiet(SolverConfig c) {
  c.output.vtk = false;
  c.output.residual_log = false;
  c.output.profile.clear();
  return c;
}

// ---------------------------------------------------------------- temporal

// dQ/dt = -Q^2 with stages solved by Newton iterations on the exact Jacobian.
class Riccati : public ImplicitSystem {
 public:
  void residual(const State& q, State& l) override {
    l.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) l[i] = -q[i].cwiseAbs2();
  }
  void solve(const State& q, double alpha, double sigma, const State& rhs, State& dq) override {
    dq.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      dq[i] = rhs[i].array() / (alpha + 2.0 * sigma * q[i].array());
  }
};

void temporal() {
  const auto t0 = std::chrono::steady_clock::now();
  Vec5 a;
  a << 1.0, 0.5, 0.25, 2.0, 0.1;
  const State q0{a};
  const double t_end = 1.0;
  std::vector<double> lx, ly;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    State q = q0;
    Riccati sys;
    TimeControls tc;
    tc.k_a = 12;
    const int n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k < n; ++k) s2o3_step(sys, q, dt, INFINITY, tc);
    const Vec5 exact = (a.array() / (1.0 + a.array() * t_end)).matrix();
    lx.push_back(std::log(dt));
    ly.push_back(std::log((q[0] - exact).cwiseAbs().maxCoeff()));
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) mx += lx[k] / lx.size(), my += ly[k] / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  const double wall = seconds_since(t0);
  report("temporal.order", std::abs(slope - 3.0) <= 0.05 && wall < 1.0,
         fmt("slope %.4f (3.00 +- 0.05), %.3f s (< 1 s)", slope, wall));
}

SolverConfig case_config(const std::string& name, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> o{"case.name=" + name};
  o.insert(o.end(), extra.begin(), extra.end());
  std::istringstream empty;
  return quiet(parse_config(empty, "<acceptance>", o));
}

// ---------------------------------------------------------------- accuracy

struct TableEntry {
  const char* flavor;
  const char* scheme;
  double error20, order20, error40, order40;
};

// Density L2 errors and orders at 20^3x6 and 40^3x6 tets.
const TableEntry kTable[] = {
    {"weno", "s2o3_l", 4.9486e-3, 2.9064, 6.2522e-4, 2.9846},
    {"hweno", "s2o3_l", 1.2713e-3, 3.3426, 1.5226e-4, 3.0617},
    {"weno", "s2o3_g", 4.9488e-3, 2.9064, 6.2532e-4, 2.9844},
    {"hweno", "s2o3_g", 1.2660e-3, 3.3468, 1.5047e-4, 3.0727},
};

void accuracy(bool long_run) {
  std::vector<int> meshes{5, 10, 20};
  if (long_run) meshes.push_back(40);
  for (const auto& e : kTable) {
    const SolverConfig c = case_config("accuracy3d", {std::string("reconstruction.flavor=") + e.flavor,
                                                      std::string("time.scheme=") + e.scheme});
    const auto rows = convergence_study(c, meshes, &std::cerr);
    std::ostringstream table;
    write_convergence_table(rows, table);
    std::cerr << table.str();
    const auto& last = rows.back();
    const double ref_e = long_run ? e.error40 : e.error20;
    const double ref_o = long_run ? e.order40 : e.order20;
    const double ratio = last.error / ref_e;
    const std::string id = std::string("accuracy.") + e.flavor + "." + e.scheme;
    report(id, std::abs(last.order - ref_o) <= 0.3 && ratio <= 2.0 && ratio >= 0.5,
           "n=" + std::to_string(last.n) + fmt(" error %.4e (ref %.4e, factor 2)", last.error, ref_e) +
               fmt(", order %.3f (ref %.4f +- 0.3)", last.order, ref_o));
  }
}

// ---------------------------------------------------------------- 1D Riemann problems

void shock_tube(const std::string& name, int steps_ref) {
  const SolverConfig c = case_config(name);
  const Simulation s = simulate(c, false);
  const RunReport& r = s.report;
  report(name + ".steps", std::abs(r.steps - steps_ref) <= 3,
         std::to_string(r.steps) + " steps (" + std::to_string(steps_ref) + " +- 3)");
  if (name == "sod") report("sod.min_dt", r.min_dt > 1.0e-2, fmt("smallest dt %.4e (> 1.0e-2)", r.min_dt));
  const double l1 = r.diagnostics.at("centerline_l1");
  const double over = r.diagnostics.at("overshoot");
  report(name + ".centerline_l1", l1 < 0.02, fmt("L1 density error %.4e (< 0.02)", l1));
  report(name + ".overshoot", over < 0.02, fmt("overshoot %.4e of the jump (< 0.02)", over));
  if (name != "sod") return;
  // Density must not increase through the rarefaction fan.
  const ExactRiemann ex({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  const double head = 0.5 - std::sqrt(kGamma) * r.time;
  const double tail =
      0.5 + (ex.u_star() - std::sqrt(kGamma * ex.p_star() / ex.rho_star_left())) * r.time;
  const auto prof = extract_profile(s.mesh, s.state, parse_line("x 0.05 0.05"));
  double worst = 0.0;
  for (std::size_t k = 1; k < prof.size(); ++k)
    if (prof[k - 1].coord >= head && prof[k].coord <= tail)
      worst = std::max(worst, prof[k].rho - prof[k - 1].rho);
  report("sod.rarefaction_monotone", worst <= 1e-12, fmt("largest density rise %.3e", worst));
}

// ---------------------------------------------------------------- 2D Riemann problem

void riemann2d() {
  const SolverConfig c = case_config("riemann2d", {"time.scheme=s2o3_g"});
  const Simulation s = simulate(c, false);
  bool finite = true;
  double rmin = INFINITY;
  for (const auto& q : s.state) {
    finite = finite && q.allFinite();
    rmin = std::min(rmin, q[0]);
  }
  report("riemann2d.finite_positive", finite && rmin > 0.0 && std::abs(s.report.time - 0.4) < 1e-12,
         fmt("t = %.4f, min density %.4e", s.report.time, rmin));
  const double sym = s.report.diagnostics.at("symmetry_error");
  report("riemann2d.symmetry", sym < 1e-3, fmt("symmetry error %.3e of the density range (< 1e-3)", sym));
}

// ---------------------------------------------------------------- conservation and free stream

Vec5 totals(const Mesh& m, const State& q) {
  Vec5 t = Vec5::Zero();
  for (int i = 0; i < m.n_cells(); ++i) t += m.cell(i).volume * q[i];
  return t;
}

const std::pair<ReconFlavor, Scheme> kVariants[] = {
    {ReconFlavor::weno, Scheme::s2o4_e},  {ReconFlavor::weno, Scheme::s2o3_l},
    {ReconFlavor::weno, Scheme::s2o3_g},  {ReconFlavor::hweno, Scheme::s2o4_e},
    {ReconFlavor::hweno, Scheme::s2o3_l}, {ReconFlavor::hweno, Scheme::s2o3_g},
};

std::string variant_id(ReconFlavor f, Scheme s) { return to_string(f) + "." + to_string(s); }

void conservation() {
  BoxSpec box;
  box.n = {4, 4, 4};
  box.stretch[0] = tanh_two_sided_map(4, 0.1);
  make_all_periodic(box);
  for (bool tet : {false, true}) {
    const Mesh m = tet ? generate_box_tet6(box) : generate_box_hex(box);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    State q0(m.n_cells());
    for (auto& v : q0) v = to_conserved(1.0 + u(rng), u(rng), u(rng), u(rng), 1.0 + u(rng));
    for (const auto& [flavor, scheme] : kVariants) {
      SolverOptions o;
      o.scheme = scheme;
      o.flow.recon.flavor = flavor;
      o.flow.collision.kind = kinetic::CollisionModel::Kind::viscous;
      o.flow.collision.mu = 1e-3;
      o.time.cfl = scheme == Scheme::s2o4_e ? 0.3 : 1.0;
      // Implicit stages are driven to convergence so that the stage equations hold.
      o.time.k_a = 80;
      o.time.pseudo_tol = 1e-13;
      o.lusgs.sweeps = 4;
      o.krylov.dim = 20;
      o.krylov.restarts = 4;
      o.krylov.tol = 1e-12;
      FlowSolver s(m, o, q0);
      const Vec5 ref = totals(m, q0).cwiseAbs();
      double worst = 0.0;
      for (int k = 0; k < 5; ++k) {
        const Vec5 before = totals(m, s.state());
        s.step(s.cfl_dt());
        const Vec5 d = (totals(m, s.state()) - before).cwiseAbs();
        for (int j = 0; j < 5; ++j) worst = std::max(worst, d[j] / std::max(ref[j], 1.0));
      }
      report(std::string("conservation.") + (tet ? "tet." : "hex.") + variant_id(flavor, scheme),
             worst < 1e-11, fmt("largest relative drift per step %.3e (< 1e-11)", worst));
    }
  }
}

void free_stream() {
  BoxSpec box;
  box.n = {6, 5, 4};
  box.hi = Vec3(1.0, 0.8, 0.6);
  box.stretch[0] = tanh_two_sided_map(6, 0.05);
  box.stretch[1] = wall_clustering_map();
  box.stretch[2] = [](double s) { return s * s * (3.0 - 2.0 * s); };
  const Mesh m = generate_box_hex(box);
  const Vec5 q = to_conserved(1.2, 0.6, -0.3, 0.2, 0.9);
  for (const auto& [flavor, scheme] : kVariants) {
    SolverOptions o;
    o.scheme = scheme;
    o.flow.recon.flavor = flavor;
    o.time.cfl = scheme == Scheme::s2o4_e ? 0.3 : 3.0;
    FlowSolver s(m, o, State(m.n_cells(), q));
    for (int k = 0; k < 100; ++k) s.step(s.cfl_dt());
    double worst = 0.0;
    for (const auto& v : s.state()) worst = std::max(worst, (v - q).cwiseAbs().maxCoeff());
    report("free_stream." + variant_id(flavor, scheme), worst < 1e-10,
           fmt("largest deviation after 100 steps %.3e (< 1e-10)", worst));
  }
}

// ---------------------------------------------------------------- solver cross-check

void crosscheck() {
  BoxSpec box;
  box.n = {4, 4, 4};
  make_all_periodic(box);
  const Mesh m = generate_box_tet6(box);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  State q(m.n_cells()), rhs(m.n_cells());
  for (auto& v : q) v = to_conserved(1.0 + u(rng), 0.5 + u(rng), u(rng), u(rng), 1.0 + u(rng));
  for (auto& v : rhs)
    for (int k = 0; k < 5; ++k) v[k] = u(rng);
  IncrementSystem sys(m, q, 50.0, 0.5);
  sys.assemble_blocks();
  LusgsOptions lo;
  lo.matrix_free = false;
  lo.sweeps = 80;
  State a, b;
  lusgs_solve(sys, rhs, lo, a);
  KrylovConfig kc;
  kc.dim = 20;
  kc.restarts = 20;
  kc.tol = 1e-10;
  gmres_solve(sys, rhs, kc, b);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
    scale = std::max(scale, b[i].cwiseAbs().maxCoeff());
  }
  report("crosscheck.increments", diff < 1e-8 * scale,
         fmt("max increment difference %.3e (scale %.3e, < 1e-8 relative)", diff, scale));

  const Comparison c =
      compare_runs(case_config("sod", {"time.scheme=s2o3_l"}), case_config("sod", {"time.scheme=s2o3_g"}));
  report("crosscheck.sod_fields", c.max_density_delta < 1e-3 && c.max_velocity_delta < 1e-3,
         fmt("max density delta %.3e, max velocity delta %.3e (< 1e-3)", c.max_density_delta,
             c.max_velocity_delta));
}

// ---------------------------------------------------------------- viscous shock tube

void viscous(bool long_run) {
  if (!long_run) {
    skip("viscous.vortex_height", "long run, pass --long");
    return;
  }
  const Simulation s = simulate(case_config("viscous_shock_tube", {"case.resolution=250"}), false, &std::cerr);
  const double h = s.report.diagnostics.at("vortex_height");
  report("viscous.vortex_height", h >= 0.15 && h <= 0.19, fmt("primary vortex height %.4f ([0.15, 0.19])", h));
}

// ---------------------------------------------------------------- cavity

void cavity() {
  // The implicit run is compared with the explicit reference at a common physical time,
  // then continued to the step limit for the residual history.
  const double t_compare = 10.0;
  const SolverConfig ci = case_config("cavity1000", {"time.scheme=s2o3_g"});
  const CaseSpec cs = config_case(ci);
  const Mesh mesh = config_mesh(ci, cs);
  auto si = make_solver(mesh, cs, ci.options);
  RunOptions ro;
  ro.stop_time = t_compare;
  const RunResult first = run(*si, ro);
  const State at_compare = si->state();
  ro.stop_time = 1e9;
  ro.max_steps = ci.max_steps - first.steps;
  const RunResult rest = run(*si, ro);
  std::vector<Vec5> history = first.physical_residual;
  history.insert(history.end(), rest.physical_residual.begin(), rest.physical_residual.end());
  double lowest = INFINITY;
  for (const auto& r : history) lowest = std::min(lowest, r.norm());
  const double drop = std::log10(history.front().norm() / history.back().norm());
  report("cavity.residual_drop", drop >= 4.0,
         std::to_string(si->steps()) + " steps" +
             fmt(", residual drop %.2f orders at the end (>= 4), %.2f at the lowest", drop,
                 std::log10(history.front().norm() / lowest)));

  SolverOptions eo = ci.options;
  eo.scheme = Scheme::s2o4_e;
  eo.time.cfl = 0.4;
  auto se = make_solver(mesh, cs, eo);
  RunOptions re;
  re.stop_time = t_compare;
  const RunResult explicit_run = run(*se, re);
  const LineSpec line = parse_line("y 0.5 0.5");
  const auto pi = extract_profile(mesh, at_compare, line);
  const auto pe = extract_profile(mesh, se->state(), line);
  double worst = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) worst = std::max(worst, std::abs(pi[k].u[0] - pe[k].u[0]));
  const double lid = 0.15;
  report("cavity.centerline", worst <= 0.02 * lid,
         fmt("max centerline U difference %.3e of lid speed (<= 0.02) at t = %.1f", worst / lid, t_compare));
  report("efficiency.cavity", first.wall_seconds < explicit_run.wall_seconds,
         fmt("to t = 10: S2O3-G %.1f s, S2O4-E %.1f s", first.wall_seconds, explicit_run.wall_seconds) +
             fmt(" (%d and %d steps)", first.steps, explicit_run.steps));
}

}  // namespace

int main(int argc, char** argv) {
  bool long_run = false;
  std::vector<std::string> groups;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--long") long_run = true;
    else groups.push_back(a);
  }
  const std::map<std::string, std::function<void()>> all = {
      {"temporal", temporal},
      {"accuracy", [&] { accuracy(long_run); }},
      {"sod", [] { shock_tube("sod", 17); }},
      {"lax", [] { shock_tube("lax", 22); }},
      {"riemann2d", riemann2d},
      {"conservation", conservation},
      {"free_stream", free_stream},
      {"crosscheck", crosscheck},
      {"viscous", [&] { viscous(long_run); }},
      {"cavity", cavity},
  };
  if (groups.empty())
    for (const auto& [name, fn] : all) groups.push_back(name);
  for (const auto& g : groups) {
    const auto it = all.find(g);
    if (it == all.end()) {
      std::cerr << "unknown group '" << g << "'\n";
      return 2;
    }
    try {
      it->second();
    } catch (const std::exception& e) {
      report(g, false, std::string("error: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
