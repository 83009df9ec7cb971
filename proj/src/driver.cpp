#include "hgks/driver.hpp"

#include "hgks/gas.hpp"
#include "hgks/parallel.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

namespace hgks {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

void add_diagnostics(const SolverConfig& cfg, const CaseSpec& cs, const Mesh& mesh,
                     const FlowSolver& s, const RunResult& r, RunReport& rep) {
  const std::string& name = cfg.case_name;
  if (cs.exact) {
    const Norms e = density_error(mesh, s.state(), cs.exact, s.time());
    rep.diagnostics["density_l1"] = e.l1;
    rep.diagnostics["density_l2"] = e.l2;
    rep.diagnostics["density_linf"] = e.linf;
  }
  if ((name == "sod" || name == "lax") && cfg.mesh.empty()) {
    const ProfileCheck pc = riemann_centerline_check(mesh, s.state(), cs, s.time());
    rep.diagnostics["centerline_l1"] = pc.l1;
    rep.diagnostics["overshoot"] = pc.overshoot;
  }
  if (name == "riemann2d" && cfg.mesh.empty())
    rep.diagnostics["symmetry_error"] = diagonal_symmetry_error(mesh, s.state());
  if (name == "viscous_shock_tube")
    rep.diagnostics["vortex_height"] = primary_vortex_height(mesh, s.state());
  double rmin = INFINITY;
  for (const auto& q : s.state()) rmin = std::min(rmin, q[0]);
  rep.diagnostics["min_density"] = rmin;
  if (!r.physical_residual.empty() && r.physical_residual.front().norm() > 0.0)
    rep.diagnostics["residual_drop_orders"] =
        std::log10(r.physical_residual.front().norm() / r.physical_residual.back().norm());
}

}  // namespace

Simulation simulate(const SolverConfig& cfg, bool write, std::ostream* progress) {
  set_thread_count(cfg.threads);
  const CaseSpec cs = config_case(cfg);
  Simulation sim{config_mesh(cfg, cs), {}, {}};
  const Mesh& mesh = sim.mesh;
  auto solver = make_solver(mesh, cs, cfg.options);

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output.directory);
  std::ofstream log_file;
  std::unique_ptr<ResidualLog> log;
  const bool implicit = cfg.options.scheme != Scheme::s2o4_e;
  if (write) {
    fs::create_directories(dir);
    std::ofstream conf = open_out(dir / "config.ini");
    write_config(cfg, conf);
    if (cfg.output.residual_log && implicit) {
      log_file = open_out(dir / "residuals.log");
      log = std::make_unique<ResidualLog>(log_file);
      solver->set_residual_sink([&](int step, const PseudoReport& p) { (*log)(step, p); });
    }
  }

  RunOptions ro;
  ro.stop_time = cs.stop_time;
  ro.max_steps = cs.max_steps;
  ro.steady_tol = cs.steady_tol;
  ro.on_step = [&](const FlowSolver& s, const StepInfo& info) {
    if (progress)
      *progress << "step " << s.steps() << " t = " << format_double(s.time())
                << " dt = " << format_double(info.dt) << (info.diverging ? " diverging" : "")
                << "\n";
    if (write && cfg.output.vtk && cfg.output.vtk_every > 0 && s.steps() % cfg.output.vtk_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "field_%06d.vtk", s.steps());
      write_vtk(mesh, s.state(), (dir / name).string());
    }
  };
  const RunResult r = run(*solver, ro);

  RunReport& rep = sim.report;
  rep.case_name = cfg.case_name;
  rep.scheme = to_string(cfg.options.scheme);
  rep.flavor = to_string(cfg.options.flow.recon.flavor);
  rep.cells = mesh.n_cells();
  rep.steps = r.steps;
  rep.time = r.time;
  rep.min_dt = r.min_dt;
  rep.wall_seconds = r.wall_seconds;
  rep.diverging_steps = r.diverging_steps;
  rep.steady = r.steady;
  add_diagnostics(cfg, cs, mesh, *solver, r, rep);
  sim.state = solver->state();

  if (write) {
    if (log) rep.residual_log = "residuals.log";
    if (cfg.output.vtk) write_vtk(mesh, sim.state, (dir / "field.vtk").string());
    if (!cfg.output.profile.empty()) {
      std::ofstream prof = open_out(dir / "profile.csv");
      write_profile(extract_profile(mesh, sim.state, parse_line(cfg.output.profile)), prof);
    }
    std::ofstream rf = open_out(dir / "report.txt");
    write_report(rep, rf);
  }
  return sim;
}

std::vector<ConvergenceRow> convergence_study(const SolverConfig& base, const std::vector<int>& meshes,
                                              std::ostream* progress) {
  if (!make_case(base.case_name).exact)
    throw ConfigError("case '" + base.case_name + "' has no exact solution");
  std::vector<ConvergenceRow> rows;
  for (int n : meshes) {
    SolverConfig c = base;
    c.resolution = n;
    const Simulation s = simulate(c, false);
    ConvergenceRow row;
    row.n = n;
    row.cells = s.report.cells;
    row.error = s.report.diagnostics.at("density_l2");
    row.order = rows.empty() ? NAN
                             : observed_order(rows.back().error, row.error,
                                              static_cast<double>(n) / rows.back().n);
    row.wall_seconds = s.report.wall_seconds;
    rows.push_back(row);
    if (progress)
      *progress << "n = " << n << " error = " << format_double(row.error) << " wall = "
                << format_double(row.wall_seconds) << " s\n";
  }
  return rows;
}

Comparison compare_runs(const SolverConfig& a, const SolverConfig& b, std::ostream* progress) {
  if (a.case_name != b.case_name || a.resolution != b.resolution || a.mesh != b.mesh)
    throw ConfigError("compared configurations must share the case and mesh");
  const Simulation sa = simulate(a, false, progress);
  const Simulation sb = simulate(b, false, progress);
  Comparison c{sa.report, sb.report, sb.report.wall_seconds / sa.report.wall_seconds, 0.0, 0.0};
  for (std::size_t i = 0; i < sa.state.size(); ++i) {
    c.max_density_delta = std::max(c.max_density_delta, std::abs(sa.state[i][0] - sb.state[i][0]));
    c.max_velocity_delta =
        std::max(c.max_velocity_delta, (velocity(sa.state[i]) - velocity(sb.state[i])).norm());
  }
  return c;
}

void write_comparison(const Comparison& c, std::ostream& out) {
  out << "scheme,flavor,steps,wall_seconds,ratio\n";
  for (const RunReport* r : {&c.a, &c.b})
    out << r->scheme << "," << r->flavor << "," << r->steps << "," << format_double(r->wall_seconds)
        << "," << format_double(r->wall_seconds / c.a.wall_seconds) << "\n";
  out << "# max density delta " << format_double(c.max_density_delta) << "\n";
  out << "# max velocity delta " << format_double(c.max_velocity_delta) << "\n";
}

}  // namespace hgks
