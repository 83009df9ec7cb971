#include "hgks/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hgks;

namespace {

SolverConfig load(const std::string& path, const std::string& case_name,
                  const std::vector<std::string>& overrides) {
  std::vector<std::string> all;
  if (!case_name.empty()) all.push_back("case.name=" + case_name);
  all.insert(all.end(), overrides.begin(), overrides.end());
  if (path.empty()) {
    std::istringstream empty;
    return parse_config(empty, "<none>", all);
  }
  return parse_config(path, all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit high-order gas-kinetic solver"};
  app.require_subcommand(1);

  std::string config, case_name;
  std::vector<std::string> sets;
  bool quiet = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config, "configuration file");
    sub->add_option("--case", case_name, "case name (overrides the file)");
    sub->add_option("-s,--set", sets, "section.key=value override")->take_all();
  };

  auto* run = app.add_subcommand("run", "run a case and write fields, profile, logs and report");
  common(run);
  run->add_flag("-q,--quiet", quiet, "no per-step progress");

  auto* conv = app.add_subcommand("convergence", "error and order table over a mesh sequence");
  common(conv);
  std::vector<int> meshes{5, 10, 20};
  std::string table;
  conv->add_option("--meshes", meshes, "cells per direction")->delimiter(',');
  conv->add_option("-o,--output", table, "write the table to this file");

  auto* cmp = app.add_subcommand("compare", "run two configurations and report deltas and timing");
  std::string config_b;
  std::vector<std::string> sets_b;
  common(cmp);
  cmp->add_option("--config-b", config_b, "second configuration (defaults to the first)");
  cmp->add_option("--set-b", sets_b, "override applied to the second run only")->take_all();

  auto* exp = app.add_subcommand("export-mesh", "write the case mesh");
  common(exp);
  std::string mesh_out;
  bool as_vtk = false;
  exp->add_option("-o,--output", mesh_out, "output file")->required();
  exp->add_flag("--vtk", as_vtk, "legacy VTK with the initial field instead of the native format");

  auto* dump = app.add_subcommand("config", "print the resolved configuration");
  common(dump);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const SolverConfig c = load(config, case_name, sets);
      const Simulation s = simulate(c, true, quiet ? nullptr : &std::cout);
      write_report(s.report, std::cout);
    } else if (*conv) {
      const SolverConfig c = load(config, case_name.empty() ? "accuracy3d" : case_name, sets);
      const auto rows = convergence_study(c, meshes, &std::cerr);
      write_convergence_table(rows, std::cout);
      if (!table.empty()) {
        std::ofstream out(table);
        if (!out) throw Error("cannot write '" + table + "'");
        write_convergence_table(rows, out);
      }
    } else if (*cmp) {
      const SolverConfig a = load(config, case_name, sets);
      std::vector<std::string> all_b = sets;
      all_b.insert(all_b.end(), sets_b.begin(), sets_b.end());
      const SolverConfig b = load(config_b.empty() ? config : config_b, case_name, all_b);
      write_comparison(compare_runs(a, b), std::cout);
    } else if (*exp) {
      const SolverConfig c = load(config, case_name, sets);
      const CaseSpec cs = config_case(c);
      const Mesh m = config_mesh(c, cs);
      if (as_vtk)
        write_vtk(m, cell_averages(m, cs.initial), mesh_out);
      else
        write_mesh(m, mesh_out);
      std::cout << "wrote " << m.n_cells() << " cells to " << mesh_out << "\n";
    } else if (*dump) {
      write_config(load(config, case_name, sets), std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
