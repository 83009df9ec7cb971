#include "hgks/io.hpp"

#include "hgks/gas.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace hgks {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& v) {
  if (s == "inf") {
    v = INFINITY;
    return true;
  }
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && p == end;
}

bool parse_int(const std::string& s, int& v) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && p == end;
}

std::string collision_name(kinetic::CollisionModel::Kind k) {
  using K = kinetic::CollisionModel::Kind;
  return k == K::zero ? "zero" : k == K::inviscid ? "inviscid" : "viscous";
}

kinetic::CollisionModel::Kind collision_from_string(const std::string& s) {
  using K = kinetic::CollisionModel::Kind;
  if (s == "zero") return K::zero;
  if (s == "inviscid") return K::inviscid;
  if (s == "viscous") return K::viscous;
  throw ConfigError("unknown collision model '" + s + "'");
}

// A configuration key: how to print it and how to set it from text.
struct Key {
  std::string section, name;
  std::function<std::string(const SolverConfig&)> get;
  std::function<void(SolverConfig&, const std::string&)> set;
  std::string full() const { return section + "." + name; }
};

Key dbl(std::string sec, std::string name, std::function<double&(SolverConfig&)> ref) {
  return {sec, name, [ref](const SolverConfig& c) { return format_double(ref(const_cast<SolverConfig&>(c))); },
          [ref](SolverConfig& c, const std::string& v) {
            if (!parse_double(v, ref(c))) throw ConfigError("expected a number, got '" + v + "'");
          }};
}

Key integer(std::string sec, std::string name, std::function<int&(SolverConfig&)> ref) {
  return {sec, name,
          [ref](const SolverConfig& c) { return std::to_string(ref(const_cast<SolverConfig&>(c))); },
          [ref](SolverConfig& c, const std::string& v) {
            if (!parse_int(v, ref(c))) throw ConfigError("expected an integer, got '" + v + "'");
          }};
}

Key boolean(std::string sec, std::string name, std::function<bool&(SolverConfig&)> ref) {
  return {sec, name,
          [ref](const SolverConfig& c) {
            return std::string(ref(const_cast<SolverConfig&>(c)) ? "true" : "false");
          },
          [ref](SolverConfig& c, const std::string& v) {
            if (v == "true")
              ref(c) = true;
            else if (v == "false")
              ref(c) = false;
            else
              throw ConfigError("expected true or false, got '" + v + "'");
          }};
}

Key text(std::string sec, std::string name, std::function<std::string&(SolverConfig&)> ref) {
  return {sec, name, [ref](const SolverConfig& c) { return ref(const_cast<SolverConfig&>(c)); },
          [ref](SolverConfig& c, const std::string& v) { ref(c) = v; }};
}

template <class E>
Key choice(std::string sec, std::string name, std::function<E&(SolverConfig&)> ref,
           std::function<std::string(E)> str, std::function<E(const std::string&)> parse) {
  return {sec, name, [=](const SolverConfig& c) { return str(ref(const_cast<SolverConfig&>(c))); },
          [=](SolverConfig& c, const std::string& v) { ref(c) = parse(v); }};
}

const std::vector<Key>& keys() {
  using C = SolverConfig;
  static const std::vector<Key> k = {
      text("case", "name", [](C& c) -> std::string& { return c.case_name; }),
      integer("case", "resolution", [](C& c) -> int& { return c.resolution; }),
      text("case", "mesh", [](C& c) -> std::string& { return c.mesh; }),
      dbl("case", "stop_time", [](C& c) -> double& { return c.stop_time; }),
      integer("case", "max_steps", [](C& c) -> int& { return c.max_steps; }),
      dbl("case", "steady_tol", [](C& c) -> double& { return c.steady_tol; }),
      choice<ReconFlavor>(
          "reconstruction", "flavor", [](C& c) -> ReconFlavor& { return c.options.flow.recon.flavor; },
          [](ReconFlavor f) { return to_string(f); }, recon_flavor_from_string),
      boolean("reconstruction", "linear_weights",
              [](C& c) -> bool& { return c.options.flow.recon.linear_weights; }),
      dbl("reconstruction", "gamma0", [](C& c) -> double& { return c.options.flow.recon.gamma0; }),
      dbl("reconstruction", "epsilon", [](C& c) -> double& { return c.options.flow.recon.eps; }),
      choice<kinetic::CollisionModel::Kind>(
          "kinetic", "collision",
          [](C& c) -> kinetic::CollisionModel::Kind& { return c.options.flow.collision.kind; },
          collision_name, collision_from_string),
      dbl("kinetic", "mu", [](C& c) -> double& { return c.options.flow.collision.mu; }),
      dbl("kinetic", "c1", [](C& c) -> double& { return c.options.flow.collision.eps; }),
      dbl("kinetic", "c2", [](C& c) -> double& { return c.options.flow.collision.c; }),
      choice<FluxTime>(
          "kinetic", "flux_time", [](C& c) -> FluxTime& { return c.options.flow.flux_time; },
          [](FluxTime f) { return to_string(f); }, flux_time_from_string),
      choice<Scheme>(
          "time", "scheme", [](C& c) -> Scheme& { return c.options.scheme; },
          [](Scheme s) { return to_string(s); }, scheme_from_string),
      dbl("time", "cfl", [](C& c) -> double& { return c.options.time.cfl; }),
      dbl("time", "cfl_a", [](C& c) -> double& { return c.options.time.cfl_a; }),
      dbl("time", "cfl_s", [](C& c) -> double& { return c.options.time.cfl_s; }),
      integer("time", "k_a", [](C& c) -> int& { return c.options.time.k_a; }),
      dbl("time", "pseudo_tol", [](C& c) -> double& { return c.options.time.pseudo_tol; }),
      dbl("time", "divergence", [](C& c) -> double& { return c.options.time.divergence; }),
      integer("time", "dt_halvings", [](C& c) -> int& { return c.options.dt_halvings; }),
      integer("implicit", "lusgs_sweeps", [](C& c) -> int& { return c.options.lusgs.sweeps; }),
      boolean("implicit", "matrix_free", [](C& c) -> bool& { return c.options.lusgs.matrix_free; }),
      integer("implicit", "krylov_dim", [](C& c) -> int& { return c.options.krylov.dim; }),
      integer("implicit", "krylov_restarts", [](C& c) -> int& { return c.options.krylov.restarts; }),
      dbl("implicit", "krylov_tol", [](C& c) -> double& { return c.options.krylov.tol; }),
      integer("implicit", "jacobi_sweeps",
              [](C& c) -> int& { return c.options.krylov.jacobi_sweeps; }),
      choice<RadiusMode>(
          "implicit", "radius", [](C& c) -> RadiusMode& { return c.options.radius; },
          [](RadiusMode m) { return to_string(m); }, radius_mode_from_string),
      text("output", "directory", [](C& c) -> std::string& { return c.output.directory; }),
      boolean("output", "vtk", [](C& c) -> bool& { return c.output.vtk; }),
      integer("output", "vtk_every", [](C& c) -> int& { return c.output.vtk_every; }),
      boolean("output", "residual_log", [](C& c) -> bool& { return c.output.residual_log; }),
      text("output", "profile", [](C& c) -> std::string& { return c.output.profile; }),
      integer("run", "threads", [](C& c) -> int& { return c.threads; }),
  };
  return k;
}

const Key* find_key(const std::string& full) {
  for (const auto& k : keys())
    if (k.full() == full) return &k;
  return nullptr;
}

struct Entry {
  std::string key, value, where;
};

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line);
}

// Checks ranges and combinations; `at` names the place a key was set.
void validate(const SolverConfig& c, const std::function<std::string(const std::string&)>& at) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(at(key) + ": " + key + " " + msg);
  };
  const auto& o = c.options;
  if (c.resolution < 0) fail("case.resolution", "must be >= 0");
  if (!(c.stop_time > 0.0)) fail("case.stop_time", "must be positive");
  if (c.max_steps < 0) fail("case.max_steps", "must be >= 0");
  if (!(c.steady_tol >= 0.0 && c.steady_tol < 1.0)) fail("case.steady_tol", "must be in [0, 1)");
  if (!(o.flow.recon.gamma0 > 0.0 && o.flow.recon.gamma0 < 1.0))
    fail("reconstruction.gamma0", "must be in (0, 1)");
  if (!(o.flow.recon.eps > 0.0)) fail("reconstruction.epsilon", "must be positive");
  if (!(o.flow.collision.mu >= 0.0)) fail("kinetic.mu", "must be >= 0");
  if (o.flow.collision.kind == kinetic::CollisionModel::Kind::viscous && !(o.flow.collision.mu > 0.0))
    fail("kinetic.mu", "must be positive for the viscous collision model");
  if (!(o.flow.collision.eps >= 0.0)) fail("kinetic.c1", "must be >= 0");
  if (!(o.flow.collision.c >= 0.0)) fail("kinetic.c2", "must be >= 0");
  if (o.scheme == Scheme::s2o4_e && o.flow.flux_time == FluxTime::averaged)
    fail("kinetic.flux_time", "must be instantaneous for s2o4_e");
  if (!(o.time.cfl > 0.0) || !std::isfinite(o.time.cfl)) fail("time.cfl", "must be positive");
  if (!(o.time.cfl_a >= 0.0)) fail("time.cfl_a", "must be >= 0 (0 drops the pseudo time term)");
  if (!(o.time.cfl_s > 0.0)) fail("time.cfl_s", "must be positive");
  if (o.time.k_a < 1) fail("time.k_a", "must be >= 1");
  if (!(o.time.pseudo_tol >= 0.0)) fail("time.pseudo_tol", "must be >= 0");
  if (!(o.time.divergence > 1.0)) fail("time.divergence", "must be > 1");
  if (o.dt_halvings < 0) fail("time.dt_halvings", "must be >= 0");
  if (o.lusgs.sweeps < 1) fail("implicit.lusgs_sweeps", "must be >= 1");
  if (o.krylov.dim < 1) fail("implicit.krylov_dim", "must be >= 1");
  if (o.krylov.restarts < 1) fail("implicit.krylov_restarts", "must be >= 1");
  if (!(o.krylov.tol > 0.0)) fail("implicit.krylov_tol", "must be positive");
  if (o.krylov.jacobi_sweeps < 1) fail("implicit.jacobi_sweeps", "must be >= 1");
  if (c.output.vtk_every < 0) fail("output.vtk_every", "must be >= 0");
  if (!c.output.profile.empty()) {
    try {
      parse_line(c.output.profile);
    } catch (const ConfigError& e) {
      fail("output.profile", e.what());
    }
  }
  if (c.threads < 1) fail("run.threads", "must be >= 1");
}

std::string default_profile(const std::string& name) {
  if (name == "sod" || name == "lax") return "x 0.05 0.05";
  if (name == "viscous_shock_tube") return "x 0 0.003";
  if (name.rfind("cavity", 0) == 0) return "y 0.5 0.5";
  if (name == "riemann2d") return "x 0.5 0.015";
  return "";
}

}  // namespace

LineSpec parse_line(const std::string& s) {
  std::istringstream in(s);
  std::string axis;
  double a, b;
  if (!(in >> axis >> a >> b) || axis.size() != 1 || std::string("xyz").find(axis) == std::string::npos)
    throw ConfigError("line spec must read '<x|y|z> <coord> <coord>', got '" + s + "'");
  std::string rest;
  if (in >> rest) throw ConfigError("trailing text in line spec '" + s + "'");
  LineSpec l;
  l.axis = static_cast<int>(std::string("xyz").find(axis));
  l.point[l.axis == 0 ? 1 : 0] = a;
  l.point[l.axis == 2 ? 1 : 2] = b;
  return l;
}

std::string to_string(const LineSpec& l) {
  const int a = l.axis == 0 ? 1 : 0;
  const int b = l.axis == 2 ? 1 : 2;
  return std::string(1, "xyz"[l.axis]) + " " + format_double(l.point[a]) + " " +
         format_double(l.point[b]);
}

SolverConfig default_config(const std::string& case_name, int resolution) {
  const CaseSpec cs = make_case(case_name, resolution);
  SolverConfig c;
  c.case_name = case_name;
  c.resolution = resolution;
  c.options = cs.options;
  c.stop_time = cs.stop_time;
  c.max_steps = cs.max_steps;
  c.steady_tol = cs.steady_tol;
  c.output.profile = default_profile(case_name);
  return c;
}

SolverConfig parse_config(std::istream& in, const std::string& source,
                          const std::vector<std::string>& overrides) {
  std::vector<Entry> entries;
  std::map<std::string, std::string> seen;
  std::string section, line;
  int no = 0;
  auto add = [&](const std::string& key, const std::string& value, const std::string& at,
                 bool from_file) {
    if (!find_key(key)) throw ConfigError(at + ": unknown key '" + key + "'");
    if (from_file && seen.count(key))
      throw ConfigError(at + ": duplicate key '" + key + "' (first set at " + seen[key] + ")");
    seen[key] = at;
    entries.push_back({key, value, at});
  };
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where(source, no) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where(source, no) + ": expected key = value");
    const std::string k = trim(t.substr(0, eq));
    if (section.empty()) throw ConfigError(where(source, no) + ": key '" + k + "' outside a section");
    add(section + "." + k, trim(t.substr(eq + 1)), where(source, no), true);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "': expected section.key=value");
    add(trim(o.substr(0, eq)), trim(o.substr(eq + 1)), "override '" + o + "'", false);
  }

  std::string name = "sod", name_at = "<default>";
  int res = 0;
  for (const auto& e : entries) {
    if (e.key == "case.name") {
      name = e.value;
      name_at = e.where;
    } else if (e.key == "case.resolution") {
      if (!parse_int(e.value, res))
        throw ConfigError(e.where + ": case.resolution: expected an integer, got '" + e.value + "'");
    }
  }
  SolverConfig c;
  try {
    c = default_config(name, res);
  } catch (const ConfigError& err) {
    throw ConfigError(name_at + ": " + err.what());
  }
  for (const auto& e : entries) {
    try {
      find_key(e.key)->set(c, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.where + ": " + e.key + ": " + err.what());
    }
  }
  validate(c, [&](const std::string& key) { return seen.count(key) ? seen[key] : source; });
  return c;
}

SolverConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path, overrides);
}

void write_config(const SolverConfig& c, std::ostream& out) {
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << "\n";
      section = k.section;
      out << "[" << section << "]\n";
    }
    out << k.name << " = " << k.get(c) << "\n";
  }
}

CaseSpec config_case(const SolverConfig& c) {
  CaseSpec cs = make_case(c.case_name, c.resolution);
  cs.options = c.options;
  cs.stop_time = c.stop_time;
  cs.max_steps = c.max_steps;
  cs.steady_tol = c.steady_tol;
  return cs;
}

Mesh config_mesh(const SolverConfig& c, const CaseSpec& cs) {
  return c.mesh.empty() ? cs.build_mesh() : import_mesh(c.mesh);
}

void write_vtk(const Mesh& mesh, const State& q, std::ostream& out,
               const std::vector<Grad5>* gradients) {
  if (static_cast<int>(q.size()) != mesh.n_cells())
    throw Error("field size does not match the mesh");
  std::vector<Grad5> own;
  if (!gradients) {
    own = cell_average_gradients(mesh, q);
    gradients = &own;
  }
  const auto& v = mesh.vertices();
  out << "# vtk DataFile Version 3.0\nhgks field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << v.size() << " double\n";
  for (const auto& x : v)
    out << format_double(x[0]) << " " << format_double(x[1]) << " " << format_double(x[2]) << "\n";
  std::size_t size = 0;
  for (const auto& c : mesh.cells()) size += c.vertices.size() + 1;
  out << "CELLS " << mesh.n_cells() << " " << size << "\n";
  for (const auto& c : mesh.cells()) {
    out << c.vertices.size();
    for (int k : c.vertices) out << " " << k;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells()) out << (c.type == CellType::tet ? 10 : 12) << "\n";
  out << "CELL_DATA " << mesh.n_cells() << "\n";
  out << "SCALARS density double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : q) out << format_double(s[0]) << "\n";
  out << "VECTORS velocity double\n";
  for (const auto& s : q) {
    const Vec3 u = velocity(s);
    out << format_double(u[0]) << " " << format_double(u[1]) << " " << format_double(u[2]) << "\n";
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : q) out << format_double(pressure(s)) << "\n";
  out << "SCALARS density_gradient double 1\nLOOKUP_TABLE default\n";
  for (const auto& g : *gradients) out << format_double(g.row(0).norm()) << "\n";
}

void write_vtk(const Mesh& mesh, const State& q, const std::string& path,
               const std::vector<Grad5>* gradients) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_vtk(mesh, q, out, gradients);
  if (!out) throw Error("error writing '" + path + "'");
}

std::vector<ProfileSample> extract_profile(const Mesh& mesh, const State& q, const LineSpec& line) {
  const int a = line.axis == 0 ? 1 : 0;
  const int b = line.axis == 2 ? 1 : 2;
  std::vector<ProfileSample> out;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const Cell& c = mesh.cell(i);
    Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
    for (int k : c.vertices) {
      lo = lo.cwiseMin(mesh.vertices()[k]);
      hi = hi.cwiseMax(mesh.vertices()[k]);
    }
    auto near = [&](int d) {
      const double half = 0.5 * (hi[d] - lo[d]);
      return std::abs(c.centroid[d] - line.point[d]) <= half * (1.0 + 1e-9);
    };
    if (!near(a) || !near(b)) continue;
    out.push_back({c.centroid[line.axis], q[i][0], velocity(q[i]), pressure(q[i])});
  }
  if (out.empty()) throw Error("profile line '" + to_string(line) + "' does not intersect the mesh");
  std::stable_sort(out.begin(), out.end(),
                   [](const ProfileSample& x, const ProfileSample& y) { return x.coord < y.coord; });
  return out;
}

void write_profile(const std::vector<ProfileSample>& s, std::ostream& out) {
  out << "coord,rho,u,v,w,p\n";
  for (const auto& p : s)
    out << format_double(p.coord) << "," << format_double(p.rho) << "," << format_double(p.u[0])
        << "," << format_double(p.u[1]) << "," << format_double(p.u[2]) << ","
        << format_double(p.p) << "\n";
}

std::vector<ProfileSample> read_profile(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "coord,rho,u,v,w,p")
    throw Error("profile: missing header 'coord,rho,u,v,w,p'");
  std::vector<ProfileSample> out;
  int no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[6];
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 6 || !parse_double(trim(cell), v[k])) throw Error("profile: bad line " + std::to_string(no));
      ++k;
    }
    if (k != 6) throw Error("profile: bad line " + std::to_string(no));
    out.push_back({v[0], v[1], Vec3(v[2], v[3], v[4]), v[5]});
  }
  return out;
}

ResidualLog::ResidualLog(std::ostream& out) : out_(&out) {
  *out_ << "# step stage m res_rho res_mx res_my res_mz res_E\n";
}

void ResidualLog::operator()(int step, const PseudoReport& r) {
  *out_ << step << " " << r.stage << " " << r.iteration;
  for (int k = 0; k < 5; ++k) *out_ << " " << format_double(r.residual[k]);
  *out_ << "\n";
  ++lines_;
}

std::vector<ResidualEntry> read_residual_log(std::istream& in) {
  std::vector<ResidualEntry> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    ResidualEntry e;
    std::string v[5];
    if (!(ss >> e.step >> e.stage >> e.iteration >> v[0] >> v[1] >> v[2] >> v[3] >> v[4]))
      throw Error("residual log: bad line " + std::to_string(no));
    for (int k = 0; k < 5; ++k)
      if (!parse_double(v[k], e.residual[k])) throw Error("residual log: bad line " + std::to_string(no));
    out.push_back(e);
  }
  return out;
}

void write_report(const RunReport& r, std::ostream& out) {
  out << "case = " << r.case_name << "\n";
  out << "scheme = " << r.scheme << "\n";
  out << "flavor = " << r.flavor << "\n";
  out << "cells = " << r.cells << "\n";
  out << "steps = " << r.steps << "\n";
  out << "time = " << format_double(r.time) << "\n";
  out << "min_dt = " << format_double(r.min_dt) << "\n";
  out << "wall_seconds = " << format_double(r.wall_seconds) << "\n";
  out << "diverging_steps = " << r.diverging_steps << "\n";
  out << "steady = " << (r.steady ? "true" : "false") << "\n";
  out << "residual_log = " << r.residual_log << "\n";
  for (const auto& [k, v] : r.diagnostics) out << "diag." << k << " = " << format_double(v) << "\n";
}

RunReport read_report(std::istream& in) {
  RunReport r;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    auto bad = [&] { return Error("report: bad line " + std::to_string(no) + ": " + t); };
    if (eq == std::string::npos) throw bad();
    const std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
    bool ok = true;
    if (k == "case")
      r.case_name = v;
    else if (k == "scheme")
      r.scheme = v;
    else if (k == "flavor")
      r.flavor = v;
    else if (k == "cells")
      ok = parse_int(v, r.cells);
    else if (k == "steps")
      ok = parse_int(v, r.steps);
    else if (k == "time")
      ok = parse_double(v, r.time);
    else if (k == "min_dt")
      ok = parse_double(v, r.min_dt);
    else if (k == "wall_seconds")
      ok = parse_double(v, r.wall_seconds);
    else if (k == "diverging_steps")
      ok = parse_int(v, r.diverging_steps);
    else if (k == "steady")
      r.steady = v == "true";
    else if (k == "residual_log")
      r.residual_log = v;
    else if (k.rfind("diag.", 0) == 0)
      ok = parse_double(v, r.diagnostics[k.substr(5)]);
    else
      ok = false;
    if (!ok) throw bad();
  }
  return r;
}

void write_convergence_table(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "mesh,error,order\n";
  for (const auto& r : rows)
    out << r.n << "^3x6," << format_double(r.error) << ","
        << (std::isnan(r.order) ? std::string("-") : format_double(r.order)) << "\n";
}

}  // namespace hgks
