#include "hgks/mesh.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace hgks {

namespace {

// Outward-ordered local faces in VTK vertex numbering.
const std::vector<std::vector<int>> kTetFaces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
const std::vector<std::vector<int>> kHexFaces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                 {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
const int kHexTets[5][4] = {{0, 1, 3, 4}, {1, 2, 3, 6}, {1, 4, 5, 6}, {3, 4, 6, 7}, {1, 3, 4, 6}};
// Right-handed edge triples at each hex corner.
const int kHexCorners[8][4] = {{0, 1, 3, 4}, {1, 2, 0, 5}, {2, 3, 1, 6}, {3, 0, 2, 7},
                               {4, 7, 5, 0}, {5, 4, 6, 1}, {6, 5, 7, 2}, {7, 6, 4, 3}};

using FaceKey = std::array<int, 4>;

FaceKey face_key(const std::vector<int>& v) {
  FaceKey k{-1, -1, -1, -1};
  std::copy(v.begin(), v.end(), k.begin());
  std::sort(k.begin(), k.begin() + static_cast<long>(v.size()));
  return k;
}

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ull;
    return h;
  }
};

struct FaceGeometry {
  Vec3 vector_area;
  Vec3 centroid;
  std::vector<QuadPoint> quad;
};

FaceGeometry face_geometry(const std::vector<Vec3>& p) {
  FaceGeometry g;
  if (p.size() == 3) {
    g.vector_area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    g.centroid = (p[0] + p[1] + p[2]) / 3.0;
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    for (int k = 0; k < 3; ++k) {
      const double l0 = k == 0 ? a : b, l1 = k == 1 ? a : b, l2 = k == 2 ? a : b;
      g.quad.push_back({l0 * p[0] + l1 * p[1] + l2 * p[2], 1.0 / 3.0});
    }
    return g;
  }
  g.vector_area = 0.5 * (p[2] - p[0]).cross(p[3] - p[1]);
  const double r = 1.0 / std::sqrt(3.0);
  double wsum = 0.0;
  Vec3 c = Vec3::Zero();
  for (double eta : {-r, r}) {
    for (double xi : {-r, r}) {
      const double n0 = 0.25 * (1 - xi) * (1 - eta), n1 = 0.25 * (1 + xi) * (1 - eta);
      const double n2 = 0.25 * (1 + xi) * (1 + eta), n3 = 0.25 * (1 - xi) * (1 + eta);
      const Vec3 x = n0 * p[0] + n1 * p[1] + n2 * p[2] + n3 * p[3];
      const Vec3 dxi = 0.25 * ((1 - eta) * (p[1] - p[0]) + (1 + eta) * (p[2] - p[3]));
      const Vec3 deta = 0.25 * ((1 - xi) * (p[3] - p[0]) + (1 + xi) * (p[2] - p[1]));
      const double j = dxi.cross(deta).norm();
      g.quad.push_back({x, j});
      wsum += j;
      c += j * x;
    }
  }
  for (auto& q : g.quad) q.w /= wsum;
  g.centroid = c / wsum;
  return g;
}

Mat3 local_frame(const Vec3& n) {
  Vec3 e = Vec3::UnitX();
  const Vec3 an = n.cwiseAbs();
  if (an.y() <= an.x() && an.y() <= an.z()) e = Vec3::UnitY();
  else if (an.z() <= an.x() && an.z() <= an.y()) e = Vec3::UnitZ();
  else e = Vec3::UnitX();
  const Vec3 t1 = n.cross(e).normalized();
  const Vec3 t2 = n.cross(t1);
  Mat3 f;
  f.row(0) = n;
  f.row(1) = t1;
  f.row(2) = t2;
  return f;
}

struct TetIntegrals {
  double volume = 0.0;
  Vec3 first = Vec3::Zero();   // integral of x
  Mat3 second = Mat3::Zero();  // integral of x x^T
};

void add_tet(TetIntegrals& acc, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const double v = (b - a).dot((c - a).cross(d - a)) / 6.0;
  const Vec3 s = a + b + c + d;
  acc.volume += v;
  acc.first += v * s / 4.0;
  acc.second += v / 20.0 * (a * a.transpose() + b * b.transpose() + c * c.transpose() +
                            d * d.transpose() + s * s.transpose());
}

std::string patch_kind_string(const BoundarySpec& s) {
  std::ostringstream o;
  o << std::setprecision(17) << to_string(s.kind);
  switch (s.kind) {
    case BoundaryKind::wall_isothermal:
      o << ' ' << s.temperature;
      break;
    case BoundaryKind::moving_wall:
      o << ' ' << s.wall_velocity.x() << ' ' << s.wall_velocity.y() << ' ' << s.wall_velocity.z()
        << ' ' << s.temperature;
      break;
    case BoundaryKind::periodic:
      o << ' ' << s.partner;
      break;
    default:
      break;
  }
  return o.str();
}

}  // namespace

std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::non_reflecting: return "non_reflecting";
    case BoundaryKind::symmetry: return "symmetry";
    case BoundaryKind::wall_adiabatic: return "wall_adiabatic";
    case BoundaryKind::wall_isothermal: return "wall_isothermal";
    case BoundaryKind::moving_wall: return "moving_wall";
    case BoundaryKind::periodic: return "periodic";
  }
  return "?";
}

BoundaryKind boundary_kind_from_string(const std::string& s) {
  for (auto k : {BoundaryKind::non_reflecting, BoundaryKind::symmetry, BoundaryKind::wall_adiabatic,
                 BoundaryKind::wall_isothermal, BoundaryKind::moving_wall, BoundaryKind::periodic})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown boundary kind '" + s + "'");
}

Mesh::Mesh(MeshSpec spec) : spec_(std::move(spec)) {
  build_cells();
  build_faces();
  link_periodic();
  finalize();
}

void Mesh::build_cells() {
  const int nv = static_cast<int>(spec_.vertices.size());
  if (spec_.cell_types.size() != spec_.cell_vertices.size())
    throw MeshError("cell type and connectivity counts differ");
  cells_.resize(spec_.cell_types.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    Cell& c = cells_[i];
    c.type = spec_.cell_types[i];
    c.vertices = spec_.cell_vertices[i];
    const std::size_t expect = c.type == CellType::tet ? 4 : 8;
    if (c.vertices.size() != expect)
      throw MeshError("cell " + std::to_string(i) + " has " + std::to_string(c.vertices.size()) +
                      " vertices");
    for (int v : c.vertices)
      if (v < 0 || v >= nv)
        throw MeshError("cell " + std::to_string(i) + " references missing vertex " +
                        std::to_string(v));
    // Integrate relative to the first vertex to limit cancellation.
    const Vec3 ref = spec_.vertices[c.vertices[0]];
    auto p = [&](int k) -> Vec3 { return spec_.vertices[c.vertices[k]] - ref; };
    TetIntegrals acc;
    if (c.type == CellType::tet) {
      add_tet(acc, p(0), p(1), p(2), p(3));
    } else {
      for (const auto& corner : kHexCorners) {
        const Vec3 o = p(corner[0]);
        const double j = (p(corner[1]) - o).dot((p(corner[2]) - o).cross(p(corner[3]) - o));
        if (!(j > 0.0))
          throw MeshError("cell " + std::to_string(i) + " is inverted at corner " +
                          std::to_string(corner[0]));
      }
      for (const auto& t : kHexTets) add_tet(acc, p(t[0]), p(t[1]), p(t[2]), p(t[3]));
    }
    if (!(acc.volume > 0.0))
      throw MeshError("cell " + std::to_string(i) + " has non-positive volume");
    const Vec3 cr = acc.first / acc.volume;
    c.volume = acc.volume;
    c.centroid = ref + cr;
    c.second_moment = acc.second / acc.volume - cr * cr.transpose();
  }
}

void Mesh::build_faces() {
  std::unordered_map<FaceKey, int, FaceKeyHash> lookup;
  slots_.assign(cells_.size(), {});
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    Cell& c = cells_[i];
    const auto& local = c.type == CellType::tet ? kTetFaces : kHexFaces;
    for (const auto& lf : local) {
      std::vector<int> verts;
      for (int k : lf) verts.push_back(c.vertices[k]);
      const FaceKey key = face_key(verts);
      auto it = lookup.find(key);
      if (it != lookup.end()) {
        Face& f = faces_[it->second];
        if (f.right >= 0)
          throw MeshError("face shared by more than two cells at cell " + std::to_string(i));
        f.right = static_cast<int>(i);
        c.faces.push_back(it->second);
        slots_[i].push_back(false);
        continue;
      }
      std::vector<Vec3> pts;
      for (int v : verts) pts.push_back(spec_.vertices[v]);
      FaceGeometry g = face_geometry(pts);
      Face f;
      f.left = static_cast<int>(i);
      f.vertices = verts;
      f.area = g.vector_area.norm();
      f.normal = g.vector_area / f.area;
      if (f.normal.dot(g.centroid - c.centroid) < 0.0) f.normal = -f.normal;
      f.centroid = g.centroid;
      f.frame = local_frame(f.normal);
      f.quad = std::move(g.quad);
      lookup.emplace(key, static_cast<int>(faces_.size()));
      c.faces.push_back(static_cast<int>(faces_.size()));
      slots_[i].push_back(true);
      faces_.push_back(std::move(f));
    }
  }

  patches_ = spec_.patches;
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    auto& patch = patches_[p];
    patch.faces.clear();
    for (std::size_t k = 0; k < patch.face_vertices.size(); ++k) {
      auto it = lookup.find(face_key(patch.face_vertices[k]));
      if (it == lookup.end() || faces_[it->second].right >= 0)
        throw MeshError("patch '" + patch.name + "' face " + std::to_string(k) +
                        " is not a boundary face of any cell");
      Face& f = faces_[it->second];
      if (f.patch >= 0)
        throw MeshError("patch '" + patch.name + "' face " + std::to_string(k) +
                        " already belongs to patch '" + patches_[f.patch].name + "'");
      f.patch = static_cast<int>(p);
      patch.faces.push_back(it->second);
    }
  }
  for (const Face& f : faces_)
    if (f.right < 0 && f.patch < 0)
      throw MeshError("open cell " + std::to_string(f.left) +
                      ": a face is neither shared nor assigned to a boundary patch");
}

void Mesh::link_periodic() {
  std::vector<bool> removed(faces_.size(), false);
  std::vector<int> redirect(faces_.size(), -1);
  for (std::size_t a = 0; a < patches_.size(); ++a) {
    auto& pa = patches_[a];
    if (pa.spec.kind != BoundaryKind::periodic) continue;
    auto partner = std::find_if(patches_.begin(), patches_.end(),
                                [&](const BoundaryPatch& p) { return p.name == pa.spec.partner; });
    if (partner == patches_.end() || partner->spec.kind != BoundaryKind::periodic ||
        partner->spec.partner != pa.name)
      throw MeshError("periodic patch '" + pa.name + "' has no matching partner");
    const std::size_t b = static_cast<std::size_t>(partner - patches_.begin());
    if (b <= a && b != a) continue;
    if (b == a) throw MeshError("periodic patch '" + pa.name + "' is its own partner");
    auto& pb = patches_[b];
    if (pa.faces.size() != pb.faces.size())
      throw MeshError("periodic patches '" + pa.name + "' and '" + pb.name + "' differ in size");

    auto mean_centroid = [&](const BoundaryPatch& p) {
      Vec3 s = Vec3::Zero();
      double w = 0.0;
      for (int f : p.faces) {
        s += faces_[f].area * faces_[f].centroid;
        w += faces_[f].area;
      }
      return Vec3(s / w);
    };
    const Vec3 t = mean_centroid(pb) - mean_centroid(pa);
    double extent = 0.0;
    for (int f : pa.faces) extent = std::max(extent, std::sqrt(faces_[f].area));
    const double tol = 1e-6 * extent;

    std::map<std::array<long long, 3>, int> bins;
    auto bin = [&](const Vec3& x) {
      return std::array<long long, 3>{std::llround(x.x() / tol), std::llround(x.y() / tol),
                                      std::llround(x.z() / tol)};
    };
    for (int f : pb.faces) bins[bin(faces_[f].centroid)] = f;
    for (int fa : pa.faces) {
      const Vec3 target = faces_[fa].centroid + t;
      const auto key = bin(target);
      int fb = -1;
      for (long long dx = -1; dx <= 1 && fb < 0; ++dx)
        for (long long dy = -1; dy <= 1 && fb < 0; ++dy)
          for (long long dz = -1; dz <= 1 && fb < 0; ++dz) {
            auto it = bins.find({key[0] + dx, key[1] + dy, key[2] + dz});
            if (it != bins.end() && (faces_[it->second].centroid - target).norm() < 2.0 * tol)
              fb = it->second;
          }
      if (fb < 0 || removed[fb])
        throw MeshError("periodic face of patch '" + pa.name + "' has no translated partner");
      Face& f = faces_[fa];
      f.right = faces_[fb].left;
      f.shift = -t;
      f.patch = -1;
      removed[fb] = true;
      redirect[fb] = fa;
    }
    pa.faces.clear();
    pb.faces.clear();
  }

  std::vector<int> renumber(faces_.size(), -1);
  std::vector<Face> kept;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (removed[f]) continue;
    renumber[f] = static_cast<int>(kept.size());
    kept.push_back(std::move(faces_[f]));
  }
  faces_ = std::move(kept);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    for (std::size_t k = 0; k < cells_[i].faces.size(); ++k) {
      int& f = cells_[i].faces[k];
      if (removed[f]) {
        f = redirect[f];
        slots_[i][k] = false;
      }
      f = renumber[f];
    }
  }
  for (auto& p : patches_)
    for (int& f : p.faces) f = renumber[f];
}

void Mesh::finalize() {
  neighbors_.assign(cells_.size(), {});
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    Cell& c = cells_[i];
    double max_area = 0.0, total_area = 0.0;
    Vec3 closure = Vec3::Zero();
    for (std::size_t k = 0; k < c.faces.size(); ++k) {
      const Face& f = faces_[c.faces[k]];
      const bool left = slots_[i][k];
      max_area = std::max(max_area, f.area);
      total_area += f.area;
      closure += (left ? 1.0 : -1.0) * f.area * f.normal;
      Neighbor n;
      n.face = c.faces[k];
      n.sign = left ? 1.0 : -1.0;
      n.cell = left ? f.right : f.left;
      n.shift = left ? f.shift : Vec3(-f.shift);
      neighbors_[i].push_back(n);
    }
    if (closure.norm() > 1e-10 * total_area)
      throw MeshError("cell " + std::to_string(i) + " is not closed");
    c.h = c.volume / max_area;
  }
  slots_.clear();
}

double Mesh::min_h() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& c : cells_) h = std::min(h, c.h);
  return h;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (const auto& c : cells_) v += c.volume;
  return v;
}

void make_periodic(BoxSpec& box, int axis) {
  static const char* names[6] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
  box.boundaries[2 * axis] = {BoundaryKind::periodic, 1.0, Vec3::Zero(), names[2 * axis + 1]};
  box.boundaries[2 * axis + 1] = {BoundaryKind::periodic, 1.0, Vec3::Zero(), names[2 * axis]};
}

void make_all_periodic(BoxSpec& box) {
  for (int a = 0; a < 3; ++a) make_periodic(box, a);
}

std::vector<double> axis_nodes(int n, double lo, double hi, const StretchMap& map) {
  if (n < 1) throw ConfigError("cell count must be at least 1");
  std::vector<double> s(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    s[k] = map ? map(u) : u;
  }
  if (map) {
    if (std::abs(s[0]) > 1e-12 || std::abs(s[n] - 1.0) > 1e-12)
      throw ConfigError("stretch map must fix the end points 0 and 1");
    s[0] = 0.0;
    s[n] = 1.0;
    for (int k = 0; k < n; ++k)
      if (!(s[k + 1] > s[k])) throw ConfigError("stretch map is not monotone");
  }
  std::vector<double> x(n + 1);
  for (int k = 0; k <= n; ++k) x[k] = lo + (hi - lo) * s[k];
  return x;
}

StretchMap wall_clustering_map() {
  return [](double s) { return s - std::sin(M_PI * s) / 6.25; };
}

StretchMap tanh_two_sided_map(int n, double first_fraction) {
  if (n < 2 || !(first_fraction > 0.0) || first_fraction >= 1.0 / n)
    throw ConfigError("tanh clustering needs a first cell smaller than uniform spacing");
  auto map = [](double beta, double s) {
    return 0.5 * (1.0 + std::tanh(beta * (s - 0.5)) / std::tanh(0.5 * beta));
  };
  double lo = 1e-8, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (map(mid, 1.0 / n) > first_fraction) lo = mid;
    else hi = mid;
  }
  const double beta = 0.5 * (lo + hi);
  return [beta, map](double s) { return map(beta, s); };
}

namespace {

MeshSpec box_spec(const BoxSpec& box, bool tets) {
  std::array<std::vector<double>, 3> x;
  for (int a = 0; a < 3; ++a) x[a] = axis_nodes(box.n[a], box.lo[a], box.hi[a], box.stretch[a]);
  const int nx = box.n[0], ny = box.n[1], nz = box.n[2];
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  MeshSpec spec;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) spec.vertices.emplace_back(x[0][i], x[1][j], x[2][k]);
  static const int kTet6[6][4] = {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6},
                                  {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int h[8] = {vid(i, j, k),         vid(i + 1, j, k),     vid(i + 1, j + 1, k),
                          vid(i, j + 1, k),     vid(i, j, k + 1),     vid(i + 1, j, k + 1),
                          vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        if (!tets) {
          spec.cell_types.push_back(CellType::hex);
          spec.cell_vertices.emplace_back(h, h + 8);
          continue;
        }
        for (const auto& t : kTet6) {
          spec.cell_types.push_back(CellType::tet);
          spec.cell_vertices.push_back({h[t[0]], h[t[1]], h[t[2]], h[t[3]]});
        }
      }

  static const char* names[6] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
  for (int side = 0; side < 6; ++side) {
    BoundaryPatch p;
    p.name = names[side];
    p.spec = box.boundaries[side];
    const int axis = side / 2;
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    const int fixed = side % 2 == 0 ? 0 : box.n[axis];
    for (int q = 0; q < box.n[a2]; ++q)
      for (int r = 0; r < box.n[a1]; ++r) {
        auto node = [&](int dr, int dq) {
          int idx[3];
          idx[axis] = fixed;
          idx[a1] = r + dr;
          idx[a2] = q + dq;
          return vid(idx[0], idx[1], idx[2]);
        };
        const int c00 = node(0, 0), c10 = node(1, 0), c11 = node(1, 1), c01 = node(0, 1);
        if (!tets) {
          p.face_vertices.push_back({c00, c10, c11, c01});
          continue;
        }
        // The six-tet split cuts every box face along its (min, max) corner diagonal.
        p.face_vertices.push_back({c00, c10, c11});
        p.face_vertices.push_back({c00, c11, c01});
      }
    spec.patches.push_back(std::move(p));
  }
  return spec;
}

}  // namespace

Mesh generate_box_hex(const BoxSpec& box) { return Mesh(box_spec(box, false)); }

Mesh generate_box_tet6(const BoxSpec& box) { return Mesh(box_spec(box, true)); }

void write_mesh(const Mesh& mesh, std::ostream& out) {
  const MeshSpec& s = mesh.spec();
  out << "hgks-mesh 1\n" << std::setprecision(17);
  out << "vertices " << s.vertices.size() << '\n';
  for (const auto& v : s.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "cells " << s.cell_vertices.size() << '\n';
  for (std::size_t i = 0; i < s.cell_vertices.size(); ++i) {
    out << (s.cell_types[i] == CellType::tet ? "tet" : "hex");
    for (int v : s.cell_vertices[i]) out << ' ' << v;
    out << '\n';
  }
  out << "patches " << s.patches.size() << '\n';
  for (const auto& p : s.patches) {
    out << "patch " << p.name << ' ' << patch_kind_string(p.spec) << ' ' << p.face_vertices.size()
        << '\n';
    for (const auto& f : p.face_vertices) {
      out << 'f';
      for (int v : f) out << ' ' << v;
      out << '\n';
    }
  }
  out << "end\n";
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return std::istringstream(line);
    }
    fail("unexpected end of file");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("mesh line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

std::size_t read_count(LineReader& r, const std::string& keyword) {
  auto ls = r.next();
  std::string word;
  long long n = -1;
  if (!(ls >> word >> n) || word != keyword || n < 0) r.fail("expected '" + keyword + " <count>'");
  return static_cast<std::size_t>(n);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  {
    auto ls = r.next();
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "hgks-mesh" || version != 1)
      r.fail("expected header 'hgks-mesh 1'");
  }
  MeshSpec spec;
  const std::size_t nv = read_count(r, "vertices");
  spec.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto ls = r.next();
    double x, y, z;
    if (!(ls >> x >> y >> z)) r.fail("expected three vertex coordinates");
    spec.vertices.emplace_back(x, y, z);
  }
  const std::size_t nc = read_count(r, "cells");
  for (std::size_t i = 0; i < nc; ++i) {
    auto ls = r.next();
    std::string type;
    ls >> type;
    int count = 0;
    if (type == "tet") {
      spec.cell_types.push_back(CellType::tet);
      count = 4;
    } else if (type == "hex") {
      spec.cell_types.push_back(CellType::hex);
      count = 8;
    } else {
      r.fail("unknown cell type '" + type + "'");
    }
    std::vector<int> v(count);
    for (int& id : v)
      if (!(ls >> id)) r.fail("cell " + std::to_string(i) + " has too few vertex ids");
    spec.cell_vertices.push_back(std::move(v));
  }
  const std::size_t np = read_count(r, "patches");
  for (std::size_t p = 0; p < np; ++p) {
    auto ls = r.next();
    std::string word, kind;
    BoundaryPatch patch;
    if (!(ls >> word >> patch.name >> kind) || word != "patch") r.fail("expected 'patch <name> <kind>'");
    try {
      patch.spec.kind = boundary_kind_from_string(kind);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
    bool ok = true;
    switch (patch.spec.kind) {
      case BoundaryKind::wall_isothermal:
        ok = static_cast<bool>(ls >> patch.spec.temperature);
        break;
      case BoundaryKind::moving_wall:
        ok = static_cast<bool>(ls >> patch.spec.wall_velocity.x() >> patch.spec.wall_velocity.y() >>
                               patch.spec.wall_velocity.z() >> patch.spec.temperature);
        break;
      case BoundaryKind::periodic:
        ok = static_cast<bool>(ls >> patch.spec.partner);
        break;
      default:
        break;
    }
    long long nf = -1;
    if (!ok || !(ls >> nf) || nf < 0) r.fail("malformed patch '" + patch.name + "'");
    for (long long k = 0; k < nf; ++k) {
      auto fl = r.next();
      std::string tag;
      fl >> tag;
      if (tag != "f") r.fail("expected face line 'f <ids>'");
      std::vector<int> ids;
      int id;
      while (fl >> id) ids.push_back(id);
      if (ids.size() != 3 && ids.size() != 4) r.fail("faces need three or four vertex ids");
      for (int v : ids)
        if (v < 0 || static_cast<std::size_t>(v) >= nv)
          r.fail("face references missing vertex " + std::to_string(v));
      patch.face_vertices.push_back(std::move(ids));
    }
    spec.patches.push_back(std::move(patch));
  }
  {
    auto ls = r.next();
    std::string word;
    if (!(ls >> word) || word != "end") r.fail("expected 'end'");
  }
  return Mesh(std::move(spec));
}

Mesh import_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

}  // namespace hgks

namespace hgks {

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (es.eigenvalues()[k] + 1.0);
    w[k] = es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
}

}  // namespace

std::vector<QuadPoint> cell_quadrature(const Mesh& mesh, int i, int n) {
  const Cell& c = mesh.cell(i);
  const auto& v = mesh.vertices();
  std::vector<double> x, w;
  gauss_legendre01(n, x, w);
  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int d = 0; d < n; ++d) {
        const double s = x[a], t = x[b], u = x[d];
        Vec3 p;
        double jac;
        if (c.type == CellType::tet) {
          const Vec3& p0 = v[c.vertices[0]];
          const Vec3 e1 = v[c.vertices[1]] - p0, e2 = v[c.vertices[2]] - p0,
                     e3 = v[c.vertices[3]] - p0;
          p = p0 + s * e1 + t * (1 - s) * e2 + u * (1 - s) * (1 - t) * e3;
          jac = (1 - s) * (1 - s) * (1 - t);
        } else {
          const double n8[8] = {(1 - s) * (1 - t) * (1 - u), s * (1 - t) * (1 - u),
                                s * t * (1 - u),             (1 - s) * t * (1 - u),
                                (1 - s) * (1 - t) * u,       s * (1 - t) * u,
                                s * t * u,                   (1 - s) * t * u};
          p = Vec3::Zero();
          for (int k = 0; k < 8; ++k) p += n8[k] * v[c.vertices[k]];
          const auto& P = [&](int k) -> const Vec3& { return v[c.vertices[k]]; };
          const Vec3 ds = (1 - t) * (1 - u) * (P(1) - P(0)) + t * (1 - u) * (P(2) - P(3)) +
                          (1 - t) * u * (P(5) - P(4)) + t * u * (P(6) - P(7));
          const Vec3 dt = (1 - s) * (1 - u) * (P(3) - P(0)) + s * (1 - u) * (P(2) - P(1)) +
                          (1 - s) * u * (P(7) - P(4)) + s * u * (P(6) - P(5));
          const Vec3 du = (1 - s) * (1 - t) * (P(4) - P(0)) + s * (1 - t) * (P(5) - P(1)) +
                          s * t * (P(6) - P(2)) + (1 - s) * t * (P(7) - P(3));
          jac = std::abs(ds.dot(dt.cross(du)));
        }
        const double wk = w[a] * w[b] * w[d] * jac;
        out.push_back({p, wk});
        sum += wk;
      }
    }
  }
  for (auto& q : out) q.w /= sum;
  return out;
}

}  // namespace hgks
