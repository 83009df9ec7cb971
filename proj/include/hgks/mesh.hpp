#pragma once

#include "hgks/types.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hgks {

enum class CellType { tet, hex };

enum class BoundaryKind {
  non_reflecting,
  symmetry,
  wall_adiabatic,
  wall_isothermal,
  moving_wall,
  periodic,
};

std::string to_string(BoundaryKind k);
BoundaryKind boundary_kind_from_string(const std::string& s);

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::non_reflecting;
  double temperature = 1.0;           ///< wall temperature p/rho (isothermal and moving walls)
  Vec3 wall_velocity = Vec3::Zero();  ///< moving walls only
  std::string partner;                ///< periodic only
};

struct BoundaryPatch {
  std::string name;
  BoundarySpec spec;
  std::vector<std::vector<int>> face_vertices;  ///< as defined in the input, kept for export
  std::vector<int> faces;                       ///< boundary face ids (empty for merged periodic patches)
};

/// Raw connectivity from which a Mesh is assembled.
struct MeshSpec {
  std::vector<Vec3> vertices;
  std::vector<CellType> cell_types;
  std::vector<std::vector<int>> cell_vertices;  ///< VTK vertex ordering
  std::vector<BoundaryPatch> patches;           ///< only name, spec and face_vertices are read
};

struct QuadPoint {
  Vec3 x;
  double w;  ///< normalized: weights of a face sum to one
};

struct Cell {
  CellType type = CellType::hex;
  std::vector<int> vertices;
  std::vector<int> faces;
  Vec3 centroid = Vec3::Zero();
  double volume = 0.0;
  double h = 0.0;                  ///< volume / max face area
  Mat3 second_moment = Mat3::Zero();  ///< mean of (x - centroid)(x - centroid)^T over the cell
};

struct Face {
  int left = -1;
  int right = -1;  ///< -1 on boundary faces
  int patch = -1;  ///< boundary patch index, -1 for interior and periodic faces
  std::vector<int> vertices;
  double area = 0.0;
  Vec3 normal = Vec3::UnitX();  ///< unit, oriented left to right
  Vec3 centroid = Vec3::Zero();
  Mat3 frame = Mat3::Identity();  ///< rows n_x, n_y, n_z; n_x = normal
  std::vector<QuadPoint> quad;
  Vec3 shift = Vec3::Zero();  ///< periodic faces: right cell position seen from left = x + shift

  bool boundary() const { return right < 0; }
};

/// A face neighbor of a cell as seen from that cell.
struct Neighbor {
  int face = -1;
  int cell = -1;                 ///< -1 across a boundary face
  Vec3 shift = Vec3::Zero();     ///< translation applied to the neighbor's geometry
  double sign = 1.0;             ///< +1 if the face normal points away from this cell
};

class Mesh {
 public:
  Mesh() = default;
  /// Validates and assembles geometry, faces, periodic links. Throws MeshError.
  explicit Mesh(MeshSpec spec);

  const std::vector<Vec3>& vertices() const { return spec_.vertices; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<BoundaryPatch>& patches() const { return patches_; }
  const MeshSpec& spec() const { return spec_; }

  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_faces() const { return static_cast<int>(faces_.size()); }
  const Cell& cell(int i) const { return cells_[i]; }
  const Face& face(int f) const { return faces_[f]; }
  const std::vector<Neighbor>& neighbors(int i) const { return neighbors_[i]; }
  const BoundarySpec& boundary(const Face& f) const { return patches_[f.patch].spec; }

  double min_h() const;
  double total_volume() const;

 private:
  void build_cells();
  void build_faces();
  void link_periodic();
  void finalize();

  MeshSpec spec_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::vector<BoundaryPatch> patches_;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<std::vector<bool>> slots_;  // per cell face: is the cell the left side
};

/// Monotone map of [0, 1] onto itself applied to node coordinates along one axis.
using StretchMap = std::function<double(double)>;

struct BoxSpec {
  std::array<int, 3> n{1, 1, 1};
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
  std::array<StretchMap, 3> stretch{};
  /// xmin, xmax, ymin, ymax, zmin, zmax
  std::array<BoundarySpec, 6> boundaries{};
};

/// Sets a periodic pair on axis (0, 1, 2).
void make_periodic(BoxSpec& box, int axis);
void make_all_periodic(BoxSpec& box);

/// Structured hexahedral mesh. Throws ConfigError for invalid stretch maps, MeshError for
/// inverted cells.
Mesh generate_box_hex(const BoxSpec& box);

/// Every box cell split into six tetrahedra around its main diagonal.
Mesh generate_box_tet6(const BoxSpec& box);

/// Node coordinates along one axis after stretching (size n + 1).
std::vector<double> axis_nodes(int n, double lo, double hi, const StretchMap& map);

/// Clustering toward y = 0 used by the viscous shock tube: s - sin(pi s)/6.25.
StretchMap wall_clustering_map();

/// Two-sided tanh clustering whose first and last cells have the given fraction of the length.
StretchMap tanh_two_sided_map(int n, double first_fraction);

/// Tensor Gauss rule with n points per direction over cell i (collapsed for tets);
/// weights sum to one.
std::vector<QuadPoint> cell_quadrature(const Mesh& mesh, int i, int n);

void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh import_mesh(const std::string& path);

}  // namespace hgks
