#pragma once

// Spatial operator: reconstruction, gas-kinetic interface fluxes at every face
// quadrature point and the finite-volume divergence L(Q) = -(1/V) sum F S.

#include "hgks/kinetic.hpp"
#include "hgks/mesh.hpp"
#include "hgks/reconstruction.hpp"

#include <string>
#include <vector>

namespace hgks {

/// Which flux enters L(Q): the value at the start of the averaging interval
/// (from the two interval averages) or the plain average over dt_s.
enum class FluxTime { instantaneous, averaged };

std::string to_string(FluxTime t);
FluxTime flux_time_from_string(const std::string& s);

struct FlowOptions {
  ReconOptions recon;
  kinetic::CollisionModel collision;
  FluxTime flux_time = FluxTime::instantaneous;
  bool operator==(const FlowOptions&) const = default;
};

struct FlowRequest {
  double dt_s = 0.0;       ///< flux-averaging step, also enters the collision time
  bool rate = false;       ///< fill Lt, the time derivative of L
  bool gradients = false;  ///< fill Gauss-theorem gradients from interface point values
  double t_point = 0.0;    ///< evolution time of those point values
};

struct FlowEvaluation {
  std::vector<Vec5> L;
  std::vector<Vec5> Lt;
  std::vector<Grad5> grad;
  int fallback_faces = 0;  ///< quadrature points that dropped their slopes
};

/// Face state of one side, rotated into the face frame.
kinetic::SideData to_face_frame(const Mat3& frame, const Vec5& q, const Grad5& g);
Vec5 rotate_momentum(const Mat3& r, Vec5 q);

class SpatialOperator {
 public:
  SpatialOperator(const Mesh& mesh, FlowOptions options);

  const Mesh& mesh() const { return *mesh_; }
  const Reconstructor& reconstructor() const { return recon_; }
  const FlowOptions& options() const { return options_; }
  bool compact() const { return options_.recon.flavor == ReconFlavor::hweno; }

  /// `grad` is required for the compact flavor. Throws StateError or SolverError.
  void evaluate(const std::vector<Vec5>& q, const std::vector<Grad5>* grad,
                const FlowRequest& request, FlowEvaluation& out);

 private:
  const Mesh* mesh_;
  FlowOptions options_;
  Reconstructor recon_;
  std::vector<CellPoly> polys_;
  std::vector<Vec5> face_flux_, face_rate_;
  std::vector<std::vector<Vec5>> face_values_;
  std::vector<int> status_;
};

/// Cell gradients from an analytic field, by the Gauss theorem over face quadrature points.
template <class Field>
std::vector<Grad5> field_gradients(const Mesh& mesh, Field&& field) {
  std::vector<std::vector<Vec5>> values(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f)
    for (const auto& qp : mesh.face(f).quad) values[f].push_back(field(qp.x));
  return gauss_gradients(mesh, values);
}

/// CFL-limited physical time step: cfl * min h / (|u| + a).
double cfl_time_step(const Mesh& mesh, const std::vector<Vec5>& q, double cfl);

}  // namespace hgks
