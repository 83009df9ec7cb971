#include "hgks/flow.hpp"

#include "hgks/boundary.hpp"
#include "hgks/parallel.hpp"

#include <cmath>
#include <limits>

namespace hgks {

std::string to_string(FluxTime t) {
  return t == FluxTime::instantaneous ? "instantaneous" : "averaged";
}

FluxTime flux_time_from_string(const std::string& s) {
  if (s == "instantaneous") return FluxTime::instantaneous;
  if (s == "averaged") return FluxTime::averaged;
  throw ConfigError("unknown flux time '" + s + "'");
}

Vec5 rotate_momentum(const Mat3& r, Vec5 q) {
  q.segment<3>(1) = r * q.segment<3>(1);
  return q;
}

kinetic::SideData to_face_frame(const Mat3& frame, const Vec5& q, const Grad5& g) {
  kinetic::SideData s;
  s.q = rotate_momentum(frame, q);
  Grad5 d = g * frame.transpose();
  d.middleRows<3>(1) = frame * d.middleRows<3>(1);
  for (int k = 0; k < 3; ++k) s.dq[k] = d.col(k);
  return s;
}

SpatialOperator::SpatialOperator(const Mesh& mesh, FlowOptions options)
    : mesh_(&mesh), options_(options), recon_(mesh, options.recon) {}

namespace {

enum Status { ok = 0, non_finite = 1, inadmissible = 2 };

}  // namespace

void SpatialOperator::evaluate(const std::vector<Vec5>& q, const std::vector<Grad5>* grad,
                               const FlowRequest& request, FlowEvaluation& out) {
  const Mesh& mesh = *mesh_;
  const int nc = mesh.n_cells();
  const int nf = mesh.n_faces();
  if (static_cast<int>(q.size()) != nc) throw SolverError("state size does not match the mesh");
  if (compact() && (!grad || static_cast<int>(grad->size()) != nc))
    throw SolverError("compact reconstruction needs cell gradients");
  if (!(request.dt_s > 0.0)) throw SolverError("flux-averaging step must be positive");

  recon_.reconstruct(q, compact() ? grad : nullptr, polys_);

  face_flux_.assign(nf, Vec5::Zero());
  face_rate_.assign(request.rate ? nf : 0, Vec5::Zero());
  if (request.gradients) {
    face_values_.resize(nf);
  }
  status_.assign(nf, ok);
  std::vector<int> fallbacks(nf, 0);

  parallel_for(nf, [&](int fi) {
    const Face& f = mesh.face(fi);
    const int l = f.left;
    const int r = f.right;
    Vec5 flux = Vec5::Zero();
    Vec5 rate = Vec5::Zero();
    if (request.gradients) face_values_[fi].resize(f.quad.size());
    for (std::size_t k = 0; k < f.quad.size(); ++k) {
      const Vec3& x = f.quad[k].x;
      const Vec5 ql = recon_.value(l, polys_[l], x);
      const Grad5 gl = recon_.gradient(l, polys_[l], x);
      Vec5 qr;
      Grad5 gr;
      if (r >= 0) {
        qr = recon_.value(r, polys_[r], x - f.shift);
        gr = recon_.gradient(r, polys_[r], x - f.shift);
      } else {
        const BoundarySpec& bc = mesh.boundary(f);
        qr = ghost_state(bc, f.normal, ql);
        gr = ghost_gradient(bc, f.normal, ql, gl);
      }
      kinetic::SideData sl = to_face_frame(f.frame, ql, gl);
      kinetic::SideData sr = to_face_frame(f.frame, qr, gr);
      auto dist = kinetic::InterfaceDistribution::build(sl, sr);
      if (!dist) {
        ++fallbacks[fi];
        sl.dq = {Vec5::Zero(), Vec5::Zero(), Vec5::Zero()};
        sr.dq = sl.dq;
        dist = kinetic::InterfaceDistribution::build(sl, sr);
      }
      if (!dist) {
        const Vec5 ar =
            r >= 0 ? q[r] : ghost_state(mesh.boundary(f), f.normal, q[l]);
        sl.q = rotate_momentum(f.frame, q[l]);
        sr.q = rotate_momentum(f.frame, ar);
        dist = kinetic::InterfaceDistribution::build(sl, sr);
      }
      if (!dist) {
        status_[fi] = inadmissible;
        return;
      }
      const double tau = kinetic::collision_time(options_.collision, pressure(sl.q),
                                                 pressure(sr.q), pressure(dist->q0()),
                                                 request.dt_s);
      const kinetic::InterfaceFlux fx = dist->flux(tau, request.dt_s);
      const double w = f.quad[k].w;
      flux += w * (options_.flux_time == FluxTime::instantaneous ? fx.instantaneous() : fx.full);
      if (request.rate) rate += w * fx.rate(request.dt_s);
      if (request.gradients)
        face_values_[fi][k] =
            rotate_momentum(f.frame.transpose(), dist->point_value(tau, request.t_point));
    }
    const Mat3 back = f.frame.transpose();
    face_flux_[fi] = f.area * rotate_momentum(back, flux);
    if (request.rate) face_rate_[fi] = f.area * rotate_momentum(back, rate);
    if (!face_flux_[fi].allFinite() || (request.rate && !face_rate_[fi].allFinite()))
      status_[fi] = non_finite;
  });

  out.fallback_faces = 0;
  for (int fi = 0; fi < nf; ++fi) {
    out.fallback_faces += fallbacks[fi];
    if (status_[fi] == inadmissible)
      throw StateError("no admissible interface state at face " + std::to_string(fi),
                       mesh.face(fi).left);
    if (status_[fi] == non_finite)
      throw SolverError("non-finite flux at face " + std::to_string(fi));
  }

  out.L.assign(nc, Vec5::Zero());
  if (request.rate) out.Lt.assign(nc, Vec5::Zero());
  parallel_for(nc, [&](int i) {
    Vec5 s = Vec5::Zero();
    Vec5 st = Vec5::Zero();
    for (const auto& nb : mesh.neighbors(i)) {
      s += nb.sign * face_flux_[nb.face];
      if (request.rate) st += nb.sign * face_rate_[nb.face];
    }
    const double v = mesh.cell(i).volume;
    out.L[i] = -s / v;
    if (request.rate) out.Lt[i] = -st / v;
  });
  if (request.gradients) out.grad = gauss_gradients(mesh, face_values_);
}

double cfl_time_step(const Mesh& mesh, const std::vector<Vec5>& q, double cfl) {
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double s = velocity(q[i]).norm() + sound_speed(q[i]);
    dt = std::min(dt, mesh.cell(i).h / s);
  }
  return cfl * dt;
}

}  // namespace hgks
