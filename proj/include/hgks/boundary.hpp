#pragma once

// Ghost states behind boundary faces. Ghosts mirror the interior cell across the
// face; their states follow from the interior state through the boundary kind.

#include "hgks/gas.hpp"
#include "hgks/mesh.hpp"

namespace hgks {

inline Mat3 reflection(const Vec3& n) { return Mat3::Identity() - 2.0 * n * n.transpose(); }

/// Ghost state for an interior state q behind a boundary face with outward unit normal n.
inline Vec5 ghost_state(const BoundarySpec& bc, const Vec3& n, const Vec5& q) {
  switch (bc.kind) {
    case BoundaryKind::non_reflecting:
    case BoundaryKind::periodic:
      return q;
    case BoundaryKind::symmetry: {
      Vec5 g = q;
      g.segment<3>(1) = reflection(n) * q.segment<3>(1);
      return g;
    }
    case BoundaryKind::wall_adiabatic: {
      Vec5 g = q;
      g.segment<3>(1) = -q.segment<3>(1);
      return g;
    }
    case BoundaryKind::wall_isothermal:
    case BoundaryKind::moving_wall: {
      const double p = pressure(q);
      const double t_in = p / q[0];
      double t_g = 2.0 * bc.temperature - t_in;
      if (t_g < 0.5 * bc.temperature) t_g = 0.5 * bc.temperature;
      const Vec3 uw = bc.kind == BoundaryKind::moving_wall ? bc.wall_velocity : Vec3::Zero();
      const Vec3 u = 2.0 * uw - velocity(q);
      return to_conserved(Primitive{p / t_g, u, p});
    }
  }
  return q;
}

/// Derivative of ghost_state with respect to the interior state q.
inline Mat5 ghost_jacobian(const BoundarySpec& bc, const Vec3& n, const Vec5& q) {
  Mat5 b = Mat5::Identity();
  switch (bc.kind) {
    case BoundaryKind::symmetry:
      b.block<3, 3>(1, 1) = reflection(n);
      return b;
    case BoundaryKind::wall_adiabatic:
      b.block<3, 3>(1, 1) = -Mat3::Identity();
      return b;
    case BoundaryKind::wall_isothermal:
    case BoundaryKind::moving_wall:
      break;
    default:
      return b;
  }
  // Chain rule through the primitive variables (rho, u, p).
  const Primitive w = to_primitive(q);
  const Primitive wg = to_primitive(ghost_state(bc, n, q));
  const double tg = wg.p / wg.rho;
  const bool clipped = 2.0 * bc.temperature - w.p / w.rho < 0.5 * bc.temperature;
  Mat5 dw = Mat5::Zero();  // d(primitive of q) / dq
  dw(0, 0) = 1.0;
  dw.block<3, 1>(1, 0) = -w.u / w.rho;
  dw.block<3, 3>(1, 1) = Mat3::Identity() / w.rho;
  dw(4, 0) = 0.5 * (kGamma - 1.0) * w.u.squaredNorm();
  dw.block<1, 3>(4, 1) = -(kGamma - 1.0) * w.u.transpose();
  dw(4, 4) = kGamma - 1.0;
  Mat5 map = Mat5::Zero();  // d(ghost primitive) / d(primitive)
  map(0, 0) = clipped ? 0.0 : -w.p * w.p / (tg * tg * w.rho * w.rho);
  map(0, 4) = 1.0 / tg + (clipped ? 0.0 : w.p / (tg * tg * w.rho));
  map.block<3, 3>(1, 1) = -Mat3::Identity();
  map(4, 4) = 1.0;
  Mat5 dq = Mat5::Zero();  // d(conserved) / d(primitive) at the ghost
  dq(0, 0) = 1.0;
  dq.block<3, 1>(1, 0) = wg.u;
  dq.block<3, 3>(1, 1) = wg.rho * Mat3::Identity();
  dq(4, 0) = 0.5 * wg.u.squaredNorm();
  dq.block<1, 3>(4, 1) = wg.rho * wg.u.transpose();
  dq(4, 4) = 1.0 / (kGamma - 1.0);
  return dq * map * dw;
}

/// Gradient of the mirrored ghost field G(Q(R x)): dG/dQ (grad Q) R_n.
inline Grad5 ghost_gradient(const BoundarySpec& bc, const Vec3& n, const Vec5& q, const Grad5& g) {
  return ghost_jacobian(bc, n, q) * g * reflection(n);
}

}  // namespace hgks
