#pragma once

#include "hgks/types.hpp"

#include <cmath>

namespace hgks {

/// Ratio of specific heats. All cases run with a diatomic gas.
inline constexpr double kGamma = 1.4;

/// Internal degrees of freedom of the kinetic model, N = (5 - 3 gamma)/(gamma - 1).
inline constexpr double kInternalDof = (5.0 - 3.0 * kGamma) / (kGamma - 1.0);

struct Primitive {
  double rho = 1.0;
  Vec3 u = Vec3::Zero();
  double p = 1.0;
};

inline Vec5 to_conserved(const Primitive& w) {
  Vec5 q;
  q << w.rho, w.rho * w.u.x(), w.rho * w.u.y(), w.rho * w.u.z(),
      w.p / (kGamma - 1.0) + 0.5 * w.rho * w.u.squaredNorm();
  return q;
}

inline Vec5 to_conserved(double rho, double u, double v, double w, double p) {
  return to_conserved(Primitive{rho, Vec3(u, v, w), p});
}

inline Vec3 velocity(const Vec5& q) { return q.segment<3>(1) / q[0]; }

inline double pressure(const Vec5& q) {
  return (kGamma - 1.0) * (q[4] - 0.5 * q.segment<3>(1).squaredNorm() / q[0]);
}

inline Primitive to_primitive(const Vec5& q) { return {q[0], velocity(q), pressure(q)}; }

inline double sound_speed(const Vec5& q) { return std::sqrt(kGamma * pressure(q) / q[0]); }

inline double temperature(const Vec5& q) { return pressure(q) / q[0]; }

/// Positive density and positive internal energy.
inline bool admissible(const Vec5& q) {
  if (!(q[0] > 0.0) || !std::isfinite(q[4])) return false;
  return q[4] - 0.5 * q.segment<3>(1).squaredNorm() / q[0] > 0.0;
}

/// Inviscid flux projected on the (unit) direction n.
inline Vec5 euler_flux(const Vec5& q, const Vec3& n) {
  const Vec3 u = velocity(q);
  const double p = pressure(q);
  const double un = u.dot(n);
  Vec5 f;
  f[0] = q[0] * un;
  f.segment<3>(1) = q.segment<3>(1) * un + p * n;
  f[4] = (q[4] + p) * un;
  return f;
}

/// Analytic dF(Q).n/dQ for the gamma-law gas.
inline Mat5 euler_jacobian(const Vec5& q, const Vec3& n) {
  const double g1 = kGamma - 1.0;
  const Vec3 u = velocity(q);
  const double un = u.dot(n);
  const double phi = 0.5 * g1 * u.squaredNorm();
  const double h = (q[4] + pressure(q)) / q[0];
  Mat5 j = Mat5::Zero();
  j(0, 1) = n.x();
  j(0, 2) = n.y();
  j(0, 3) = n.z();
  for (int r = 0; r < 3; ++r) {
    j(r + 1, 0) = phi * n[r] - u[r] * un;
    for (int c = 0; c < 3; ++c) j(r + 1, c + 1) = u[r] * n[c] - g1 * u[c] * n[r];
    j(r + 1, r + 1) += un;
    j(r + 1, 4) = g1 * n[r];
  }
  j(4, 0) = (phi - h) * un;
  for (int c = 0; c < 3; ++c) j(4, c + 1) = h * n[c] - g1 * u[c] * un;
  j(4, 4) = kGamma * un;
  return j;
}

}  // namespace hgks
