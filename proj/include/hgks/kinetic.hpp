#pragma once

// Gas-kinetic interface solver: Maxwellian moment algebra, micro-slopes and the
// time-dependent BGK distribution at a cell interface.
//
// All quantities here live in the face local frame (n_x, n_y, n_z), with u the
// particle velocity along n_x. Moments <...> are taken over the normalized
// Maxwellian (density factored out) unless stated otherwise.

#include "hgks/gas.hpp"
#include "hgks/types.hpp"

#include <array>
#include <optional>

namespace hgks::kinetic {

struct MaxwellianParams {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double lambda = 0.5;  ///< inverse temperature, rho / (2 p)
};

/// Throws StateError (carrying `cell`) for non-positive density or internal energy.
MaxwellianParams maxwellian_from_conserved(const Vec5& q, int cell = -1);
Vec5 conserved_from_maxwellian(const MaxwellianParams& g);

inline constexpr int kMomentCount = 7;  // u^0 .. u^6

enum class Half { full, positive, negative };

struct MomentTable {
  std::array<double, kMomentCount> full{};
  std::array<double, kMomentCount> pos{};
  std::array<double, kMomentCount> neg{};
  std::array<double, kMomentCount> v{};
  std::array<double, kMomentCount> w{};
  double xi2 = 0.0;
  double xi4 = 0.0;

  const std::array<double, kMomentCount>& u(Half h) const {
    return h == Half::full ? full : (h == Half::positive ? pos : neg);
  }
};

/// Full, half-space and internal-energy moments. Throws StateError if lambda <= 0.
MomentTable moments(const MaxwellianParams& g, bool with_half = true);

/// <u^a v^b w^c psi>, psi = (1, u, v, w, (u^2+v^2+w^2+xi^2)/2).
Vec5 moment_uvw(const MomentTable& m, Half h, int a, int b, int c);

/// Coefficients of a linear function of psi: s . psi.
using MicroSlope = Vec5;

/// <(s . psi) u^a v^b w^c psi>.
Vec5 moment_slope_uvw(const MomentTable& m, Half h, const MicroSlope& s, int a, int b, int c);

/// <(s1 u + s2 v + s3 w) u^a v^b w^c psi> for the three directional slopes.
Vec5 moment_transport(const MomentTable& m, Half h, const std::array<MicroSlope, 3>& s, int a,
                      int b, int c);

/// rho <psi psi^T>: the matrix relating a micro-slope to the macroscopic derivative.
Mat5 moment_matrix(const MaxwellianParams& g);

/// Solves rho <psi psi^T> s = dq analytically, dq being a derivative of Q.
MicroSlope micro_slope(const MaxwellianParams& g, const Vec5& dq);

/// Time micro-slope A from the compatibility closure <s1 u + s2 v + s3 w + A> = 0.
MicroSlope time_slope(const MaxwellianParams& g, const MomentTable& m,
                      const std::array<MicroSlope, 3>& s);

/// One reconstructed side of a quadrature point, in the face local frame.
struct SideData {
  Vec5 q = Vec5::Zero();
  std::array<Vec5, 3> dq{Vec5::Zero(), Vec5::Zero(), Vec5::Zero()};  ///< d/dn_x, d/dn_y, d/dn_z
};

/// Time averages of the interface flux over [0, dt] and [0, dt/2].
struct InterfaceFlux {
  Vec5 full = Vec5::Zero();
  Vec5 half = Vec5::Zero();

  /// F(0) and dF/dt from the linear-in-time fit through both averages.
  Vec5 instantaneous() const { return 2.0 * half - full; }
  Vec5 rate(double dt) const { return 4.0 * (full - half) / dt; }
};

/// The second-order interface distribution built from two one-sided reconstructions.
class InterfaceDistribution {
 public:
  /// Empty if either side is not a valid thermodynamic state.
  static std::optional<InterfaceDistribution> build(const SideData& left, const SideData& right);

  /// Equilibrium state from the compatibility condition.
  const Vec5& q0() const { return q0_; }
  const MaxwellianParams& g0() const { return g0_; }
  const MaxwellianParams& g_left() const { return gl_; }
  const MaxwellianParams& g_right() const { return gr_; }

  InterfaceFlux flux(double tau, double dt) const;
  /// Integral of the flux over [0, dt] (not divided by dt).
  Vec5 flux_integral(double tau, double dt) const;
  /// Moments of the distribution at time t: Q(x_G, t).
  Vec5 point_value(double tau, double t) const;

 private:
  void prepare_sides() const;
  void prepare_flux_moments() const;

  MaxwellianParams gl_, gr_, g0_;
  MomentTable ml_, mr_, m0_;
  std::array<Vec5, 3> dql_{}, dqr_{};
  std::array<MicroSlope, 3> a0_{};
  MicroSlope A0_ = MicroSlope::Zero();
  Vec5 q0_ = Vec5::Zero();
  // <u psi>, <u A psi> and <A psi> of g0.
  std::array<Vec5, 3> e0_{};

  // One-sided slopes, only needed when tau > 0.
  mutable bool sides_ready_ = false;
  mutable std::array<MicroSlope, 3> al_{}, ar_{};
  mutable MicroSlope Al_ = MicroSlope::Zero(), Ar_ = MicroSlope::Zero();

  // <u psi>, <u (a.u) psi>, <u A psi> for g0 (full) and g_l (u>0), g_r (u<0).
  mutable bool flux_ready_ = false;
  mutable std::array<Vec5, 3> f0_{}, fl_{}, fr_{};
};

/// Convenience wrappers over InterfaceDistribution.
std::optional<InterfaceFlux> interface_flux(const SideData& left, const SideData& right, double tau,
                                            double dt);
std::optional<Vec5> interface_point_value(const SideData& left, const SideData& right, double tau,
                                          double t);

struct CollisionModel {
  enum class Kind { zero, inviscid, viscous };
  Kind kind = Kind::inviscid;
  double mu = 0.0;
  double eps = 0.05;
  double c = 2.5;
  bool operator==(const CollisionModel&) const = default;
};

/// Collision time from the left/right pressures, the interface pressure and the
/// flux-averaging step dt_s.
double collision_time(const CollisionModel& model, double p_left, double p_right,
                      double p_interface, double dt_s);

}  // namespace hgks::kinetic
