#include "hgks/kinetic.hpp"

#include <cmath>
#include <numbers>

namespace hgks::kinetic {

namespace {

constexpr double kK = kInternalDof;

// <u^a v^b w^c xi^(2k) psi> assembled from the separable one-dimensional moments.
Vec5 raw_moment(const MomentTable& m, Half h, int a, int b, int c, int k) {
  const auto& mu = m.u(h);
  const double x[3] = {1.0, m.xi2, m.xi4};
  const double base = mu[a] * m.v[b] * m.w[c];
  Vec5 r;
  r[0] = base * x[k];
  r[1] = mu[a + 1] * m.v[b] * m.w[c] * x[k];
  r[2] = mu[a] * m.v[b + 1] * m.w[c] * x[k];
  r[3] = mu[a] * m.v[b] * m.w[c + 1] * x[k];
  r[4] = 0.5 * (mu[a + 2] * m.v[b] * m.w[c] * x[k] + mu[a] * m.v[b + 2] * m.w[c] * x[k] +
                mu[a] * m.v[b] * m.w[c + 2] * x[k] + base * x[k + 1]);
  return r;
}

void full_recursion(std::array<double, kMomentCount>& out, double u, double lambda) {
  for (int k = 0; k + 2 < kMomentCount; ++k)
    out[k + 2] = u * out[k + 1] + (k + 1) / (2.0 * lambda) * out[k];
}

// Normalized solve of <psi psi^T> s = b.
MicroSlope solve_normalized(const MaxwellianParams& g, const Vec5& b) {
  const double l = g.lambda;
  const double r1 = b[1] - g.u * b[0];
  const double r2 = b[2] - g.v * b[0];
  const double r3 = b[3] - g.w * b[0];
  const double u2 = g.u * g.u + g.v * g.v + g.w * g.w;
  const double r4 = 2.0 * b[4] - (u2 + (kK + 3.0) / (2.0 * l)) * b[0];
  MicroSlope s;
  s[4] = 4.0 * l * l / (kK + 3.0) * (r4 - 2.0 * g.u * r1 - 2.0 * g.v * r2 - 2.0 * g.w * r3);
  s[3] = 2.0 * l * r3 - g.w * s[4];
  s[2] = 2.0 * l * r2 - g.v * s[4];
  s[1] = 2.0 * l * r1 - g.u * s[4];
  s[0] = b[0] - g.u * s[1] - g.v * s[2] - g.w * s[3] -
         0.5 * s[4] * (u2 + (kK + 3.0) / (2.0 * l));
  return s;
}

}  // namespace

MaxwellianParams maxwellian_from_conserved(const Vec5& q, int cell) {
  if (!q.allFinite() || !admissible(q)) throw StateError("non-physical state", cell);
  const double p = pressure(q);
  return {q[0], q[1] / q[0], q[2] / q[0], q[3] / q[0], q[0] / (2.0 * p)};
}

Vec5 conserved_from_maxwellian(const MaxwellianParams& g) {
  return to_conserved(g.rho, g.u, g.v, g.w, g.rho / (2.0 * g.lambda));
}

MomentTable moments(const MaxwellianParams& g, bool with_half) {
  if (!(g.lambda > 0.0) || !std::isfinite(g.lambda)) throw StateError("non-positive temperature");
  MomentTable m;
  m.full[0] = 1.0;
  m.full[1] = g.u;
  full_recursion(m.full, g.u, g.lambda);
  m.v[0] = 1.0;
  m.v[1] = g.v;
  full_recursion(m.v, g.v, g.lambda);
  m.w[0] = 1.0;
  m.w[1] = g.w;
  full_recursion(m.w, g.w, g.lambda);
  m.xi2 = kK / (2.0 * g.lambda);
  m.xi4 = (kK * kK + 2.0 * kK) / (4.0 * g.lambda * g.lambda);
  if (with_half) {
    const double sl = std::sqrt(g.lambda);
    const double tail = 0.5 * std::exp(-g.lambda * g.u * g.u) / std::sqrt(std::numbers::pi * g.lambda);
    m.pos[0] = 0.5 * std::erfc(-sl * g.u);
    m.pos[1] = g.u * m.pos[0] + tail;
    full_recursion(m.pos, g.u, g.lambda);
    m.neg[0] = 0.5 * std::erfc(sl * g.u);
    m.neg[1] = g.u * m.neg[0] - tail;
    full_recursion(m.neg, g.u, g.lambda);
  }
  return m;
}

Vec5 moment_uvw(const MomentTable& m, Half h, int a, int b, int c) {
  return raw_moment(m, h, a, b, c, 0);
}

Vec5 moment_slope_uvw(const MomentTable& m, Half h, const MicroSlope& s, int a, int b, int c) {
  Vec5 r = s[0] * raw_moment(m, h, a, b, c, 0) + s[1] * raw_moment(m, h, a + 1, b, c, 0) +
           s[2] * raw_moment(m, h, a, b + 1, c, 0) + s[3] * raw_moment(m, h, a, b, c + 1, 0);
  r += 0.5 * s[4] *
       (raw_moment(m, h, a + 2, b, c, 0) + raw_moment(m, h, a, b + 2, c, 0) +
        raw_moment(m, h, a, b, c + 2, 0) + raw_moment(m, h, a, b, c, 1));
  return r;
}

Vec5 moment_transport(const MomentTable& m, Half h, const std::array<MicroSlope, 3>& s, int a,
                      int b, int c) {
  return moment_slope_uvw(m, h, s[0], a + 1, b, c) + moment_slope_uvw(m, h, s[1], a, b + 1, c) +
         moment_slope_uvw(m, h, s[2], a, b, c + 1);
}

Mat5 moment_matrix(const MaxwellianParams& g) {
  const MomentTable m = moments(g, false);
  Mat5 a;
  for (int j = 0; j < 5; ++j) {
    MicroSlope e = MicroSlope::Zero();
    e[j] = 1.0;
    a.col(j) = g.rho * moment_slope_uvw(m, Half::full, e, 0, 0, 0);
  }
  return a;
}

MicroSlope micro_slope(const MaxwellianParams& g, const Vec5& dq) {
  return solve_normalized(g, dq / g.rho);
}

MicroSlope time_slope(const MaxwellianParams& g, const MomentTable& m,
                      const std::array<MicroSlope, 3>& s) {
  return solve_normalized(g, -moment_transport(m, Half::full, s, 0, 0, 0));
}

std::optional<InterfaceDistribution> InterfaceDistribution::build(const SideData& left,
                                                                  const SideData& right) {
  if (!left.q.allFinite() || !right.q.allFinite() || !admissible(left.q) || !admissible(right.q))
    return std::nullopt;
  for (int k = 0; k < 3; ++k)
    if (!left.dq[k].allFinite() || !right.dq[k].allFinite()) return std::nullopt;
  InterfaceDistribution d;
  d.gl_ = maxwellian_from_conserved(left.q);
  d.gr_ = maxwellian_from_conserved(right.q);
  d.ml_ = moments(d.gl_, true);
  d.mr_ = moments(d.gr_, true);
  d.q0_ = d.gl_.rho * moment_uvw(d.ml_, Half::positive, 0, 0, 0) +
          d.gr_.rho * moment_uvw(d.mr_, Half::negative, 0, 0, 0);
  if (!admissible(d.q0_)) return std::nullopt;
  d.g0_ = maxwellian_from_conserved(d.q0_);
  d.m0_ = moments(d.g0_, false);
  for (int k = 0; k < 3; ++k) {
    d.dql_[k] = left.dq[k];
    d.dqr_[k] = right.dq[k];
    d.a0_[k] = micro_slope(d.g0_, 0.5 * (left.dq[k] + right.dq[k]));
  }
  d.A0_ = time_slope(d.g0_, d.m0_, d.a0_);
  d.e0_[0] = d.g0_.rho * moment_uvw(d.m0_, Half::full, 1, 0, 0);
  d.e0_[1] = d.g0_.rho * moment_slope_uvw(d.m0_, Half::full, d.A0_, 1, 0, 0);
  d.e0_[2] = d.g0_.rho * moment_slope_uvw(d.m0_, Half::full, d.A0_, 0, 0, 0);
  for (const auto& s : d.a0_)
    if (!s.allFinite()) return std::nullopt;
  return d;
}

void InterfaceDistribution::prepare_sides() const {
  if (sides_ready_) return;
  for (int k = 0; k < 3; ++k) {
    al_[k] = micro_slope(gl_, dql_[k]);
    ar_[k] = micro_slope(gr_, dqr_[k]);
  }
  Al_ = time_slope(gl_, ml_, al_);
  Ar_ = time_slope(gr_, mr_, ar_);
  sides_ready_ = true;
}

void InterfaceDistribution::prepare_flux_moments() const {
  if (flux_ready_) return;
  prepare_sides();
  f0_[0] = g0_.rho * moment_uvw(m0_, Half::full, 1, 0, 0);
  f0_[1] = g0_.rho * moment_transport(m0_, Half::full, a0_, 1, 0, 0);
  f0_[2] = g0_.rho * moment_slope_uvw(m0_, Half::full, A0_, 1, 0, 0);
  fl_[0] = gl_.rho * moment_uvw(ml_, Half::positive, 1, 0, 0);
  fl_[1] = gl_.rho * moment_transport(ml_, Half::positive, al_, 1, 0, 0);
  fl_[2] = gl_.rho * moment_slope_uvw(ml_, Half::positive, Al_, 1, 0, 0);
  fr_[0] = gr_.rho * moment_uvw(mr_, Half::negative, 1, 0, 0);
  fr_[1] = gr_.rho * moment_transport(mr_, Half::negative, ar_, 1, 0, 0);
  fr_[2] = gr_.rho * moment_slope_uvw(mr_, Half::negative, Ar_, 1, 0, 0);
  flux_ready_ = true;
}

Vec5 InterfaceDistribution::flux_integral(double tau, double dt) const {
  if (tau <= 0.0) {
    // tau = 0: f = g0 (1 + A t).
    return dt * e0_[0] + 0.5 * dt * dt * e0_[1];
  }
  prepare_flux_moments();
  const double e = std::exp(-dt / tau);
  const double om = -std::expm1(-dt / tau);
  const double c1 = dt - tau * om;
  const double c2 = 2.0 * tau * tau * om - tau * dt * (1.0 + e);
  const double c3 = 0.5 * dt * dt - tau * dt + tau * tau * om;
  const double e0 = tau * om;
  const double e1 = 2.0 * tau * tau * om - tau * dt * e;
  const double e2 = tau * tau * om;
  return c1 * f0_[0] + c2 * f0_[1] + c3 * f0_[2] + e0 * (fl_[0] + fr_[0]) -
         e1 * (fl_[1] + fr_[1]) - e2 * (fl_[2] + fr_[2]);
}

InterfaceFlux InterfaceDistribution::flux(double tau, double dt) const {
  return {flux_integral(tau, dt) / dt, flux_integral(tau, 0.5 * dt) / (0.5 * dt)};
}

Vec5 InterfaceDistribution::point_value(double tau, double t) const {
  const Vec5& at0 = e0_[2];
  if (tau <= 0.0) return q0_ + t * at0;
  prepare_sides();
  const double e = std::exp(-t / tau);
  const double c1 = -std::expm1(-t / tau);
  const double c2 = (t + tau) * e - tau;
  const double c3 = t - tau * c1;
  const double e1 = (t + tau) * e;
  const double e2 = tau * e;
  const Vec5 h0 = gl_.rho * moment_uvw(ml_, Half::positive, 0, 0, 0) +
                  gr_.rho * moment_uvw(mr_, Half::negative, 0, 0, 0);
  const Vec5 h1 = gl_.rho * moment_transport(ml_, Half::positive, al_, 0, 0, 0) +
                  gr_.rho * moment_transport(mr_, Half::negative, ar_, 0, 0, 0);
  const Vec5 h2 = gl_.rho * moment_slope_uvw(ml_, Half::positive, Al_, 0, 0, 0) +
                  gr_.rho * moment_slope_uvw(mr_, Half::negative, Ar_, 0, 0, 0);
  return c1 * q0_ + c2 * g0_.rho * moment_transport(m0_, Half::full, a0_, 0, 0, 0) + c3 * at0 +
         e * h0 - e1 * h1 - e2 * h2;
}

std::optional<InterfaceFlux> interface_flux(const SideData& left, const SideData& right, double tau,
                                            double dt) {
  auto d = InterfaceDistribution::build(left, right);
  if (!d) return std::nullopt;
  return d->flux(tau, dt);
}

std::optional<Vec5> interface_point_value(const SideData& left, const SideData& right, double tau,
                                          double t) {
  auto d = InterfaceDistribution::build(left, right);
  if (!d) return std::nullopt;
  return d->point_value(tau, t);
}

double collision_time(const CollisionModel& model, double p_left, double p_right,
                      double p_interface, double dt_s) {
  const double jump = model.c * std::abs(p_left - p_right) / (p_left + p_right) * dt_s;
  switch (model.kind) {
    case CollisionModel::Kind::zero:
      return 0.0;
    case CollisionModel::Kind::inviscid:
      return model.eps * dt_s + jump;
    case CollisionModel::Kind::viscous:
      return model.mu / p_interface + jump;
  }
  return 0.0;
}

}  // namespace hgks::kinetic
