#include "hgks/kinetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hgks;
using namespace hgks::kinetic;

namespace {

double gauss_1d(double x, double u, double lambda) {
  return std::sqrt(lambda / M_PI) * std::exp(-lambda * (x - u) * (x - u));
}

double half_moment(int k, double u, double lambda, bool positive) {
  const double span = 15.0 / std::sqrt(lambda);
  auto f = [&](double x) { return std::pow(x, k) * gauss_1d(x, u, lambda); };
  if (positive) {
    const double hi = std::max(0.0, u) + span;
    if (u > 0.0) return oracle::integrate(f, 0.0, u) + oracle::integrate(f, u, hi);
    return oracle::integrate(f, 0.0, hi);
  }
  const double lo = std::min(0.0, u) - span;
  if (u < 0.0) return oracle::integrate(f, lo, u) + oracle::integrate(f, u, 0.0);
  return oracle::integrate(f, lo, 0.0);
}

// rho <u psi> restricted to one half of velocity space, by 1-D quadrature in u.
Vec5 half_flux(const MaxwellianParams& g, bool positive) {
  const double m0 = half_moment(0, g.u, g.lambda, positive);
  const double m1 = half_moment(1, g.u, g.lambda, positive);
  const double m2 = half_moment(2, g.u, g.lambda, positive);
  const double m3 = half_moment(3, g.u, g.lambda, positive);
  (void)m0;
  const double var = 1.0 / (2.0 * g.lambda);
  const double v2 = g.v * g.v + var, w2 = g.w * g.w + var, xi2 = kInternalDof * var;
  Vec5 f;
  f << m1, m2, m1 * g.v, m1 * g.w, 0.5 * (m3 + m1 * (v2 + w2 + xi2));
  return g.rho * f;
}

Vec5 half_density(const MaxwellianParams& g, bool positive) {
  const double m0 = half_moment(0, g.u, g.lambda, positive);
  const double m1 = half_moment(1, g.u, g.lambda, positive);
  const double m2 = half_moment(2, g.u, g.lambda, positive);
  const double var = 1.0 / (2.0 * g.lambda);
  const double v2 = g.v * g.v + var, w2 = g.w * g.w + var, xi2 = kInternalDof * var;
  Vec5 f;
  f << m0, m1, m0 * g.v, m0 * g.w, 0.5 * (m2 + m0 * (v2 + w2 + xi2));
  return g.rho * f;
}

// rho <psi psi^T> by tensor Gauss-Hermite quadrature over (u, v, w, xi_1, xi_2).
Mat5 moment_matrix_quadrature(const MaxwellianParams& g) {
  const auto [x, w] = oracle::gauss_hermite(6);
  const double s = 1.0 / std::sqrt(g.lambda);
  const double norm = std::pow(M_PI, -2.5);
  Mat5 a = Mat5::Zero();
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            const double u = g.u + s * x[i], v = g.v + s * x[j], ww = g.w + s * x[k];
            const double xi2 = s * s * (x[l] * x[l] + x[m] * x[m]);
            Vec5 psi;
            psi << 1.0, u, v, ww, 0.5 * (u * u + v * v + ww * ww + xi2);
            a += norm * w[i] * w[j] * w[k] * w[l] * w[m] * psi * psi.transpose();
          }
  return g.rho * a;
}

SideData side(const Vec5& q) {
  SideData s;
  s.q = q;
  return s;
}

Vec5 random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> rho(0.2, 3.0), vel(-2.0, 2.0), p(0.2, 3.0);
  return to_conserved(rho(rng), vel(rng), vel(rng), vel(rng), p(rng));
}

}  // namespace

TEST(Maxwellian, UnitPressureStateHasLambdaHalf) {
  const auto g = maxwellian_from_conserved(Vec5(1, 0, 0, 0, 2.5));
  EXPECT_NEAR(g.lambda, 0.5, 1e-15);
}

TEST(Maxwellian, HighPressureLeftState) {
  const Vec5 q = to_conserved(120.0, 0, 0, 0, 120.0 / kGamma);
  const auto g = maxwellian_from_conserved(q);
  EXPECT_NEAR(g.lambda, 120.0 / (2.0 * 120.0 / kGamma), 1e-13);
}

TEST(Maxwellian, RoundTrip) {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Vec5 q = random_state(rng);
    EXPECT_LT((conserved_from_maxwellian(maxwellian_from_conserved(q)) - q).norm(), 1e-13);
  }
}

TEST(Maxwellian, RejectsNegativeInternalEnergy) {
  try {
    maxwellian_from_conserved(Vec5(1.0, 2.0, 0.0, 0.0, 1.0), 42);
    FAIL();
  } catch (const StateError& e) {
    EXPECT_EQ(e.cell(), 42);
  }
}

TEST(Moments, SymmetricCase) {
  const auto m = moments({1.0, 0.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(m.full[2], 0.5, 1e-15);
  EXPECT_NEAR(m.pos[0], 0.5, 1e-15);
}

TEST(Moments, ShiftedSecondMoment) {
  const auto m = moments({1.0, 1.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(m.full[2], 1.5, 1e-14);
}

TEST(Moments, MatchQuadrature) {
  for (double u : {-1.7, -0.3, 0.0, 0.8, 2.5}) {
    for (double lambda : {0.3, 1.0, 4.2}) {
      const auto m = moments({1.0, u, 0.0, 0.0, lambda});
      for (int k = 0; k < kMomentCount; ++k) {
        const double pos = half_moment(k, u, lambda, true);
        const double neg = half_moment(k, u, lambda, false);
        const double scale = 1.0 + std::abs(pos) + std::abs(neg);
        EXPECT_NEAR(m.pos[k], pos, 1e-10 * scale) << "k=" << k << " u=" << u;
        EXPECT_NEAR(m.neg[k], neg, 1e-10 * scale) << "k=" << k << " u=" << u;
        EXPECT_NEAR(m.full[k], pos + neg, 1e-10 * scale);
      }
    }
  }
}

TEST(Moments, HalvesSumToFull) {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto g = maxwellian_from_conserved(random_state(rng));
    const auto m = moments(g);
    for (int k = 0; k < kMomentCount; ++k)
      EXPECT_NEAR(m.pos[k] + m.neg[k], m.full[k], 1e-12 * (1.0 + std::abs(m.full[k])));
  }
}

TEST(Moments, RejectNonPositiveLambda) {
  EXPECT_THROW(moments({1.0, 0.0, 0.0, 0.0, 0.0}), StateError);
}

TEST(MicroSlope, ZeroRhs) {
  const auto s = micro_slope({1.3, 0.2, -0.1, 0.4, 0.7}, Vec5::Zero());
  EXPECT_EQ(s.norm(), 0.0);
}

TEST(MicroSlope, MomentMatrixMatchesQuadrature) {
  const MaxwellianParams g{1.3, 0.4, -0.7, 0.2, 0.8};
  const Mat5 a = moment_matrix(g);
  const Mat5 b = moment_matrix_quadrature(g);
  EXPECT_LT((a - b).norm(), 1e-11 * b.norm());
}

TEST(MicroSlope, MatchesDenseSolve) {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    const auto g = maxwellian_from_conserved(random_state(rng));
    Vec5 dq;
    for (int k = 0; k < 5; ++k) dq[k] = nd(rng);
    const Mat5 a = moment_matrix_quadrature(g);
    const Vec5 ref = a.ldlt().solve(dq);
    const Vec5 s = micro_slope(g, dq);
    EXPECT_LT((s - ref).norm(), 1e-9 * (1.0 + ref.norm()));
    EXPECT_LT((a * s - dq).norm(), 1e-11 * (1.0 + dq.norm()));
  }
}

TEST(MicroSlope, LinearDensityConstantPressure) {
  // rho = 1 + x, p = 1, at rest: dQ/dx = (1, 0, 0, 0, 0).
  const MaxwellianParams g = maxwellian_from_conserved(to_conserved(1.0, 0, 0, 0, 1.0));
  const Vec5 dq(1.0, 0.0, 0.0, 0.0, 0.0);
  const Vec5 ref = moment_matrix_quadrature(g).ldlt().solve(dq);
  EXPECT_LT((micro_slope(g, dq) - ref).norm(), 1e-11);
}

TEST(MicroSlope, CompatibilityClosure) {
  const MaxwellianParams g{0.9, 0.3, 0.5, -0.2, 1.1};
  const auto m = moments(g);
  const std::array<MicroSlope, 3> a{Vec5(0.1, -0.3, 0.2, 0.05, 0.4),
                                    Vec5(-0.2, 0.1, 0.0, 0.3, -0.1),
                                    Vec5(0.05, 0.0, -0.1, 0.2, 0.3)};
  const MicroSlope big_a = time_slope(g, m, a);
  const Vec5 r = moment_transport(m, Half::full, a, 0, 0, 0) +
                 moment_slope_uvw(m, Half::full, big_a, 0, 0, 0);
  EXPECT_LT(r.norm(), 1e-12);
}

TEST(InterfaceFlux, StaticStatePressureFlux) {
  const SideData s = side(Vec5(1, 0, 0, 0, 2.5));
  const auto f = interface_flux(s, s, 0.0, 0.01);
  ASSERT_TRUE(f);
  EXPECT_LT((f->full - Vec5(0, 1, 0, 0, 0)).norm(), 1e-12);
  EXPECT_LT((f->half - Vec5(0, 1, 0, 0, 0)).norm(), 1e-12);
}

TEST(InterfaceFlux, UniformStateGivesEulerFlux) {
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    const SideData s = side(random_state(rng));
    const Vec5 ref = euler_flux(s.q, Vec3::UnitX());
    for (double tau : {0.0, 1e-3, 0.1}) {
      const auto f = interface_flux(s, s, tau, 0.01);
      ASSERT_TRUE(f);
      EXPECT_LT((f->full - ref).norm(), 1e-12 * (1.0 + ref.norm()));
    }
  }
}

TEST(InterfaceFlux, CollisionlessLimitIsEulerTaylorExpansion) {
  // With tau = 0 and continuous data the distribution is g0 (1 + A t): the flux
  // average is F(Q0) + dt/2 * J_x (-sum_k J_k dQ/dx_k).
  std::mt19937 rng(9);
  std::normal_distribution<double> nd(0.0, 0.3);
  for (int i = 0; i < 10; ++i) {
    SideData s = side(random_state(rng));
    for (auto& d : s.dq)
      for (int k = 0; k < 5; ++k) d[k] = nd(rng);
    const double dt = 0.02;
    const auto f = interface_flux(s, s, 0.0, dt);
    ASSERT_TRUE(f);
    Vec5 qt = Vec5::Zero();
    for (int k = 0; k < 3; ++k) qt -= euler_jacobian(s.q, Vec3::Unit(k)) * s.dq[k];
    const Vec5 ft = euler_jacobian(s.q, Vec3::UnitX()) * qt;
    const Vec5 ref = euler_flux(s.q, Vec3::UnitX()) + 0.5 * dt * ft;
    EXPECT_LT((f->full - ref).norm(), 1e-11 * (1.0 + ref.norm()));
    EXPECT_LT((f->rate(dt) - ft).norm(), 1e-8 * (1.0 + ft.norm()));
  }
}

TEST(InterfaceFlux, FreeStreamingLimit) {
  const SideData l = side(to_conserved(1.0, 3.0, 0.2, -0.1, 1.0));
  const SideData r = side(to_conserved(0.5, 2.5, 0.0, 0.3, 0.8));
  const double dt = 1e-3;
  const auto f = interface_flux(l, r, 1e6 * dt, dt);
  ASSERT_TRUE(f);
  const Vec5 ref = half_flux(maxwellian_from_conserved(l.q), true) +
                   half_flux(maxwellian_from_conserved(r.q), false);
  EXPECT_LT((f->full - ref).norm(), 1e-6 * ref.norm());
}

TEST(InterfaceFlux, InvalidSideIsReported) {
  const SideData good = side(Vec5(1, 0, 0, 0, 2.5));
  const SideData bad = side(Vec5(-1, 0, 0, 0, 2.5));
  EXPECT_FALSE(interface_flux(good, bad, 0.0, 0.01));
}

TEST(PointValue, IdenticalSidesAtTimeZero) {
  SideData s = side(to_conserved(1.2, 0.3, -0.4, 0.1, 0.9));
  s.dq[0] = Vec5(0.1, 0.2, -0.1, 0.0, 0.3);
  const auto d = InterfaceDistribution::build(s, s);
  ASSERT_TRUE(d);
  EXPECT_LT((d->point_value(0.0, 0.0) - d->q0()).norm(), 1e-14);
  EXPECT_LT((d->q0() - s.q).norm(), 1e-12);
}

TEST(PointValue, SodMembraneDensityBetweenStates) {
  const SideData l = side(to_conserved(1.0, 0, 0, 0, 1.0));
  const SideData r = side(to_conserved(0.125, 0, 0, 0, 0.1));
  const auto q = interface_point_value(l, r, 1e-3, 1e-4);
  ASSERT_TRUE(q);
  EXPECT_GT((*q)[0], 0.125);
  EXPECT_LT((*q)[0], 1.0);
}

TEST(PointValue, LargeTauIsUpwindAverage) {
  const SideData l = side(to_conserved(1.0, 0.4, 0, 0, 1.0));
  const SideData r = side(to_conserved(0.125, -0.2, 0.1, 0, 0.1));
  const auto q = interface_point_value(l, r, 1e8, 1e-4);
  ASSERT_TRUE(q);
  const Vec5 ref = half_density(maxwellian_from_conserved(l.q), true) +
                   half_density(maxwellian_from_conserved(r.q), false);
  EXPECT_LT((*q - ref).norm(), 1e-9);
}

TEST(CollisionTime, Inviscid) {
  CollisionModel m;
  EXPECT_NEAR(collision_time(m, 1.0, 1.0, 1.0, 0.01), 5e-4, 1e-18);
  EXPECT_NEAR(collision_time(m, 1.0, 0.5, 0.75, 0.01), 0.0005 + 2.5 / 3.0 * 0.01, 1e-15);
}

TEST(CollisionTime, ViscousSmoothLimit) {
  CollisionModel m{CollisionModel::Kind::viscous, 1e-3};
  EXPECT_NEAR(collision_time(m, 0.8, 0.8, 0.8, 0.01), 1e-3 / 0.8, 1e-16);
}

TEST(CollisionTime, ZeroModel) {
  CollisionModel m{CollisionModel::Kind::zero};
  EXPECT_EQ(collision_time(m, 1.0, 0.1, 0.5, 0.01), 0.0);
}

TEST(Gas, EulerJacobianMatchesFiniteDifference) {
  std::mt19937 rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vec5 q = random_state(rng);
    const Vec3 n = Vec3(0.3, -0.5, 0.8).normalized();
    const Mat5 j = euler_jacobian(q, n);
    for (int c = 0; c < 5; ++c) {
      const double h = 1e-6 * (1.0 + std::abs(q[c]));
      Vec5 qp = q, qm = q;
      qp[c] += h;
      qm[c] -= h;
      const Vec5 fd = (euler_flux(qp, n) - euler_flux(qm, n)) / (2.0 * h);
      EXPECT_LT((j.col(c) - fd).norm(), 1e-7 * (1.0 + fd.norm()));
    }
  }
}

TEST(Gas, StaticStateFlux) {
  const Vec3 n = Vec3(1.0, 2.0, -2.0).normalized();
  const Vec5 f = euler_flux(Vec5(1, 0, 0, 0, 2.5), n);
  EXPECT_LT((f - Vec5(0, n.x(), n.y(), n.z(), 0)).norm(), 1e-15);
}
