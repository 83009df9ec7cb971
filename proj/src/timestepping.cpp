#include "hgks/timestepping.hpp"

#include <cmath>

namespace hgks {

Vec5 rms(const State& r) {
  Vec5 s = Vec5::Zero();
  for (const auto& v : r) s += v.cwiseAbs2();
  if (!r.empty()) s /= static_cast<double>(r.size());
  return s.cwiseSqrt();
}

void stage1_rhs(const State& qn, const State& qm, const State& ln, const State& lm, double dt,
                State& rhs) {
  rhs.resize(qn.size());
  for (std::size_t i = 0; i < qn.size(); ++i)
    rhs[i] = (qn[i] - qm[i]) / (0.5 * dt) + 0.5 * (ln[i] + lm[i]);
}

void stage2_rhs(const State& qn, const State& qm, const State& ln, const State& ls,
                const State& lm, double dt, State& rhs) {
  rhs.resize(qn.size());
  for (std::size_t i = 0; i < qn.size(); ++i)
    rhs[i] = (qn[i] - qm[i]) / dt + (ln[i] + 4.0 * ls[i] + lm[i]) / 6.0;
}

ImplicitStepInfo s2o3_step(ImplicitSystem& sys, State& q, double dt, double dt_a,
                           const TimeControls& controls, const ResidualSink& sink) {
  ImplicitStepInfo info;
  const State qn = q;
  State ln, ls, lm, rhs, dq;
  const double inv_a = std::isfinite(dt_a) ? 1.0 / dt_a : 0.0;

  for (int stage = 1; stage <= 2; ++stage) {
    const double alpha = inv_a + (stage == 1 ? 2.0 / dt : 1.0 / dt);
    const double sigma = stage == 1 ? 0.5 : 1.0 / 6.0;
    double first = 0.0;
    double last = 0.0;
    for (int m = 0; m < controls.k_a; ++m) {
      sys.residual(q, lm);
      ++info.evaluations;
      if (stage == 1 && m == 0) ln = lm;
      if (stage == 2 && m == 0) ls = lm;
      if (stage == 1)
        stage1_rhs(qn, q, ln, lm, dt, rhs);
      else
        stage2_rhs(qn, q, ln, ls, lm, dt, rhs);
      const Vec5 r = rms(rhs);
      if (sink) sink({stage, m, r});
      if (m == 0) first = r.norm();
      last = r.norm();
      if (controls.pseudo_tol > 0.0 && last < controls.pseudo_tol) break;
      sys.solve(q, alpha, sigma, rhs, dq);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += dq[i];
      sys.check(q);
      sys.accept();
    }
    if (controls.k_a > 1 && last > first) info.diverging = true;
  }
  return info;
}

void s2o4_step(ExplicitSystem& sys, State& q, double dt, const TimeControls& controls) {
  State l, lt, ls, lts;
  sys.rates(q, dt, l, lt);
  State qs(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    qs[i] = q[i] + 0.5 * dt * l[i] + dt * dt / 8.0 * lt[i];
  sys.check(qs);
  sys.accept();
  sys.rates(qs, dt, ls, lts);
  const double r0 = rms(l).norm();
  const double r1 = rms(ls).norm();
  if (r0 > 0.0 && r1 > controls.divergence * r0)
    throw SolverError("explicit step diverging: residual grew by " + std::to_string(r1 / r0));
  State next(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    next[i] = q[i] + dt * l[i] + dt * dt / 6.0 * (lt[i] + 2.0 * lts[i]);
  sys.check(next);
  q = std::move(next);
  sys.accept();
}

}  // namespace hgks
