#include "hgks/implicit.hpp"

#include "hgks/boundary.hpp"
#include "hgks/gas.hpp"
#include "hgks/parallel.hpp"

#include <cmath>

namespace hgks {

std::string to_string(RadiusMode m) { return m == RadiusMode::average ? "average" : "max_side"; }

RadiusMode radius_mode_from_string(const std::string& s) {
  if (s == "average") return RadiusMode::average;
  if (s == "max_side") return RadiusMode::max_side;
  throw ConfigError("unknown spectral radius mode '" + s + "'");
}

double spectral_radius(const Vec5& ql, const Vec5& qr, const Vec3& n, RadiusMode mode) {
  auto one = [&](const Vec5& q) { return std::abs(velocity(q).dot(n)) + sound_speed(q); };
  if (mode == RadiusMode::max_side) return std::max(one(ql), one(qr));
  return one(0.5 * (ql + qr));
}

IncrementSystem::IncrementSystem(const Mesh& mesh, const State& q, double alpha, double sigma,
                                 RadiusMode mode)
    : mesh_(&mesh), q_(&q), alpha_(alpha), sigma_(sigma) {
  const int nf = mesh.n_faces();
  lambda_.resize(nf);
  parallel_for(nf, [&](int fi) {
    const Face& f = mesh.face(fi);
    const Vec5& ql = q[f.left];
    const Vec5 qr = f.right >= 0 ? q[f.right] : ghost_state(mesh.boundary(f), f.normal, ql);
    lambda_[fi] = spectral_radius(ql, qr, f.normal, mode);
  });
  diag_.resize(mesh.n_cells());
  parallel_for(mesh.n_cells(), [&](int i) {
    double s = 0.0;
    for (const auto& nb : mesh.neighbors(i)) s += lambda_[nb.face] * mesh.face(nb.face).area;
    diag_[i] = alpha_ + sigma_ / (2.0 * mesh.cell(i).volume) * s;
  });
}

Vec5 IncrementSystem::coupling(int i, const Neighbor& nb, const Vec5& dqj, bool matrix_free) const {
  if (nb.cell < 0) return Vec5::Zero();
  const Face& f = mesh_->face(nb.face);
  const Vec3 n = nb.sign * f.normal;
  const Vec5& qj = (*q_)[nb.cell];
  const Vec5 dt = matrix_free ? Vec5(euler_flux(qj + dqj, n) - euler_flux(qj, n))
                              : Vec5(euler_jacobian(qj, n) * dqj);
  return sigma_ / (2.0 * mesh_->cell(i).volume) * f.area * (dt - lambda_[nb.face] * dqj);
}

void IncrementSystem::assemble_blocks() {
  const Mesh& mesh = *mesh_;
  const State& q = *q_;
  jac_left_.resize(mesh.n_faces());
  jac_right_.resize(mesh.n_faces());
  parallel_for(mesh.n_faces(), [&](int fi) {
    const Face& f = mesh.face(fi);
    jac_left_[fi] = euler_jacobian(q[f.left], f.normal);
    jac_right_[fi] = f.right >= 0 ? euler_jacobian(q[f.right], f.normal) : Mat5(Mat5::Zero());
  });
  block_diag_.resize(mesh.n_cells());
  block_diag_inv_.resize(mesh.n_cells());
  parallel_for(mesh.n_cells(), [&](int i) {
    Mat5 s = Mat5::Zero();
    for (const auto& nb : mesh.neighbors(i)) {
      const Face& f = mesh.face(nb.face);
      const Mat5& ji = nb.sign > 0 ? jac_left_[nb.face] : jac_right_[nb.face];
      s += f.area * (nb.sign * ji + lambda_[nb.face] * Mat5::Identity());
    }
    block_diag_[i] = alpha_ * Mat5::Identity() + sigma_ / (2.0 * mesh.cell(i).volume) * s;
    block_diag_inv_[i] = block_diag_[i].inverse();
  });
}

Vec5 IncrementSystem::offdiag_block(int i, const Neighbor& nb, const Vec5& x) const {
  if (nb.cell < 0) return Vec5::Zero();
  const Face& f = mesh_->face(nb.face);
  const Mat5& jj = nb.sign > 0 ? jac_right_[nb.face] : jac_left_[nb.face];
  return sigma_ / (2.0 * mesh_->cell(i).volume) * f.area *
         (nb.sign * (jj * x) - lambda_[nb.face] * x);
}

void IncrementSystem::apply(const State& x, State& y) const {
  if (block_diag_.empty()) throw SolverError("increment blocks not assembled");
  y.resize(x.size());
  parallel_for(mesh_->n_cells(), [&](int i) {
    Vec5 s = block_diag_[i] * x[i];
    for (const auto& nb : mesh_->neighbors(i))
      if (nb.cell >= 0) s += offdiag_block(i, nb, x[nb.cell]);
    y[i] = s;
  });
}

void IncrementSystem::jacobi_sweep(const State& r, const State& z, State& out) const {
  out.resize(r.size());
  parallel_for(mesh_->n_cells(), [&](int i) {
    Vec5 s = r[i];
    for (const auto& nb : mesh_->neighbors(i))
      if (nb.cell >= 0) s -= offdiag_block(i, nb, z[nb.cell]);
    out[i] = block_diag_inv_[i] * s;
  });
}

void lusgs_solve(const IncrementSystem& sys, const State& rhs, const LusgsOptions& options,
                 State& dq) {
  const Mesh& mesh = sys.mesh();
  const int n = mesh.n_cells();
  dq.assign(n, Vec5::Zero());
  auto relax = [&](int i) {
    Vec5 s = rhs[i];
    for (const auto& nb : mesh.neighbors(i))
      if (nb.cell >= 0) s -= sys.coupling(i, nb, dq[nb.cell], options.matrix_free);
    dq[i] = s / sys.diagonal(i);
    if (!dq[i].allFinite())
      throw SolverError("non-finite increment in cell " + std::to_string(i));
  };
  for (int sweep = 0; sweep < options.sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) relax(i);
    for (int i = n - 1; i >= 0; --i) relax(i);
  }
}

namespace {

double dot(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

void axpy(double a, const State& x, State& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, State& x) {
  for (auto& v : x) v *= a;
}

}  // namespace

GmresReport gmres_solve(const IncrementSystem& sys, const State& rhs, const KrylovConfig& config,
                        State& dq) {
  if (config.dim < 1) throw ConfigError("Krylov dimension must be at least 1");
  GmresReport report;
  const std::size_t n = rhs.size();
  dq.assign(n, Vec5::Zero());
  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0.0) return report;

  auto precondition = [&](const State& r, State& z) {
    State tmp;
    sys.jacobi_sweep(r, State(n, Vec5::Zero()), z);
    for (int s = 1; s < config.jacobi_sweeps; ++s) {
      sys.jacobi_sweep(r, z, tmp);
      z.swap(tmp);
    }
  };

  const int m = config.dim;
  State r, w;
  for (int cycle = 0; cycle < std::max(1, config.restarts); ++cycle) {
    sys.apply(dq, w);
    r = rhs;
    axpy(-1.0, w, r);
    const double beta = std::sqrt(dot(r, r));
    report.residual = beta / bnorm;
    if (report.residual <= config.tol) break;

    std::vector<State> v(1, r), z;
    scale(1.0 / beta, v[0]);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
    g[0] = beta;
    int k = 0;
    for (int j = 0; j < m; ++j) {
      z.emplace_back();
      precondition(v[j], z[j]);
      sys.apply(z[j], w);
      for (int i = 0; i <= j; ++i) {
        h(i, j) = dot(w, v[i]);
        axpy(-h(i, j), v[i], w);
      }
      h(j + 1, j) = std::sqrt(dot(w, w));
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const double hn = h(j + 1, j);
      const double rho = std::hypot(h(j, j), hn);
      cs[j] = h(j, j) / rho;
      sn[j] = hn / rho;
      h(j, j) = rho;
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] *= cs[j];
      k = j + 1;
      ++report.iterations;
      report.residual = std::abs(g[j + 1]) / bnorm;
      report.history.push_back(report.residual);
      if (hn <= 1e-14 * beta) {
        report.breakdown = true;
        break;
      }
      if (report.residual <= config.tol) break;
      v.push_back(w);
      scale(1.0 / hn, v.back());
    }
    const Eigen::VectorXd y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int i = 0; i < k; ++i) axpy(y[i], z[i], dq);
    if (report.breakdown || report.residual <= config.tol) break;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!dq[i].allFinite()) throw SolverError("non-finite increment in cell " + std::to_string(i));
  return report;
}

}  // namespace hgks
