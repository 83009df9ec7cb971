#include "hgks/reconstruction.hpp"

#include "hgks/boundary.hpp"
#include "hgks/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace hgks {

namespace {

using Eigen::MatrixXd;

BasisRow raw_basis(const Vec3& xi) {
  BasisRow b;
  b << xi.x(), xi.y(), xi.z(), xi.x() * xi.x(), xi.x() * xi.y(), xi.x() * xi.z(), xi.y() * xi.y(),
      xi.y() * xi.z(), xi.z() * xi.z();
  return b;
}

// Means of the raw monomials over a cell with scaled centroid d and scaled second moment s.
BasisRow mean_row(const Vec3& d, const Mat3& s) {
  BasisRow b;
  b << d.x(), d.y(), d.z(), s(0, 0) + d.x() * d.x(), s(0, 1) + d.x() * d.y(),
      s(0, 2) + d.x() * d.z(), s(1, 1) + d.y() * d.y(), s(1, 2) + d.y() * d.z(),
      s(2, 2) + d.z() * d.z();
  return b;
}

// Mean of d(phi)/d(xi_j) over a cell with scaled centroid d.
BasisRow derivative_row(int j, const Vec3& d) {
  BasisRow b = BasisRow::Zero();
  b[j] = 1.0;
  switch (j) {
    case 0:
      b[3] = 2.0 * d.x();
      b[4] = d.y();
      b[5] = d.z();
      break;
    case 1:
      b[4] = d.x();
      b[6] = 2.0 * d.y();
      b[7] = d.z();
      break;
    default:
      b[5] = d.x();
      b[7] = d.y();
      b[8] = 2.0 * d.z();
      break;
  }
  return b;
}

// Derivatives of the raw basis with respect to xi at a point: row j is d/dxi_j.
Eigen::Matrix<double, 3, kBasisSize> basis_derivatives(const Vec3& xi) {
  Eigen::Matrix<double, 3, kBasisSize> d;
  for (int j = 0; j < 3; ++j) d.row(j) = derivative_row(j, xi);
  return d;
}

MatrixXd pinv(const MatrixXd& a) {
  if (a.rows() == 0) return MatrixXd::Zero(a.cols(), 0);
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(a);
  cod.setThreshold(1e-12);
  return cod.pseudoInverse();
}

double conditioning(const MatrixXd& a) {
  if (a.rows() < a.cols()) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return s[0] > 0.0 ? s[s.size() - 1] / s[0] : 0.0;
}

// min |E a - e| subject to G a = g, as a = mg g + me e (null-space method).
void constrained_lsq(const MatrixXd& g, const MatrixXd& e, MatrixXd& mg, MatrixXd& me) {
  const long n = std::max(g.cols(), e.cols());
  if (g.rows() == 0) {
    mg = MatrixXd::Zero(n, 0);
    me = pinv(e);
    return;
  }
  Eigen::JacobiSVD<MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  long r = 0;
  for (long k = 0; k < s.size(); ++k)
    if (s[k] > 1e-12 * s[0]) ++r;
  const MatrixXd gp = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal() *
                      svd.matrixU().leftCols(r).transpose();
  if (r == n || e.rows() == 0) {
    mg = gp;
    me = MatrixXd::Zero(n, e.rows());
    return;
  }
  const MatrixXd z = svd.matrixV().rightCols(n - r);
  const MatrixXd ezp = pinv(e * z);
  mg = gp - z * ezp * e * gp;
  me = z * ezp;
}

struct MemberKey {
  int cell, ghost;
  long long sx, sy, sz;
  auto operator<=>(const MemberKey&) const = default;
};

MemberKey key_of(const StencilMember& m) {
  return {m.cell, m.ghost_face, std::llround(m.shift.x() * 1e8), std::llround(m.shift.y() * 1e8),
          std::llround(m.shift.z() * 1e8)};
}

// Face neighbors of a member cell as members (real neighbors and mirrored ghosts).
std::vector<StencilMember> face_members(const Mesh& mesh, int cell, const Vec3& shift) {
  std::vector<StencilMember> out;
  for (const auto& nb : mesh.neighbors(cell)) {
    if (nb.cell >= 0) out.push_back({nb.cell, shift + nb.shift, -1});
    else out.push_back({cell, shift, nb.face});
  }
  return out;
}

}  // namespace

std::string to_string(ReconFlavor f) { return f == ReconFlavor::weno ? "weno" : "hweno"; }

ReconFlavor recon_flavor_from_string(const std::string& s) {
  if (s == "weno") return ReconFlavor::weno;
  if (s == "hweno") return ReconFlavor::hweno;
  throw ConfigError("unknown reconstruction '" + s + "'");
}

MemberGeometry member_geometry(const Mesh& mesh, const StencilMember& m) {
  const Cell& c = mesh.cell(m.cell);
  MemberGeometry g{c.centroid + m.shift, c.second_moment, c.volume, c.h};
  if (m.ghost_face >= 0) {
    const Face& f = mesh.face(m.ghost_face);
    const Vec3 n = f.normal;
    const Vec3 xf = f.centroid + m.shift;
    g.centroid -= 2.0 * (g.centroid - xf).dot(n) * n;
    const Mat3 r = reflection(n);
    g.second_moment = r * c.second_moment * r;
  }
  return g;
}

Vec5 member_state(const Mesh& mesh, const StencilMember& m, const std::vector<Vec5>& q) {
  if (m.ghost_face < 0) return q[m.cell];
  const Face& f = mesh.face(m.ghost_face);
  return ghost_state(mesh.boundary(f), f.normal, q[m.cell]);
}

Grad5 member_gradient(const Mesh& mesh, const StencilMember& m, const std::vector<Vec5>& q,
                      const std::vector<Grad5>& g) {
  if (m.ghost_face < 0) return g[m.cell];
  const Face& f = mesh.face(m.ghost_face);
  return ghost_gradient(mesh.boundary(f), f.normal, q[m.cell], g[m.cell]);
}

std::vector<CellStencil> build_stencils(const Mesh& mesh, ReconFlavor flavor) {
  std::vector<CellStencil> out(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) {
    CellStencil& st = out[i];
    std::set<MemberKey> seen{key_of({i, Vec3::Zero(), -1})};
    auto add = [&](const StencilMember& m) {
      if (seen.insert(key_of(m)).second) st.big.push_back(m);
    };
    const auto first = face_members(mesh, i, Vec3::Zero());
    for (const auto& m : first) add(m);
    const int n_face = static_cast<int>(st.big.size());

    if (flavor == ReconFlavor::hweno) {
      for (int k = 0; k < n_face; ++k) st.subs.push_back({k});
      continue;
    }
    for (const auto& m : first)
      if (m.ghost_face < 0)
        for (const auto& mm : face_members(mesh, m.cell, m.shift)) add(mm);
    // Mirror the real part of the stencil across the cell's own boundary faces.
    const std::size_t n_big = st.big.size();
    for (const auto& b : first) {
      if (b.ghost_face < 0) continue;
      add({i, Vec3::Zero(), b.ghost_face});
      for (std::size_t k = 0; k < n_big; ++k)
        if (st.big[k].ghost_face < 0) add({st.big[k].cell, st.big[k].shift, b.ghost_face});
    }

    const Cell& home = mesh.cell(i);
    auto offsets = [&](const std::vector<int>& idx) {
      MatrixXd a(idx.size(), 3);
      for (std::size_t r = 0; r < idx.size(); ++r)
        a.row(r) = ((member_geometry(mesh, st.big[idx[r]]).centroid - home.centroid) / home.h)
                       .transpose();
      return a;
    };

    std::vector<std::vector<int>> subs;
    if (home.type == CellType::hex && n_face == 6) {
      // One face neighbor from each pair of opposite faces.
      std::vector<Vec3> normals;
      for (const auto& nb : mesh.neighbors(i)) normals.push_back(nb.sign * mesh.face(nb.face).normal);
      std::vector<std::array<int, 2>> pairs;
      std::vector<bool> used(6, false);
      for (int a = 0; a < 6; ++a) {
        if (used[a]) continue;
        int best = -1;
        double dmin = 0.0;
        for (int b = 0; b < 6; ++b)
          if (b != a && !used[b] && normals[a].dot(normals[b]) < dmin) {
            dmin = normals[a].dot(normals[b]);
            best = b;
          }
        if (best < 0) break;
        used[a] = used[best] = true;
        pairs.push_back({a, best});
      }
      if (pairs.size() == 3)
        for (int mask = 0; mask < 8; ++mask)
          subs.push_back({pairs[0][mask & 1], pairs[1][(mask >> 1) & 1], pairs[2][(mask >> 2) & 1]});
    }
    if (subs.empty()) {
      for (int skip = n_face - 1; skip >= 0; --skip) {
        std::vector<int> s;
        for (int k = 0; k < n_face; ++k)
          if (k != skip) s.push_back(k);
        if (s.size() > 3) s.resize(3);
        subs.push_back(s);
      }
    }
    const double threshold = 0.1;
    for (auto& s : subs) {
      double cond = conditioning(offsets(s));
      while (cond < threshold && s.size() < 6) {
        int best = -1;
        double best_cond = cond;
        for (int c = n_face; c < static_cast<int>(st.big.size()); ++c) {
          if (std::find(s.begin(), s.end(), c) != s.end()) continue;
          auto trial = s;
          trial.push_back(c);
          const double tc = conditioning(offsets(trial));
          if (tc > best_cond) {
            best_cond = tc;
            best = c;
          }
        }
        if (best < 0) break;
        s.push_back(best);
        cond = best_cond;
      }
      if (cond < 1e-6) st.subs_valid = false;
    }
    st.subs = std::move(subs);
  }
  return out;
}

Reconstructor::Reconstructor(const Mesh& mesh, ReconOptions options)
    : mesh_(&mesh), options_(options), stencils_(build_stencils(mesh, options.flavor)) {
  data_.resize(mesh.n_cells());
  parallel_for(mesh.n_cells(), [&](int i) { setup_cell(i); });
}

int Reconstructor::degraded_cells() const {
  int n = 0;
  for (const auto& s : stencils_) n += (s.degree < 2 || !s.subs_valid) ? 1 : 0;
  return n;
}

void Reconstructor::setup_cell(int i) {
  const Cell& home = mesh_->cell(i);
  CellStencil& st = stencils_[i];
  CellData& d = data_[i];
  const double h0 = home.h;
  d.s0 = home.second_moment / (h0 * h0);
  d.mean = mean_row(Vec3::Zero(), d.s0);

  const int n = static_cast<int>(st.big.size());
  std::vector<Vec3> delta(n);
  MatrixXd avg(n, kBasisSize);
  for (int k = 0; k < n; ++k) {
    const MemberGeometry g = member_geometry(*mesh_, st.big[k]);
    delta[k] = (g.centroid - home.centroid) / h0;
    avg.row(k) = mean_row(delta[k], g.second_moment / (h0 * h0)) - d.mean;
  }

  if (options_.flavor == ReconFlavor::weno) {
    st.degree = conditioning(avg) > 1e-8 ? 2 : 1;
    d.p0_avg = MatrixXd::Zero(kBasisSize, n);
    if (st.degree == 2) d.p0_avg = pinv(avg);
    else d.p0_avg.topRows(3) = pinv(avg.leftCols(3));
    d.p0_grad = MatrixXd::Zero(kBasisSize, 0);
    for (const auto& s : st.subs) {
      MatrixXd a(s.size(), 3);
      for (std::size_t r = 0; r < s.size(); ++r) a.row(r) = avg.row(s[r]).head(3);
      d.sub_avg.push_back(pinv(a));
      d.sub_grad.push_back(MatrixXd::Zero(3, 0));
    }
    return;
  }

  // HWENO: averages as equality constraints, h-scaled gradients in the least-squares sense.
  MatrixXd e(3 * (n + 1), kBasisSize);
  for (int j = 0; j < 3; ++j) e.row(j) = derivative_row(j, Vec3::Zero());
  for (int k = 0; k < n; ++k) {
    const double scale = mesh_->cell(st.big[k].cell).h / h0;
    for (int j = 0; j < 3; ++j) e.row(3 * (k + 1) + j) = scale * derivative_row(j, delta[k]);
  }
  constrained_lsq(avg, e, d.p0_avg, d.p0_grad);
  st.degree = 2;
  for (std::size_t m = 0; m < st.subs.size(); ++m) {
    const int k = st.subs[m][0];
    MatrixXd g(1, 3);
    g.row(0) = avg.row(k).head(3);
    MatrixXd es(6, 3);
    es.topRows(3) = e.topRows(3).leftCols(3);
    es.bottomRows(3) = e.middleRows(3 * (k + 1), 3).leftCols(3);
    MatrixXd mg, me;
    constrained_lsq(g, es, mg, me);
    d.sub_avg.push_back(mg);
    d.sub_grad.push_back(me);
  }
}

Fit Reconstructor::fit(int i, const std::vector<Vec5>& q, const std::vector<Grad5>* grad) const {
  const CellStencil& st = stencils_[i];
  const CellData& d = data_[i];
  const int n = static_cast<int>(st.big.size());
  const Vec5& q0 = q[i];
  MatrixXd dq(n, 5);
  for (int k = 0; k < n; ++k) dq.row(k) = (member_state(*mesh_, st.big[k], q) - q0).transpose();

  Fit f;
  if (options_.flavor == ReconFlavor::weno) {
    f.p0 = (d.p0_avg * dq).transpose();
    if (options_.linear_weights || !st.subs_valid) return f;
    for (std::size_t m = 0; m < st.subs.size(); ++m) {
      const auto& s = st.subs[m];
      MatrixXd ds(s.size(), 5);
      for (std::size_t r = 0; r < s.size(); ++r) ds.row(r) = dq.row(s[r]);
      f.subs.push_back((d.sub_avg[m] * ds).transpose());
    }
    return f;
  }

  if (!grad) throw Error("HWENO reconstruction needs cell gradients");
  const double h0 = mesh_->cell(i).h;
  MatrixXd eg(3 * (n + 1), 5);
  eg.topRows(3) = h0 * (*grad)[i].transpose();
  for (int k = 0; k < n; ++k) {
    const double hk = mesh_->cell(st.big[k].cell).h;
    eg.middleRows(3 * (k + 1), 3) = hk * member_gradient(*mesh_, st.big[k], q, *grad).transpose();
  }
  f.p0 = (d.p0_avg * dq + d.p0_grad * eg).transpose();
  if (options_.linear_weights || !st.subs_valid) return f;
  for (std::size_t m = 0; m < st.subs.size(); ++m) {
    const int k = st.subs[m][0];
    MatrixXd es(6, 5);
    es.topRows(3) = eg.topRows(3);
    es.bottomRows(3) = eg.middleRows(3 * (k + 1), 3);
    f.subs.push_back((d.sub_avg[m] * dq.row(k) + d.sub_grad[m] * es).transpose());
  }
  return f;
}

double Reconstructor::smoothness(int i, const BasisRow& c) const {
  const Cell& cell = mesh_->cell(i);
  const Vec3 b = c.head(3).transpose();
  Mat3 a;
  a << 2.0 * c[3], c[4], c[5], c[4], 2.0 * c[6], c[7], c[5], c[7], 2.0 * c[8];
  const double first = b.squaredNorm() + (a * data_[i].s0 * a).trace();
  const double second = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2) + a(0, 1) * a(0, 1) +
                        a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  return cell.volume / (cell.h * cell.h * cell.h) * (first + second);
}

Weights Reconstructor::weights(int i, const Fit& fit) const {
  Weights w;
  const int m = static_cast<int>(fit.subs.size());
  w.w.assign(m, Vec5::Zero());
  if (m == 0) {
    w.w0.setOnes();
    return w;
  }
  const double g0 = options_.gamma0;
  const double gm = (1.0 - g0) / m;
  for (int v = 0; v < 5; ++v) {
    const double b0 = smoothness(i, fit.p0.row(v));
    std::vector<double> bm(m);
    double tau = 0.0;
    for (int k = 0; k < m; ++k) {
      BasisRow c = BasisRow::Zero();
      c.head(3) = fit.subs[k].row(v);
      bm[k] = smoothness(i, c);
      tau += std::abs(b0 - bm[k]) / m;
    }
    double w0 = g0 * (1.0 + tau / (b0 + options_.eps));
    double sum = w0;
    std::vector<double> wm(m);
    for (int k = 0; k < m; ++k) {
      wm[k] = gm * (1.0 + tau / (bm[k] + options_.eps));
      sum += wm[k];
    }
    w.w0[v] = w0 / sum;
    for (int k = 0; k < m; ++k) w.w[k][v] = wm[k] / sum;
  }
  return w;
}

CellPoly Reconstructor::combine(int i, const Vec5& q0, const Fit& fit) const {
  CellPoly p;
  p.q0 = q0;
  if (fit.subs.empty()) {
    p.c = fit.p0;
    return p;
  }
  const Weights w = weights(i, fit);
  const double g0 = options_.gamma0;
  const double gm = (1.0 - g0) / static_cast<double>(fit.subs.size());
  for (int v = 0; v < 5; ++v) {
    p.c.row(v) = (w.w0[v] / g0) * fit.p0.row(v);
    for (std::size_t k = 0; k < fit.subs.size(); ++k)
      p.c.row(v).head(3) += (w.w[k][v] - w.w0[v] * gm / g0) * fit.subs[k].row(v);
  }
  return p;
}

void Reconstructor::reconstruct(const std::vector<Vec5>& q, const std::vector<Grad5>* grad,
                                std::vector<CellPoly>& out) const {
  out.resize(mesh_->n_cells());
  parallel_for(mesh_->n_cells(), [&](int i) { out[i] = combine(i, q[i], fit(i, q, grad)); });
}

BasisRow Reconstructor::basis(int i, const Vec3& x) const {
  const Cell& c = mesh_->cell(i);
  return raw_basis((x - c.centroid) / c.h) - data_[i].mean;
}

Vec5 Reconstructor::value(int i, const CellPoly& p, const Vec3& x) const {
  return p.q0 + p.c * basis(i, x).transpose();
}

Grad5 Reconstructor::gradient(int i, const CellPoly& p, const Vec3& x) const {
  const Cell& c = mesh_->cell(i);
  return p.c * basis_derivatives((x - c.centroid) / c.h).transpose() / c.h;
}

std::vector<Grad5> gauss_gradients(const Mesh& mesh,
                                   const std::vector<std::vector<Vec5>>& face_values) {
  std::vector<Grad5> g(mesh.n_cells(), Grad5::Zero());
  parallel_for(mesh.n_cells(), [&](int i) {
    Grad5 acc = Grad5::Zero();
    for (const auto& nb : mesh.neighbors(i)) {
      const Face& f = mesh.face(nb.face);
      Vec5 mean = Vec5::Zero();
      for (std::size_t k = 0; k < f.quad.size(); ++k) mean += f.quad[k].w * face_values[nb.face][k];
      acc += nb.sign * f.area * mean * f.normal.transpose();
    }
    g[i] = acc / mesh.cell(i).volume;
  });
  return g;
}

}  // namespace hgks
