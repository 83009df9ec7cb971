#pragma once

// Increment solvers for [alpha I - sigma dL/dQ] dQ = rhs with the inviscid
// flux split dF = (dT_i + dT_j - lambda (dQ_j - dQ_i)) / 2 at every face.
// Ghost increments behind boundary faces are taken as zero.

#include "hgks/mesh.hpp"
#include "hgks/timestepping.hpp"

#include <string>
#include <vector>

namespace hgks {

enum class RadiusMode { average, max_side };

std::string to_string(RadiusMode m);
RadiusMode radius_mode_from_string(const std::string& s);

/// |u.n| + a at the averaged state, or the larger one-sided value.
double spectral_radius(const Vec5& ql, const Vec5& qr, const Vec3& n,
                       RadiusMode mode = RadiusMode::average);

/// The linearized system at one pseudo iterate.
class IncrementSystem {
 public:
  IncrementSystem(const Mesh& mesh, const State& q, double alpha, double sigma,
                  RadiusMode mode = RadiusMode::average);

  const Mesh& mesh() const { return *mesh_; }
  const State& state() const { return *q_; }
  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  double radius(int face) const { return lambda_[face]; }
  /// Scalar diagonal alpha + sigma/(2V) sum lambda S.
  double diagonal(int cell) const { return diag_[cell]; }

  /// Off-diagonal coupling of cell i to its neighbor through face nb for the increment dqj,
  /// with dT evaluated as a flux difference (matrix-free) or with the Jacobian.
  Vec5 coupling(int i, const Neighbor& nb, const Vec5& dqj, bool matrix_free) const;

  /// Assembles the per-face Jacobians and block diagonal inverses used by GMRES.
  void assemble_blocks();
  /// y = A x with the assembled blocks.
  void apply(const State& x, State& y) const;
  /// One block-Jacobi sweep: z <- D^-1 (r - O z).
  void jacobi_sweep(const State& r, const State& z, State& out) const;
  const Mat5& block_diagonal(int cell) const { return block_diag_[cell]; }

 private:
  Vec5 offdiag_block(int i, const Neighbor& nb, const Vec5& x) const;

  const Mesh* mesh_;
  const State* q_;
  double alpha_, sigma_;
  std::vector<double> lambda_;
  std::vector<double> diag_;
  std::vector<Mat5> jac_left_, jac_right_;  // J(Q_left, n), J(Q_right, n) per face
  std::vector<Mat5> block_diag_, block_diag_inv_;
};

struct LusgsOptions {
  int sweeps = 1;            ///< forward + backward pairs
  bool matrix_free = true;   ///< dT from flux differences instead of the Jacobian
  bool operator==(const LusgsOptions&) const = default;
};

/// Symmetric Gauss-Seidel sweeps in cell order starting from zero. Throws
/// SolverError naming the cell if an increment is not finite.
void lusgs_solve(const IncrementSystem& sys, const State& rhs, const LusgsOptions& options,
                 State& dq);

struct KrylovConfig {
  int dim = 3;             ///< Krylov subspace dimension
  int restarts = 1;        ///< number of GMRES(dim) cycles
  double tol = 1e-6;       ///< relative to |rhs|
  int jacobi_sweeps = 2;   ///< block-Jacobi preconditioner sweeps
  bool operator==(const KrylovConfig&) const = default;
};

struct GmresReport {
  int iterations = 0;
  double residual = 0.0;  ///< final relative residual
  bool breakdown = false;
  std::vector<double> history;  ///< relative residual estimate after each iteration
};

/// Right-preconditioned restarted GMRES. `sys` must have assembled blocks.
GmresReport gmres_solve(const IncrementSystem& sys, const State& rhs, const KrylovConfig& config,
                        State& dq);

}  // namespace hgks
