#pragma once

// Third-order WENO (non-compact) and HWENO (compact, gradient-augmented)
// reconstruction on unstructured cells.
//
// Each cell carries a polynomial in the scaled coordinate xi = (x - centroid) / h over the
// zero-mean basis phi_k(xi) - mean_k, k over (x, y, z, xx, xy, xz, yy, yz, zz).

#include "hgks/mesh.hpp"
#include "hgks/types.hpp"

#include <vector>

namespace hgks {

enum class ReconFlavor { weno, hweno };

std::string to_string(ReconFlavor f);
ReconFlavor recon_flavor_from_string(const std::string& s);

inline constexpr int kBasisSize = 9;

using Coeffs = Eigen::Matrix<double, 5, kBasisSize>;
using LinearCoeffs = Eigen::Matrix<double, 5, 3>;
using BasisRow = Eigen::Matrix<double, 1, kBasisSize>;

/// A stencil cell seen from the home cell.
struct StencilMember {
  int cell = -1;
  Vec3 shift = Vec3::Zero();  ///< periodic translation of the cell into the home frame
  int ghost_face = -1;        ///< >= 0: mirror image of `cell` across this boundary face
};

struct CellStencil {
  std::vector<StencilMember> big;       ///< excludes the home cell; face neighbors come first
  std::vector<std::vector<int>> subs;   ///< indices into `big`
  int degree = 2;                       ///< degree of the big-stencil polynomial
  bool subs_valid = true;               ///< false: the cell uses the big-stencil polynomial alone
};

std::vector<CellStencil> build_stencils(const Mesh& mesh, ReconFlavor flavor);

struct MemberGeometry {
  Vec3 centroid;
  Mat3 second_moment;
  double volume;
  double h;
};

MemberGeometry member_geometry(const Mesh& mesh, const StencilMember& m);

/// Cell average and gradient of a stencil member, ghosts included.
Vec5 member_state(const Mesh& mesh, const StencilMember& m, const std::vector<Vec5>& q);
Grad5 member_gradient(const Mesh& mesh, const StencilMember& m, const std::vector<Vec5>& q,
                      const std::vector<Grad5>& g);

struct ReconOptions {
  ReconFlavor flavor = ReconFlavor::weno;
  double gamma0 = 0.85;
  double eps = 1e-8;
  bool linear_weights = false;  ///< use the big-stencil polynomial alone everywhere
  bool operator==(const ReconOptions&) const = default;
};

/// Reconstructed polynomial of one cell.
struct CellPoly {
  Vec5 q0 = Vec5::Zero();
  Coeffs c = Coeffs::Zero();
};

/// Candidate polynomials of one cell before the nonlinear combination.
struct Fit {
  Coeffs p0 = Coeffs::Zero();
  std::vector<LinearCoeffs> subs;
};

struct Weights {
  Vec5 w0 = Vec5::Zero();
  std::vector<Vec5> w;  ///< normalized weights per sub polynomial and component
};

class Reconstructor {
 public:
  Reconstructor(const Mesh& mesh, ReconOptions options);

  const Mesh& mesh() const { return *mesh_; }
  const ReconOptions& options() const { return options_; }
  const CellStencil& stencil(int i) const { return stencils_[i]; }
  int degraded_cells() const;

  Fit fit(int i, const std::vector<Vec5>& q, const std::vector<Grad5>* grad) const;
  Weights weights(int i, const Fit& fit) const;
  CellPoly combine(int i, const Vec5& q0, const Fit& fit) const;

  /// Fit + nonlinear combination for every cell. `grad` is required for HWENO.
  void reconstruct(const std::vector<Vec5>& q, const std::vector<Grad5>* grad,
                   std::vector<CellPoly>& out) const;

  /// Smoothness indicator of one component over the home cell.
  double smoothness(int i, const BasisRow& c) const;

  Vec5 value(int i, const CellPoly& p, const Vec3& x) const;
  /// Gradient in the global frame (column j holds d/dx_j).
  Grad5 gradient(int i, const CellPoly& p, const Vec3& x) const;

  /// Zero-mean basis of cell i evaluated at x.
  BasisRow basis(int i, const Vec3& x) const;

 private:
  struct CellData {
    Eigen::MatrixXd p0_avg;   // 9 x n_big: coefficients from average differences
    Eigen::MatrixXd p0_grad;  // 9 x 3(n_big+1): coefficients from scaled gradients (HWENO)
    std::vector<Eigen::MatrixXd> sub_avg;
    std::vector<Eigen::MatrixXd> sub_grad;
    BasisRow mean = BasisRow::Zero();  // home means of the raw monomials
    Mat3 s0 = Mat3::Zero();            // home second moment in scaled coordinates
  };

  void setup_cell(int i);

  const Mesh* mesh_;
  ReconOptions options_;
  std::vector<CellStencil> stencils_;
  std::vector<CellData> data_;
};

/// Cell gradients by the Gauss theorem from values at every face quadrature point.
/// face_values[f][g] is the state at quadrature point g of face f.
std::vector<Grad5> gauss_gradients(const Mesh& mesh, const std::vector<std::vector<Vec5>>& face_values);

}  // namespace hgks
