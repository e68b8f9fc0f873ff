#ifndef ROWLIFT_PICK_HPP
#define ROWLIFT_PICK_HPP

/// Nevanlinna-Pick machinery on the Drury-Arveson kernel: Pick matrices,
/// kernel-subspace model operators, the norm <-> positivity equivalence
/// and multiplier recovery through the lifting solver.

#include <optional>
#include <vector>

#include "rowlift/fock.hpp"
#include "rowlift/lifting.hpp"
#include "rowlift/row_operator.hpp"

namespace rowlift {

struct PickSystem {
  std::vector<Vec> nodes;      // N distinct points in the open unit ball of C^n
  std::vector<Mat> targets;    // N scalar (1x1) or dxd matrices

  int n() const;               // number of variables
  int count() const;           // N
  Eigen::Index target_dim() const;
  bool scalar() const { return target_dim() == 1; }

  static PickSystem scalar_system(std::vector<Vec> nodes, std::vector<Complex> values);
};

void validate(const PickSystem& sys);

/// Gram matrix [k(lambda_i, lambda_j)] (N x N, PSD for distinct nodes).
Mat gram_matrix(const PickSystem& sys);

/// Pick matrix with block (i,j) = (I - W_i W_j*) k(lambda_i, lambda_j).
Mat pick_matrix(const PickSystem& sys);

/// Model operators T_i = P_M M_{z_i} |_M on the span of kernel functions,
/// held in kernel-basis coordinates: the adjoints act diagonally, true
/// norms are computed in the Gram inner product.
struct ModelOperators {
  std::vector<Mat> adjoint_diag;  // coordinate matrices of T_i^* (diagonal)
  Mat gram;                       // tensored Gram for matrix targets
  Mat gram_sqrt, gram_inv_sqrt;
  int n;

  /// Coordinate matrix of T_i itself: G^{-1} D_i G.
  Mat coordinate(int i) const;
  /// Orthonormal-coordinate realization G^{1/2} [T_i] G^{-1/2}.
  Mat orthonormal(int i) const;
  RowOperator tuple() const;  // orthonormal realization as a RowOperator
  double row_norm() const;
};

/// Throws std::domain_error on Gram condition number above cond_limit.
ModelOperators model_operators(const PickSystem& sys, double cond_limit = 1e12);

struct ModelX {
  Mat adjoint_diag;   // X^* on the kernel basis: diag(conj targets)
  Mat orthonormal;    // G^{1/2} [X] G^{-1/2}
  double norm;        // operator norm in the Gram inner product
};

ModelX model_X(const PickSystem& sys, double cond_limit = 1e12);

struct PickFeasibility {
  double min_eigenvalue;       // of the Pick matrix
  double norm_X;               // Gram-weighted ||X||
  bool psd;                    // min eig >= -1e-10 * ||Pick||
  double scale;                // ||Pick|| used for the relative test
};

PickFeasibility pick_feasibility(const PickSystem& sys);

struct NPOptions {
  double cond_limit = 1e12;
  LiftingOptions lifting{};
};

struct NPSolution {
  bool feasible;                   // Pick matrix PSD
  double pick_min_eigenvalue;
  double norm_X;
  double achieved_norm;            // norm of the recovered multiplier (truncated)
  std::vector<MultiIndex> coeff_index;
  std::vector<Mat> coefficients;   // target_dim x target_dim blocks per multi-index
  std::vector<double> node_residuals;  // |h(lambda_i) - w_i|
  LiftingSolution lifting;
};

/// Ball-Trent-Vinnikov route: embed the kernel span into truncated
/// H^2_n, lift X through the multiplier model at degree d, read the
/// multiplier coefficients off the action on the vacuum column.
NPSolution solve_np(const PickSystem& sys, int d, const NPOptions& opts = {});

}  // namespace rowlift

#endif
