#ifndef ROWLIFT_LINALG_HPP
#define ROWLIFT_LINALG_HPP

/// Dense complex linear algebra helpers shared by all modules.
/// Thin layer over Eigen; Hermitian eigensolves route through LAPACKE
/// when available.

#include <complex>
#include <Eigen/Dense>

namespace rowlift {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermEig {
  RealVec values;
  Mat vectors;  // columns are orthonormal eigenvectors
};

/// H is Hermitianized as (H + H*)/2 before factorization.
HermEig herm_eig(const Mat& H);

/// Largest singular value. Uses the Gram matrix of the smaller side.
double spectral_norm(const Mat& A);

/// Largest eigenvalue of a Hermitian matrix (no vectors).
double herm_max_eig(const Mat& H);

/// Smallest eigenvalue of a Hermitian matrix.
double herm_min_eig(const Mat& H);

/// PSD square root via Hermitian eigendecomposition. Eigenvalues in
/// [-clamp_tol, 0) are clamped to 0; anything more negative throws
/// std::domain_error (a genuine norm violation, not roundoff).
Mat psd_sqrt(const Mat& H, double clamp_tol = 1e-10);

/// Clip singular values of A at level t (metric projection of A onto
/// the spectral-norm ball of radius t, in the Frobenius metric).
Mat clip_singular_values(const Mat& A, double t);

/// Orthonormal basis of the range of A: columns with singular value
/// > rel_tol * sigma_max.
Mat range_basis(const Mat& A, double rel_tol = 1e-10);

/// Orthonormal basis of the null space of A (right singular vectors with
/// singular value <= rel_tol * sigma_max).
Mat null_basis(const Mat& A, double rel_tol = 1e-10);

/// Numerical rank at relative threshold.
int rank_at(const Mat& A, double rel_tol = 1e-10);

/// Inverse square root / square root of a Hermitian positive definite
/// matrix; throws std::domain_error if the condition number (ratio of
/// extreme eigenvalues) exceeds cond_limit or an eigenvalue is <= 0.
Mat hpd_sqrt(const Mat& G, double cond_limit = 1e12);
Mat hpd_inv_sqrt(const Mat& G, double cond_limit = 1e12);

bool is_hermitian(const Mat& A, double tol = 1e-10);
bool is_isometry(const Mat& E, double tol = 1e-10);  // E* E = I

}  // namespace rowlift

#endif
