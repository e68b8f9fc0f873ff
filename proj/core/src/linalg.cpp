#include "rowlift/linalg.hpp"

#include <stdexcept>

#ifdef ROWLIFT_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace rowlift {

HermEig herm_eig(const Mat& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("herm_eig: matrix not square");
  const auto n = H.rows();
  HermEig out;
  if (n == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  Mat A = 0.5 * (H + H.adjoint());
#ifdef ROWLIFT_HAVE_LAPACKE
  out.values.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                            reinterpret_cast<lapack_complex_double*>(A.data()),
                            static_cast<lapack_int>(n), out.values.data());
  if (info == 0) {
    out.vectors = std::move(A);
    return out;
  }
  // fall through to Eigen on the rare zheevd failure
  A = 0.5 * (H + H.adjoint());
#endif
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

double spectral_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  // sigma_max^2 = lambda_max of the smaller Gram matrix
  Mat G = (A.rows() <= A.cols()) ? Mat(A * A.adjoint()) : Mat(A.adjoint() * A);
  double lam = herm_max_eig(G);
  return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

double herm_max_eig(const Mat& H) {
  HermEig e = herm_eig(H);
  return e.values.size() ? e.values[e.values.size() - 1] : 0.0;
}

double herm_min_eig(const Mat& H) {
  HermEig e = herm_eig(H);
  return e.values.size() ? e.values[0] : 0.0;
}

Mat psd_sqrt(const Mat& H, double clamp_tol) {
  HermEig e = herm_eig(H);
  RealVec lam = e.values;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -clamp_tol)
      throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(lam[i]) +
                              " below clamp tolerance");
    if (lam[i] < 0.0) lam[i] = 0.0;
  }
  return e.vectors * lam.cwiseSqrt().asDiagonal() * e.vectors.adjoint();
}

Mat clip_singular_values(const Mat& A, double t) {
  if (t < 0.0) throw std::invalid_argument("clip_singular_values: negative radius");
  if (A.size() == 0) return A;
  // A = U S V*;  clip(A) = A V f(S) V* with f = min(s,t)/s (f(0)=1),
  // so only the right singular vectors are needed.
  HermEig e = herm_eig(A.adjoint() * A);
  RealVec f(e.values.size());
  bool touched = false;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double s = e.values[i] > 0.0 ? std::sqrt(e.values[i]) : 0.0;
    if (s > t) {
      f[i] = t / s;
      touched = true;
    } else {
      f[i] = 1.0;
    }
  }
  if (!touched) return A;
  return A * (e.vectors * f.asDiagonal() * e.vectors.adjoint());
}

Mat range_basis(const Mat& A, double rel_tol) {
  if (A.size() == 0) return Mat(A.rows(), 0);
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = s.size() ? s[0] * rel_tol : 0.0;
  int r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& A, double rel_tol) {
  if (A.size() == 0) return Mat::Identity(A.cols(), A.cols());
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cut = s.size() ? s[0] * rel_tol : 0.0;
  int r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  return svd.matrixV().rightCols(A.cols() - r);
}

int rank_at(const Mat& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  double cut = s.size() ? s[0] * rel_tol : 0.0;
  int r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  return r;
}

namespace {

Mat hpd_power(const Mat& G, double expo, double cond_limit) {
  HermEig e = herm_eig(G);
  const auto n = e.values.size();
  if (n == 0) return G;
  double lo = e.values[0], hi = e.values[n - 1];
  if (lo <= 0.0 || hi / lo > cond_limit)
    throw std::domain_error("hpd_power: matrix not positive definite within condition limit " +
                            std::to_string(cond_limit));
  RealVec p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = std::pow(e.values[i], expo);
  return e.vectors * p.asDiagonal() * e.vectors.adjoint();
}

}  // namespace

Mat hpd_sqrt(const Mat& G, double cond_limit) { return hpd_power(G, 0.5, cond_limit); }
Mat hpd_inv_sqrt(const Mat& G, double cond_limit) { return hpd_power(G, -0.5, cond_limit); }

bool is_hermitian(const Mat& A, double tol) {
  if (A.rows() != A.cols()) return false;
  return (A - A.adjoint()).norm() <= tol * std::max(1.0, A.norm());
}

bool is_isometry(const Mat& E, double tol) {
  Mat G = E.adjoint() * E;
  return (G - Mat::Identity(G.rows(), G.cols())).norm() <= tol * std::sqrt(double(G.rows()));
}

}  // namespace rowlift
