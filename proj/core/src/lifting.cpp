#include "rowlift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rowlift {

// ---------------------------------------------------------------------------
// MultCommutantBasis

MultCommutantBasis::MultCommutantBasis(int n, int d, int alpha_row, int alpha_col)
    : fock_(n, d), alpha_row_(alpha_row), alpha_col_(alpha_col), block_(fock_.sym_dim()) {
  if (alpha_row < 1 || alpha_col < 1)
    throw std::invalid_argument("MultCommutantBasis: multiplicities must be positive");
  const Eigen::Index N = fock_.sym_dim();
  strips_.resize(static_cast<std::size_t>(N));
  for (Eigen::Index ks = 0; ks < N; ++ks) {
    const MultiIndex& k = fock_.multi_at(ks);
    const int kw = weight(k);
    auto& strip = strips_[static_cast<std::size_t>(ks)];
    double fro2 = 0.0;
    for (Eigen::Index js = 0; js < N; ++js) {
      const MultiIndex& j = fock_.multi_at(js);
      if (weight(j) + kw > fock_.d()) continue;
      MultiIndex sum = j;
      for (int i = 0; i < fock_.n(); ++i) sum[static_cast<std::size_t>(i)] += k[static_cast<std::size_t>(i)];
      // M^k e_j = sqrt(|P_j| / |P_{j+k}|) e_{j+k}
      double w = std::sqrt(static_cast<double>(multinomial_count(j)) /
                           static_cast<double>(multinomial_count(sum)));
      strip.push_back({fock_.multi_rank(sum), js, w});
      fro2 += w * w;
    }
    const double inv = 1.0 / std::sqrt(fro2);
    for (auto& e : strip) e.value *= inv;
  }
}

Vec MultCommutantBasis::extract(const Mat& W) const {
  if (W.rows() != rows() || W.cols() != cols())
    throw std::invalid_argument("MultCommutantBasis::extract: shape mismatch");
  Vec x(q());
  Eigen::Index j = 0;
  for (std::size_t ks = 0; ks < strips_.size(); ++ks)
    for (Eigen::Index a = 0; a < alpha_row_; ++a)
      for (Eigen::Index b = 0; b < alpha_col_; ++b, ++j) {
        Complex acc = 0.0;
        for (const Entry& e : strips_[ks])
          acc += e.value * W(a * block_ + e.row, b * block_ + e.col);
        x[j] = acc;
      }
  return x;
}

Mat MultCommutantBasis::reconstruct(const Vec& x) const {
  if (x.size() != q()) throw std::invalid_argument("MultCommutantBasis::reconstruct: size");
  Mat Z = Mat::Zero(rows(), cols());
  Eigen::Index j = 0;
  for (std::size_t ks = 0; ks < strips_.size(); ++ks)
    for (Eigen::Index a = 0; a < alpha_row_; ++a)
      for (Eigen::Index b = 0; b < alpha_col_; ++b, ++j) {
        if (x[j] == Complex(0.0)) continue;
        for (const Entry& e : strips_[ks])
          Z(a * block_ + e.row, b * block_ + e.col) += x[j] * e.value;
      }
  return Z;
}

Mat MultCommutantBasis::basis_matrix(Eigen::Index j) const {
  Vec x = Vec::Zero(q());
  x[j] = 1.0;
  return reconstruct(x);
}

// ---------------------------------------------------------------------------
// Problem construction

double LiftingProblem::norm_X() const { return spectral_norm(X_original); }
double LiftingProblem::norm_X_compressed() const { return spectral_norm(X); }

namespace {

// Orthonormalize a possibly leaky embedding; conjugate X accordingly.
// Returns {W_hat, S} with W_hat* W_hat = I and coordinates c = S h.
std::pair<Mat, Mat> orthonormalize_embed(const Mat& W) {
  Mat G = W.adjoint() * W;
  double defect = (G - Mat::Identity(G.rows(), G.cols())).norm();
  if (defect <= 1e-13) return {W, Mat::Identity(G.rows(), G.cols())};
  Mat S, Sinv;
  try {
    S = hpd_sqrt(G);
    Sinv = hpd_inv_sqrt(G);
  } catch (const std::domain_error&) {
    throw std::domain_error(
        "lifting: embedding gram is singular; the tuple is not pure enough "
        "at this truncation degree");
  }
  return {W * Sinv, S};
}

double commutation_hypothesis(const RowOperator& Tt, const Mat& What, const Mat& Xhat) {
  double worst = 0.0;
  for (int i = 1; i <= Tt.n(); ++i) {
    Mat Ai = What.adjoint() * Tt.block(i) * What;
    worst = std::max(worst, spectral_norm(Xhat * Ai - Ai * Xhat));
  }
  return worst;
}

}  // namespace

LiftingProblem make_commutant_problem(const DilationResult& dil, const Mat& X,
                                      DilationConstraintForm form, double tol) {
  if (X.rows() != X.cols() || X.rows() != dil.embed.cols())
    throw std::invalid_argument("make_commutant_problem: X must act on the embedded space");
  LiftingProblem p;
  p.Ttilde = dil.V;
  p.mode = LiftingMode::commutant;
  p.form = form;
  p.tol = tol;
  p.X_original = X;
  p.embed_defect_before = dil.embed_defect;
  auto [What, S] = orthonormalize_embed(dil.embed);
  p.embed = What;
  p.X = (S.isIdentity(0.0)) ? X : Mat(S * X * S.inverse());
  p.structure_T = dil.mult_structure;
  p.hypothesis_residual = commutation_hypothesis(p.Ttilde, p.embed, p.X);
  if (p.hypothesis_residual > std::max(1e-4, tol * 1e4))
    throw std::invalid_argument(
        "make_commutant_problem: X does not commute with the compressed dilation "
        "(residual " + std::to_string(p.hypothesis_residual) + ")");
  return p;
}

LiftingProblem make_intertwiner_problem(const DilationResult& dil_S,
                                        const DilationResult& dil_T, const Mat& X,
                                        DilationConstraintForm form, double tol) {
  if (dil_S.V.n() != dil_T.V.n())
    throw std::invalid_argument("make_intertwiner_problem: tuple arities differ");
  if (X.rows() != dil_S.embed.cols() || X.cols() != dil_T.embed.cols())
    throw std::invalid_argument("make_intertwiner_problem: X shape mismatch");
  LiftingProblem p;
  p.Ttilde = dil_T.V;
  p.Stilde = dil_S.V;
  p.mode = LiftingMode::intertwiner;
  p.form = form;
  p.tol = tol;
  p.X_original = X;
  p.embed_defect_before = std::max(dil_S.embed_defect, dil_T.embed_defect);
  auto [WT, ST] = orthonormalize_embed(dil_T.embed);
  auto [WS, SS] = orthonormalize_embed(dil_S.embed);
  p.embed = WT;
  p.embed_left = WS;
  p.X = SS * X * ST.inverse();
  p.structure_T = dil_T.mult_structure;
  p.structure_S = dil_S.mult_structure;
  // hypothesis: (compressed S_i) X = X (compressed T_i)
  double worst = 0.0;
  for (int i = 1; i <= p.Ttilde.n(); ++i) {
    Mat Ai = WT.adjoint() * p.Ttilde.block(i) * WT;
    Mat Bi = WS.adjoint() * p.Stilde->block(i) * WS;
    worst = std::max(worst, spectral_norm(Bi * p.X - p.X * Ai));
  }
  p.hypothesis_residual = worst;
  if (worst > std::max(1e-4, tol * 1e4))
    throw std::invalid_argument("make_intertwiner_problem: intertwining hypothesis fails "
                                "(residual " + std::to_string(worst) + ")");
  return p;
}

LiftingProblem make_counterexample_problem(double r, double eps, int d,
                                           DilationConstraintForm form, double tol) {
  CounterexampleOperators ce = counterexample_operators(r, eps);
  if (!ce.contraction)
    throw std::domain_error("make_counterexample_problem: eps too large, the extension "
                            "pair is not a row contraction (norm " +
                            std::to_string(ce.row_norm_B) + ")");
  DilationResult dil = arveson_pure(ce.B, d);
  dil.embed = dil.embed * ce.embed_T_in_B;  // restrict to the invariant C^2
  dil.embed_defect =
      (dil.embed.adjoint() * dil.embed - Mat::Identity(2, 2)).norm();
  return make_commutant_problem(dil, ce.X, form, tol);
}

// ---------------------------------------------------------------------------
// Affine engines

namespace {

struct ConstraintData {
  // commutation: Z A_i - B_i Z = 0;  dilation: E_L* Z (E_R) = C
  std::vector<Mat> A, B;
  Mat EL;        // K1 x h1
  Mat ER;        // K2 x h2 (co_extension: unused on the right)
  Mat C;         // rhs: co_extension h1 x K2 (X ER*), compression h1 x h2 (X)
  DilationConstraintForm form;
  Eigen::Index zr, zc;

  Mat dilation_lhs(const Mat& Z) const {
    if (form == DilationConstraintForm::co_extension) return EL.adjoint() * Z;
    return EL.adjoint() * Z * ER;
  }
  double dilation_residual(const Mat& Z) const { return (dilation_lhs(Z) - C).norm(); }
  double commutation_residual_fro(const Mat& Z) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i)
      acc += (Z * A[i] - B[i] * Z).squaredNorm();
    return std::sqrt(acc);
  }
  double total_residual(const Mat& Z) const {
    double d = dilation_residual(Z);
    double c = commutation_residual_fro(Z);
    return std::sqrt(d * d + c * c);
  }
};

ConstraintData make_constraint_data(const LiftingProblem& p) {
  ConstraintData cd;
  cd.form = p.form;
  const RowOperator& right = p.Ttilde;
  const RowOperator& left = p.left();
  cd.zr = left.dim();
  cd.zc = right.dim();
  for (int i = 1; i <= right.n(); ++i) {
    cd.A.push_back(right.block(i));
    cd.B.push_back(left.block(i));
  }
  cd.EL = p.left_embed();
  cd.ER = p.embed;
  if (p.form == DilationConstraintForm::co_extension)
    cd.C = p.X * p.embed.adjoint();
  else
    cd.C = p.X;
  return cd;
}

// Dense engine: spectral analysis of the stacked constraint map L on
// vec(Z). The Gram L*L is assembled from Kronecker identities, its low
// eigenspace re-analyzed against L directly so the null-space threshold
// applies to singular values of L, not their squares.
class DenseAffine final : public AffineConstraintSet {
 public:
  DenseAffine(const LiftingProblem& p, const ConstraintOptions& opts) : cd_(make_constraint_data(p)) {
    const Eigen::Index zr = cd_.zr, zc = cd_.zc, NN = zr * zc;
    if (NN > opts.dense_cap)
      throw std::invalid_argument(
          "build_constraints: problem size " + std::to_string(NN) +
          " exceeds the dense engine cap; supply a multiplier-model dilation");
    z_rows = zr;
    z_cols = zc;

    Mat G = Mat::Zero(NN, NN);
    auto kron_add = [&](const Mat& P, const Mat& Q, Complex scale) {
      // G += scale * kron(P, Q), row index q*zr+p
      for (Eigen::Index qq = 0; qq < P.rows(); ++qq)
        for (Eigen::Index qp = 0; qp < P.cols(); ++qp) {
          Complex pv = P(qq, qp) * scale;
          if (pv == Complex(0.0)) continue;
          G.block(qq * zr, qp * zr, zr, zr) += pv * Q;
        }
    };
    for (std::size_t i = 0; i < cd_.A.size(); ++i) {
      const Mat& A = cd_.A[i];
      const Mat& B = cd_.B[i];
      kron_add(Mat(A.conjugate() * A.transpose()), Mat::Identity(zr, zr), 1.0);
      kron_add(A.conjugate(), B, -1.0);
      kron_add(A.transpose(), B.adjoint(), -1.0);
      kron_add(Mat::Identity(zc, zc), Mat(B.adjoint() * B), 1.0);
    }
    Mat ELEL = cd_.EL * cd_.EL.adjoint();
    if (cd_.form == DilationConstraintForm::co_extension)
      kron_add(Mat::Identity(zc, zc), ELEL, 1.0);
    else
      kron_add(Mat(cd_.ER.conjugate() * cd_.ER.transpose()), ELEL, 1.0);

    // rhs of the normal equations: L* c = vec(EL C ER*) resp. vec(EL C) layout
    Mat rhsM = (cd_.form == DilationConstraintForm::co_extension)
                   ? Mat(cd_.EL * cd_.C)
                   : Mat(cd_.EL * cd_.C * cd_.ER.adjoint());
    Vec b = Eigen::Map<const Vec>(rhsM.data(), NN);

    HermEig eig = herm_eig(G);
    const double lam_max = std::max(eig.values[NN - 1], 0.0);
    const double sigma_max = std::sqrt(lam_max);
    const double coarse = lam_max * 1e-8;  // sigma <= 1e-4 sigma_max goes to refinement

    std::vector<Eigen::Index> cand, rest;
    for (Eigen::Index j = 0; j < NN; ++j)
      (eig.values[j] <= coarse ? cand : rest).push_back(j);

    // particular solution on the well-separated part
    Vec x = Vec::Zero(NN);
    for (Eigen::Index j : rest) {
      Complex coef = eig.vectors.col(j).dot(b) / eig.values[j];
      x += coef * eig.vectors.col(j);
    }

    // refinement: exact singular values of L on the candidate subspace
    if (!cand.empty()) {
      Mat Vc(NN, static_cast<Eigen::Index>(cand.size()));
      for (std::size_t j = 0; j < cand.size(); ++j) Vc.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(cand[j]);
      Mat S = apply_L_matrix(Vc);
      Eigen::BDCSVD<Mat> svd(S, Eigen::ComputeThinU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      double cut = std::max(sigma_max, sv.size() ? sv[0] : 0.0) * opts.rank_tol;
      int r = 0;
      while (r < sv.size() && sv[r] > cut) ++r;
      null_ = Vc * svd.matrixV().rightCols(Vc.cols() - r);
      // least-squares component inside the candidate subspace
      Vec cvec = stacked_rhs();
      Vec y = Vec::Zero(Vc.cols());
      for (int j = 0; j < r; ++j)
        y += (svd.matrixU().col(j).dot(cvec) / sv[j]) * svd.matrixV().col(j);
      x += Vc * y;
    } else {
      null_ = Mat::Zero(NN, 0);
    }

    particular_ = Eigen::Map<const Mat>(x.data(), zr, zc);
    rhs_norm_ = cd_.C.norm();
    infeasibility_ = cd_.total_residual(particular_);
    feasible_ = infeasibility_ <= 1e-8 * std::max(1.0, rhs_norm_);
  }

  Mat project(const Mat& W) const override {
    Vec w = Eigen::Map<const Vec>(W.data(), W.size());
    Vec xp = Eigen::Map<const Vec>(particular_.data(), particular_.size());
    Vec y = xp + null_ * (null_.adjoint() * (w - xp));
    return Eigen::Map<const Mat>(y.data(), z_rows, z_cols);
  }

  const Mat& particular() const override { return particular_; }
  bool feasible() const override { return feasible_; }
  double infeasibility() const override { return infeasibility_; }
  Eigen::Index solution_dim() const override { return null_.cols(); }

 private:
  Vec stacked_rhs() const {
    const Eigen::Index NN = cd_.zr * cd_.zc;
    Eigen::Index rows = static_cast<Eigen::Index>(cd_.A.size()) * NN + cd_.C.size();
    Vec c = Vec::Zero(rows);
    c.tail(cd_.C.size()) = Eigen::Map<const Vec>(cd_.C.data(), cd_.C.size());
    return c;
  }

  // columns of L applied to given vec'd directions
  Mat apply_L_matrix(const Mat& V) const {
    const Eigen::Index NN = cd_.zr * cd_.zc;
    Eigen::Index rows = static_cast<Eigen::Index>(cd_.A.size()) * NN + cd_.C.size();
    Mat S(rows, V.cols());
    for (Eigen::Index c = 0; c < V.cols(); ++c) {
      Mat Z = Eigen::Map<const Mat>(V.col(c).data(), cd_.zr, cd_.zc);
      Eigen::Index off = 0;
      for (std::size_t i = 0; i < cd_.A.size(); ++i) {
        Mat R = Z * cd_.A[i] - cd_.B[i] * Z;
        S.block(off, c, NN, 1) = Eigen::Map<const Vec>(R.data(), NN);
        off += NN;
      }
      Mat D = cd_.dilation_lhs(Z);
      S.block(off, c, D.size(), 1) = Eigen::Map<const Vec>(D.data(), D.size());
    }
    return S;
  }

  ConstraintData cd_;
  Mat particular_;
  Mat null_;  // NN x q0 orthonormal
  double infeasibility_ = 0.0, rhs_norm_ = 0.0;
  bool feasible_ = false;
};

// Structured engine: the commutation constraints are satisfied exactly by
// construction, the dilation constraint becomes a small linear system on
// the commutant coefficients.
class BasisAffine final : public AffineConstraintSet {
 public:
  BasisAffine(const LiftingProblem& p, const MultModelStructure& st_row,
              const MultModelStructure& st_col, const ConstraintOptions& opts)
      : cd_(make_constraint_data(p)), basis_(st_row.n, st_row.d, st_row.alpha, st_col.alpha) {
    z_rows = basis_.rows();
    z_cols = basis_.cols();
    if (z_rows != cd_.zr || z_cols != cd_.zc)
      throw std::invalid_argument("BasisAffine: structure does not match the dilation size");

    const Eigen::Index q = basis_.q();
    // dilation constraint column-by-column in coefficient space
    const Eigen::Index crows = cd_.C.size();
    Mat M(crows, q);
    for (Eigen::Index j = 0; j < q; ++j) {
      Mat Bj = basis_.basis_matrix(j);
      Mat D = cd_.dilation_lhs(Bj);
      M.col(j) = Eigen::Map<const Vec>(D.data(), crows);
    }
    Vec c = Eigen::Map<const Vec>(cd_.C.data(), crows);

    Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = (sv.size() ? sv[0] : 0.0) * opts.rank_tol;
    int r = 0;
    while (r < sv.size() && sv[r] > cut) ++r;
    nullx_ = svd.matrixV().rightCols(q - r);
    x0_ = Vec::Zero(q);
    for (int j = 0; j < r; ++j) x0_ += (svd.matrixU().col(j).dot(c) / sv[j]) * svd.matrixV().col(j);
    particular_ = basis_.reconstruct(x0_);
    rhs_norm_ = cd_.C.norm();
    infeasibility_ = cd_.total_residual(particular_);
    feasible_ = infeasibility_ <= 1e-8 * std::max(1.0, rhs_norm_);
  }

  Mat project(const Mat& W) const override {
    Vec x = basis_.extract(W);
    Vec y = x0_ + nullx_ * (nullx_.adjoint() * (x - x0_));
    return basis_.reconstruct(y);
  }

  const Mat& particular() const override { return particular_; }
  bool feasible() const override { return feasible_; }
  double infeasibility() const override { return infeasibility_; }
  Eigen::Index solution_dim() const override { return nullx_.cols(); }

 private:
  ConstraintData cd_;
  MultCommutantBasis basis_;
  Mat particular_;
  Mat nullx_;  // q x q0
  Vec x0_;
  double infeasibility_ = 0.0, rhs_norm_ = 0.0;
  bool feasible_ = false;
};

}  // namespace

std::unique_ptr<AffineConstraintSet> build_constraints(const LiftingProblem& problem,
                                                       const ConstraintOptions& copts) {
  const bool structured =
      problem.structure_T &&
      (problem.mode == LiftingMode::commutant ||
       (problem.structure_S && problem.structure_S->n == problem.structure_T->n &&
        problem.structure_S->d == problem.structure_T->d));
  if (structured) {
    const MultModelStructure& st_col = *problem.structure_T;
    const MultModelStructure st_row =
        problem.mode == LiftingMode::commutant ? st_col : *problem.structure_S;
    return std::make_unique<BasisAffine>(problem, st_row, st_col, copts);
  }
  return std::make_unique<DenseAffine>(problem, copts);
}

// ---------------------------------------------------------------------------
// Dykstra feasibility and bisection

ProbeResult probe_feasibility(const AffineConstraintSet& cs, double t,
                              const LiftingOptions& opts, const Mat* warm,
                              double gap_tol, long iter_budget) {
  const double stall_floor = opts.tol * std::max(1.0, t);
  const double tol_abs = gap_tol > 0.0 ? gap_tol : stall_floor;
  const long budget = iter_budget > 0 ? iter_budget : opts.max_iter;
  Mat x = warm ? cs.project(*warm) : cs.particular();
  Mat p = Mat::Zero(x.rows(), x.cols());
  Mat q = Mat::Zero(x.rows(), x.cols());

  double best_gap = std::numeric_limits<double>::infinity();
  double prev_window_best = best_gap;
  double gap = best_gap;
  for (long iter = 1; iter <= budget; ++iter) {
    // the affine iterate is an exact certificate once it enters the ball
    if (x.norm() <= t || (iter % 16 == 0 && spectral_norm(x) <= t))
      return {ProbeVerdict::feasible, std::move(x), 0.0, iter};
    Mat y = clip_singular_values(x + p, t);
    p = x + p - y;
    Mat xn = cs.project(y + q);
    q = y + q - xn;
    gap = (xn - y).norm();
    x = std::move(xn);
    best_gap = std::min(best_gap, gap);
    if (gap <= tol_abs) return {ProbeVerdict::feasible, std::move(x), gap, iter};
    if (iter % opts.stall_window == 0) {
      const bool stalled = best_gap > prev_window_best * (1.0 - 1e-3);
      if (stalled && best_gap > opts.stall_separation * stall_floor)
        return {ProbeVerdict::infeasible, std::move(x), best_gap, iter};
      prev_window_best = best_gap;
    }
  }
  return {ProbeVerdict::indeterminate, std::move(x), best_gap, budget};
}

LiftingSolution min_norm_lifting(const LiftingProblem& problem, const LiftingOptions& opts) {
  LiftingSolution sol;
  sol.norm_X = problem.norm_X();
  sol.norm_X_compressed = problem.norm_X_compressed();
  sol.certified_infeasible_below = std::numeric_limits<double>::quiet_NaN();

  auto cs = build_constraints(problem, opts.constraints);
  sol.affine_infeasibility = cs->infeasibility();
  if (!cs->feasible()) {
    sol.status = SolveStatus::infeasible_affine;
    sol.Z = cs->particular();
    sol.achieved_norm = spectral_norm(sol.Z);
    auto rep = verify_solution(sol.Z, problem);
    sol.commutation_residual = rep.max_commutation;
    sol.dilation_residual = rep.dilation;
    sol.norm_gap = sol.achieved_norm - sol.norm_X;
    return sol;
  }

  const double lb = sol.norm_X_compressed;
  Mat Zp = cs->particular();
  const double up_witness = spectral_norm(Zp);

  Mat bestZ = Zp;
  double best_norm = up_witness;
  double hi = up_witness;   // certainly feasible: Zp lies in the affine set
  double lo = 0.0;
  long total_iterations = 0;
  int probes = 0;
  Mat warm = Zp;
  bool indeterminate_seen = false;

  auto run_probe = [&](double t, long budget = 0) -> ProbeVerdict {
    ++probes;
    double gap_tol =
        std::max(opts.tol * std::max(1.0, t), opts.gap_slack_fraction * (t - lb));
    ProbeResult pr = probe_feasibility(*cs, t, opts, &warm, gap_tol, budget);
    total_iterations += pr.iterations;
    sol.final_gap = pr.gap;
    warm = pr.Z;
    if (pr.verdict == ProbeVerdict::feasible) {
      double nz = spectral_norm(pr.Z);
      if (nz < best_norm) {
        bestZ = pr.Z;
        best_norm = nz;
      }
      hi = std::min(hi, std::max(nz, t));
    } else if (pr.verdict == ProbeVerdict::infeasible) {
      lo = std::max(lo, t);
      if (std::isnan(sol.certified_infeasible_below) || t > sol.certified_infeasible_below)
        sol.certified_infeasible_below = t;
    } else {
      indeterminate_seen = true;
    }
    return pr.verdict;
  };

  const double scale = std::max(1.0, lb);
  // first probe just above the theoretical optimum
  double t1 = lb * (1.0 + opts.first_probe_slack) + 1e-12;
  if (up_witness > t1 + opts.norm_tol * scale) {
    ProbeVerdict v1 = run_probe(t1);
    if (v1 != ProbeVerdict::feasible) {
      lo = std::max(lo, v1 == ProbeVerdict::infeasible ? t1 : lb);
      // spec bracket: inflate from ||X||, grow geometrically, capped by the witness
      double hi_try = std::max(opts.upper_inflation * std::max(lb, 1e-12), t1 * 1.5);
      while (hi_try < hi && probes < opts.max_probes && !indeterminate_seen) {
        ProbeVerdict v = run_probe(hi_try);
        if (v != ProbeVerdict::infeasible) break;
        lo = hi_try;
        hi_try *= 2.0;
      }
      while (hi - lo > opts.norm_tol * scale && probes < opts.max_probes &&
             !indeterminate_seen) {
        double mid = 0.5 * (hi + lo);
        run_probe(mid);
      }
    }
  }

  // descent refinement toward the lower bound: warm-started probes at a
  // geometrically shrinking slack, each with a bounded budget
  if (opts.refine_target_slack > 0.0 && best_norm > lb && lo < lb * (1.0 + 1e-15)) {
    const double target = lb + opts.refine_target_slack * scale;
    warm = bestZ;
    while (best_norm > target && probes < opts.max_probes) {
      double t = std::max(target, lb + 0.25 * (best_norm - lb));
      if (t >= best_norm) break;
      if (run_probe(t, opts.refine_iter_budget) != ProbeVerdict::feasible) break;
    }
  }

  sol.Z = bestZ;
  sol.achieved_norm = spectral_norm(sol.Z);
  sol.iterations = total_iterations;
  sol.probes = probes;
  sol.status = indeterminate_seen ? SolveStatus::indeterminate : SolveStatus::converged;
  sol.converged = !indeterminate_seen;
  auto rep = verify_solution(sol.Z, problem);
  sol.commutation_residual = rep.max_commutation;
  sol.dilation_residual = rep.dilation;
  sol.norm_gap = sol.achieved_norm - sol.norm_X;
  return sol;
}

ResidualReport verify_solution(const Mat& Z, const LiftingProblem& problem) {
  ConstraintData cd = make_constraint_data(problem);
  ResidualReport r{};
  for (std::size_t i = 0; i < cd.A.size(); ++i)
    r.max_commutation = std::max(r.max_commutation, spectral_norm(Mat(Z * cd.A[i] - cd.B[i] * Z)));
  r.dilation = spectral_norm(Mat(cd.dilation_lhs(Z) - cd.C));
  double nz = spectral_norm(Z);
  r.norm_minus_norm_X = nz - problem.norm_X();
  r.lower_bound_violation = std::max(0.0, problem.norm_X_compressed() - nz);
  return r;
}

IntertwinerPaths intertwiner_lifting(const DilationResult& dil_S, const DilationResult& dil_T,
                                     const Mat& X, DilationConstraintForm form,
                                     const LiftingOptions& opts) {
  IntertwinerPaths out;
  LiftingProblem direct = make_intertwiner_problem(dil_S, dil_T, X, form);
  out.direct = min_norm_lifting(direct, opts);

  // 2x2 trick: commutant problem for [[0,X],[0,0]] over the direct sum
  const Eigen::Index K1 = dil_S.V.dim(), K2 = dil_T.V.dim();
  const Eigen::Index h1 = dil_S.embed.cols(), h2 = dil_T.embed.cols();
  std::vector<Mat> blocks;
  for (int i = 1; i <= dil_S.V.n(); ++i) {
    Mat Vi = Mat::Zero(K1 + K2, K1 + K2);
    Vi.topLeftCorner(K1, K1) = dil_S.V.block(i);
    Vi.bottomRightCorner(K2, K2) = dil_T.V.block(i);
    blocks.push_back(std::move(Vi));
  }
  DilationResult block{RowOperator(std::move(blocks)),
                       Mat::Zero(K1 + K2, h1 + h2),
                       std::max(dil_S.trunc_degree, dil_T.trunc_degree),
                       DilationKind::assembled,
                       dil_S.multiplicity + dil_T.multiplicity,
                       0.0,
                       std::max(dil_S.purity_tail, dil_T.purity_tail),
                       std::nullopt,
                       std::nullopt};
  block.embed.topLeftCorner(K1, h1) = dil_S.embed;
  block.embed.bottomRightCorner(K2, h2) = dil_T.embed;
  block.embed_defect =
      (block.embed.adjoint() * block.embed - Mat::Identity(h1 + h2, h1 + h2)).norm();
  if (dil_S.mult_structure && dil_T.mult_structure &&
      dil_S.mult_structure->n == dil_T.mult_structure->n &&
      dil_S.mult_structure->d == dil_T.mult_structure->d)
    block.mult_structure = MultModelStructure{
        dil_S.mult_structure->n, dil_S.mult_structure->d,
        dil_S.mult_structure->alpha + dil_T.mult_structure->alpha};

  Mat Xblock = Mat::Zero(h1 + h2, h1 + h2);
  Xblock.topRightCorner(h1, h2) = X;
  LiftingProblem bp = make_commutant_problem(block, Xblock, form);
  out.via_block = min_norm_lifting(bp, opts);
  out.corner = out.via_block.Z.topRightCorner(K1, K2);
  out.norm_agreement = std::abs(out.direct.achieved_norm - out.via_block.achieved_norm);
  return out;
}

// ---------------------------------------------------------------------------
// Lemma structure diagnostics

StructureDiagnostics structure_diagnostics(const Mat& Z, const RowOperator& V,
                                           const LemmaStructureInput& input) {
  const WoldData& w = *input.wold;
  const Mat& F = w.shift_frame;
  const Mat& C = w.cuntz_basis;
  const Mat& EN = input.embed_N;
  const Eigen::Index alpha = w.wandering_basis.cols();
  TruncatedFock Fock(input.n, input.d_interior);
  const Eigen::Index nw = Fock.full_dim();
  const Eigen::Index nsym = Fock.sym_dim();

  StructureDiagnostics d{};
  d.upper_right_block = spectral_norm(Mat(F.adjoint() * Z * C));

  // word-factor symmetric columns (normalized zeta^k per wandering index)
  Mat Sym = Mat::Zero(nw * alpha, nsym * alpha);
  for (Eigen::Index ks = 0; ks < nsym; ++ks) {
    const MultiIndex& k = Fock.multi_at(ks);
    double coef = 1.0 / std::sqrt(static_cast<double>(multinomial_count(k)));
    Eigen::Index off = Fock.full_degree_offset(weight(k));
    Eigen::Index cnt = Fock.full_degree_count(weight(k));
    for (Eigen::Index r = 0; r < cnt; ++r) {
      if (word_exponents(Fock.word_at(off + r), Fock.n()) != k) continue;
      for (Eigen::Index j = 0; j < alpha; ++j)
        Sym((off + r) * alpha + j, ks * alpha + j) = coef;
    }
  }

  Mat TN = EN.adjoint() * Z * F;  // u x (nw alpha)
  d.anti_domain_block = spectral_norm(Mat(TN - (TN * Sym) * Sym.adjoint()));

  // U_j (P_N Z|_sym) = (P_N Z|_sym) M_j^(alpha)
  Mat Tsym = TN * Sym;  // u x (nsym alpha)
  d.sym_intertwine = 0.0;
  for (int j = 1; j <= input.n; ++j) {
    Mat Mj = multiplier_matrix(j, Fock);
    Mat Mf = Mat::Zero(nsym * alpha, nsym * alpha);
    for (Eigen::Index r = 0; r < nsym; ++r)
      for (Eigen::Index c = 0; c < nsym; ++c)
        if (Mj(r, c) != Complex(0.0))
          for (Eigen::Index a = 0; a < alpha; ++a) Mf(r * alpha + a, c * alpha + a) = Mj(r, c);
    d.sym_intertwine = std::max(
        d.sym_intertwine,
        spectral_norm(Mat(input.U_blocks[static_cast<std::size_t>(j - 1)] * Tsym - Tsym * Mf)));
  }

  // diagonal blocks commute with the respective summands (frame coordinates)
  Mat Y11 = F.adjoint() * Z * F;
  d.diag_shift_commutation = 0.0;
  for (int i = 1; i <= input.n; ++i) {
    Mat Li = left_creation(i, Fock);
    Mat Lf = Mat::Zero(nw * alpha, nw * alpha);
    for (Eigen::Index r = 0; r < nw; ++r)
      for (Eigen::Index c = 0; c < nw; ++c)
        if (Li(r, c) != Complex(0.0))
          for (Eigen::Index a = 0; a < alpha; ++a) Lf(r * alpha + a, c * alpha + a) = Li(r, c);
    d.diag_shift_commutation =
        std::max(d.diag_shift_commutation, spectral_norm(Mat(Y11 * Lf - Lf * Y11)));
  }

  Mat Y22 = C.adjoint() * Z * C;
  d.diag_cuntz_commutation = 0.0;
  for (int i = 1; i <= V.n(); ++i) {
    Mat Sf = C.adjoint() * V.block(i) * C;
    d.diag_cuntz_commutation =
        std::max(d.diag_cuntz_commutation, spectral_norm(Mat(Y22 * Sf - Sf * Y22)));
  }

  // spherical corner
  Mat A = EN.adjoint() * Z * EN;
  d.spherical_corner_comm = 0.0;
  for (const Mat& U : input.U_blocks) {
    d.spherical_corner_comm = std::max(d.spherical_corner_comm, spectral_norm(Mat(A * U - U * A)));
    d.spherical_corner_comm =
        std::max(d.spherical_corner_comm, spectral_norm(Mat(A * U.adjoint() - U.adjoint() * A)));
  }
  // complement of N inside the Cuntz part
  Mat B0 = C.adjoint() * EN;  // c x u
  Mat comp = null_basis(Mat(B0.adjoint()), 1e-8);  // directions in C-coords orthogonal to N
  d.spherical_offdiag = comp.cols() ? spectral_norm(Mat(EN.adjoint() * Z * (C * comp))) : 0.0;
  return d;
}

}  // namespace rowlift
