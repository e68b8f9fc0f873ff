#ifndef ROWLIFT_LIFTING_HPP
#define ROWLIFT_LIFTING_HPP

/// The commutant-lifting problem as spectral-norm minimization over an
/// affine subspace of operators: constraint assembly, the bisection +
/// Dykstra-projection solver, residual verification and the structure
/// diagnostics used by the lemma experiments.

#include <memory>
#include <optional>
#include <vector>

#include "rowlift/dilation.hpp"
#include "rowlift/fock.hpp"
#include "rowlift/row_operator.hpp"

namespace rowlift {

/// Orthonormal basis of the space of operators intertwining two copies
/// of the truncated multiplier row: alpha_row x alpha_col blocks of
/// polynomials in M_trunc. Basis elements are E_ab (x) M^k / ||M^k||_F,
/// pairwise orthonormal because distinct powers occupy disjoint entries.
class MultCommutantBasis {
 public:
  MultCommutantBasis(int n, int d, int alpha_row, int alpha_col);

  Eigen::Index q() const { return alpha_row_ * alpha_col_ * static_cast<Eigen::Index>(strips_.size()); }
  Eigen::Index rows() const { return alpha_row_ * block_; }
  Eigen::Index cols() const { return alpha_col_ * block_; }
  int alpha_row() const { return static_cast<int>(alpha_row_); }
  int alpha_col() const { return static_cast<int>(alpha_col_); }
  const TruncatedFock& fock() const { return fock_; }

  /// Coefficients <B_j, W> of the orthogonal projection of W onto the span.
  Vec extract(const Mat& W) const;
  /// Z = sum_j x_j B_j.
  Mat reconstruct(const Vec& x) const;
  /// Materialize one basis element (small sizes / tests).
  Mat basis_matrix(Eigen::Index j) const;

 private:
  struct Entry {
    Eigen::Index row, col;
    double value;  // normalized weight
  };
  TruncatedFock fock_;
  Eigen::Index alpha_row_, alpha_col_, block_;
  std::vector<std::vector<Entry>> strips_;  // one strip per multi-index power

  friend class BasisAffine;
};

enum class LiftingMode { commutant, intertwiner };
enum class DilationConstraintForm {
  co_extension,  // P_H Z = X P_H : top block row [X 0] in adapted coordinates
  compression    // P_H Z |_H = X : Sarason form, middle block only
};

struct LiftingProblem {
  RowOperator Ttilde;                  // dilation acting on the domain of Z
  std::optional<RowOperator> Stilde;   // intertwiner mode: dilation on the range side
  Mat embed;                           // K2 x h2, exactly isometric
  std::optional<Mat> embed_left;       // K1 x h1 (intertwiner)
  Mat X;                               // compressed operator in adapted coordinates
  Mat X_original;
  LiftingMode mode = LiftingMode::commutant;
  DilationConstraintForm form = DilationConstraintForm::co_extension;
  std::optional<MultModelStructure> structure_T, structure_S;
  double tol = 1e-8;

  double norm_X() const;           // || X_original ||
  double norm_X_compressed() const;
  double hypothesis_residual = 0.0;  // commutation / intertwining of the data
  double embed_defect_before = 0.0;  // isometry defect before orthonormalization

  const RowOperator& left() const { return Stilde ? *Stilde : Ttilde; }
  const Mat& left_embed() const { return embed_left ? *embed_left : embed; }
};

/// Build a commutant-lifting problem (Theorem-style) from a dilation.
/// A leaky embedding (truncated multiplier co-extensions) is
/// orthonormalized and X conjugated accordingly; the defect is recorded.
LiftingProblem make_commutant_problem(const DilationResult& dil, const Mat& X,
                                      DilationConstraintForm form =
                                          DilationConstraintForm::co_extension,
                                      double tol = 1e-8);

/// Intertwiner problem S_i X = X T_i against two dilations.
LiftingProblem make_intertwiner_problem(const DilationResult& dil_S,
                                        const DilationResult& dil_T, const Mat& X,
                                        DilationConstraintForm form =
                                            DilationConstraintForm::co_extension,
                                        double tol = 1e-8);

/// The infeasibility experiment: X = diag(1,-1) on the invariant C^2 of
/// the 3x3 commuting extension pair, lifted against the multiplier-model
/// co-extension of that pair at degree d. The subspace is only
/// semi-invariant, so the dilation constraint is posed in compression
/// (Sarason) form; the co-extension form is algebraically inconsistent
/// for this data.
LiftingProblem make_counterexample_problem(double r, double eps, int d,
                                           DilationConstraintForm form =
                                               DilationConstraintForm::compression,
                                           double tol = 1e-8);

/// The affine solution set { Z : L(Z) = c } with an exact orthogonal
/// projector. Engines: a dense one (explicit spectral analysis of the
/// stacked constraint map) and one parametrized by a multiplier-model
/// commutant basis.
class AffineConstraintSet {
 public:
  virtual ~AffineConstraintSet() = default;
  virtual Mat project(const Mat& W) const = 0;
  virtual const Mat& particular() const = 0;  // minimum-Frobenius solution
  virtual bool feasible() const = 0;
  virtual double infeasibility() const = 0;   // least-squares constraint residual
  virtual Eigen::Index solution_dim() const = 0;
  Eigen::Index z_rows = 0, z_cols = 0;
};

struct ConstraintOptions {
  double rank_tol = 1e-10;     // singular-value threshold on the constraint map
  Eigen::Index dense_cap = 2048;  // largest z_rows*z_cols for the dense engine
};

std::unique_ptr<AffineConstraintSet> build_constraints(const LiftingProblem& problem,
                                                       const ConstraintOptions& copts = {});

struct LiftingOptions {
  double tol = 1e-8;            // Dykstra gap target (scaled by max(1, ||X||))
  long max_iter = 20000;        // per feasibility probe
  int stall_window = 200;
  double stall_separation = 10.0;  // infeasible when gap stalls above this * tol
  double norm_tol = 1e-4;       // bisection bracket width target
  double first_probe_slack = 2e-4;
  double upper_inflation = 2.0; // initial bracket: upper = inflation * ||X||
  int max_probes = 64;
  // descent refinement toward the ||X|| lower bound (tight recovery
  // problems); 0 disables it
  double refine_target_slack = 0.0;
  long refine_iter_budget = 30000;
  // probes may relax the gap target to a fraction of the slack above the
  // lower bound; the returned point always satisfies the constraints
  // exactly and its norm is reported exactly
  double gap_slack_fraction = 0.2;
  ConstraintOptions constraints{};
};

enum class ProbeVerdict { feasible, infeasible, indeterminate };

struct ProbeResult {
  ProbeVerdict verdict;
  Mat Z;            // affine-side iterate (constraints satisfied exactly)
  double gap;       // final distance between the two projection tracks
  long iterations;
};

/// Feasibility of { ||Z|| <= t } intersect the affine set, by Dykstra
/// alternating projections. Optional warm start; gap_tol 0 means the
/// default opts.tol * max(1, t); iter_budget 0 means opts.max_iter.
ProbeResult probe_feasibility(const AffineConstraintSet& cs, double t,
                              const LiftingOptions& opts, const Mat* warm = nullptr,
                              double gap_tol = 0.0, long iter_budget = 0);

enum class SolveStatus { converged, infeasible_affine, indeterminate };

struct LiftingSolution {
  Mat Z;
  double achieved_norm = 0.0;
  double norm_X = 0.0;
  double norm_X_compressed = 0.0;
  double commutation_residual = 0.0;
  double dilation_residual = 0.0;
  double norm_gap = 0.0;  // achieved_norm - norm_X
  long iterations = 0;
  int probes = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::indeterminate;
  double final_gap = 0.0;
  double affine_infeasibility = 0.0;
  double certified_infeasible_below = 0.0;  // largest t with an infeasible verdict
};

LiftingSolution min_norm_lifting(const LiftingProblem& problem,
                                 const LiftingOptions& opts = {});

struct ResidualReport {
  double max_commutation;   // max_i ||Z T_i - S_i Z||
  double dilation;          // residual of the chosen dilation constraint form
  double norm_minus_norm_X;
  double lower_bound_violation;  // max(0, ||X_compressed|| - ||Z||)
};

ResidualReport verify_solution(const Mat& Z, const LiftingProblem& problem);

/// Direct and 2x2-block solutions of the intertwiner problem; the two
/// achieved norms must agree (cross-validation of the formulations).
struct IntertwinerPaths {
  LiftingSolution direct;
  LiftingSolution via_block;
  Mat corner;               // (1,2) corner of the block solution
  double norm_agreement;    // |direct.achieved_norm - via_block.achieved_norm|
};

IntertwinerPaths intertwiner_lifting(const DilationResult& dil_S,
                                     const DilationResult& dil_T, const Mat& X,
                                     DilationConstraintForm form,
                                     const LiftingOptions& opts = {});

/// Block-structure diagnostics of a solver output over a row-isometric
/// dilation, in the Wold coordinates: forbidden blocks, diagonal-block
/// commutation, the symmetric-part intertwining relation and the
/// spherical-corner commutant membership.
struct StructureDiagnostics {
  double upper_right_block;      // || P_shift Z P_cuntz ||
  double anti_domain_block;      // || P_N Z restricted to the antisymmetric part ||
  double sym_intertwine;         // || U_j (P_N Z|_sym) - (P_N Z|_sym) M_j^(alpha) ||
  double diag_shift_commutation; // || [P_shift Z P_shift, L-frame] ||
  double diag_cuntz_commutation; // || [P_cuntz Z P_cuntz, V-frame] ||
  double spherical_corner_comm;  // max_i max(||[A,U_i]||, ||[A,U_i*]||), A = P_N Z|_N
  double spherical_offdiag;      // || P_N Z (cuntz minus N) ||
};

struct LemmaStructureInput {
  const WoldData* wold;
  int n;
  int d_interior;
  Mat embed_N;                 // K x u_dim isometry onto the spherical summand
  std::vector<Mat> U_blocks;   // realized spherical unitary
};

StructureDiagnostics structure_diagnostics(const Mat& Z, const RowOperator& V,
                                           const LemmaStructureInput& input);

}  // namespace rowlift

#endif
