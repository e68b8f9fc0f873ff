#ifndef ROWLIFT_ROW_OPERATOR_HPP
#define ROWLIFT_ROW_OPERATOR_HPP

/// Row contractions T = [T_1 ... T_n] as first-class objects: norms,
/// commutativity, defects, purity, dilation-relation predicates,
/// von Neumann inequality experiments and the small commuting pair /
/// 3x3 extension pair used by the infeasibility experiment.

#include <optional>
#include <vector>

#include "rowlift/fock.hpp"
#include "rowlift/linalg.hpp"

namespace rowlift {

class RowOperator {
 public:
  RowOperator() : dim_(0) {}  // empty tuple, placeholder state
  RowOperator(std::vector<Mat> blocks);

  int n() const { return static_cast<int>(blocks_.size()); }
  Eigen::Index dim() const { return dim_; }
  const Mat& block(int i) const { return blocks_.at(static_cast<std::size_t>(i - 1)); }  // 1-based
  const std::vector<Mat>& blocks() const { return blocks_; }

  /// The m x (n m) block row [T_1 ... T_n].
  Mat flat_row() const;
  /// The (n m) x m block column [T_1; ...; T_n].
  Mat flat_col() const;

  static RowOperator zero(int n, Eigen::Index dim);

 private:
  std::vector<Mat> blocks_;
  Eigen::Index dim_;
};

/// Largest singular value of the block row [T_1 ... T_n].
double row_norm(const RowOperator& T);

struct CommutativityReport {
  bool commuting;
  double max_residual;  // max over i<j of ||T_i T_j - T_j T_i||
};
CommutativityReport is_commuting(const RowOperator& T, double tol = 1e-10);

struct DefectData {
  Mat defect_op;    // (I - T*T)^{1/2} on H^(n), PSD Hermitian
  int defect_rank;  // rank at tolerance
  Mat range_basis;  // orthonormal columns spanning the defect space
};

/// Defect of a row contraction. Throws std::domain_error when
/// row_norm(T) > 1 + tol.
DefectData defect(const RowOperator& T, double tol = 1e-10);

/// Sum over |w|=k of T_w T_w*, computed by Phi^k(I) with
/// Phi(A) = sum_i T_i A T_i*.
Mat phi_power(const RowOperator& T, int k, const Mat& seed);

/// ||Phi^k(I)||; equals 1 at k=0 and is non-increasing in k for
/// row contractions.
double purity_index(const RowOperator& T, int k);

/// Ordered product T_{i_1} ... T_{i_k} for a word w = i_1...i_k.
Mat apply_word(const RowOperator& T, const Word& w);

/// T^k for a multi-index, via any representative word; requires T
/// commuting (residual above tol throws std::invalid_argument).
Mat apply_multiindex(const RowOperator& T, const MultiIndex& k, double tol = 1e-10);

struct PolynomialSpec {
  bool commuting;
  // commuting polynomials use multi-indices, free ones use words
  std::vector<std::pair<MultiIndex, Complex>> sym_terms;
  std::vector<std::pair<Word, Complex>> free_terms;

  static PolynomialSpec symmetric(std::vector<std::pair<MultiIndex, Complex>> terms);
  static PolynomialSpec free(std::vector<std::pair<Word, Complex>> terms);
  int degree() const;
};

Mat poly_eval(const RowOperator& T, const PolynomialSpec& p, double tol = 1e-10);

/// Evaluate p on the model tuple: multipliers M_{z_i} for commuting p,
/// left creations L_i for free p, truncated at degree d.
Mat poly_eval_model(const PolynomialSpec& p, int n, int d);

struct VonNeumannReport {
  double lhs;     // ||p(T)||
  double rhs_d;   // ||p(model truncated at d)||
  double rhs_d1;  // ||p(model truncated at d+1)|| (monotone witness)
  double margin;  // rhs_d - lhs
  bool pass;      // lhs <= rhs_d + tol
};

/// Drury / Popescu von Neumann experiment. Commuting p is checked
/// against the multiplier model, free p against the creation model.
VonNeumannReport von_neumann_check(const RowOperator& T, const PolynomialSpec& p, int d,
                                   double tol = 1e-10);

struct DilationRelationReport {
  bool extension;
  bool co_extension;
  bool sarason_dilation;
  double extension_residual;   // ||B E - E A||
  double coextension_residual; // ||E* B - A E*||
  double power_residual;       // max_k ||E* B^k E - A^k||
};

/// Relation of B on K to A on H through an isometric embedding E: H -> K.
DilationRelationReport dilation_relation(const Mat& A, const Mat& B, const Mat& embed,
                                         int k_max, double tol = 1e-10);

/// The commuting pair T on C^2, the commuting extension pair B on C^3
/// and the unitary X = diag(1,-1) from the infeasibility experiment.
struct CounterexampleOperators {
  RowOperator T;   // on C^2
  RowOperator B;   // on C^3, extends T on span{e2,e3}
  Mat X;           // 2x2 unitary commuting with T
  Mat embed_T_in_B;  // canonical isometry C^2 -> C^3 (columns e2, e3)
  double row_norm_B;
  bool contraction;  // row_norm_B <= 1, checked not assumed
};
CounterexampleOperators counterexample_operators(double r, double eps);

/// The two affine commutator entries in y = y_11 and their minimax.
struct ObstructionReport {
  double a;  // |eps (eps - r)|, slope of the first function
  double b;  // eps^2, slope of the second
  double zero_first;   // zero of (y-1) eps (eps-r), always 1
  double zero_second;  // zero of (y+1) eps^2, always -1
  double y_star;       // argmin of max(|y-1| a, |y+1| b)
  double minimax;      // the positive obstruction margin 2ab/(a+b)
  double first_at(double y) const;
  double second_at(double y) const;
};
ObstructionReport counterexample_obstruction(double r, double eps);

}  // namespace rowlift

#endif
