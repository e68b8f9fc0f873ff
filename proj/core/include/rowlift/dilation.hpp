#ifndef ROWLIFT_DILATION_HPP
#define ROWLIFT_DILATION_HPP

/// Explicit truncated dilation constructions: the minimal isometric
/// co-extension of a row contraction, the multiplier-model co-extension
/// of a pure commuting row contraction, spherical unitaries, assembled
/// model dilations and Wold decomposition data of a row isometry.

#include <optional>
#include <vector>

#include "rowlift/fock.hpp"
#include "rowlift/row_operator.hpp"

namespace rowlift {

enum class DilationKind { isometric_coext, arveson_pure, assembled };

/// Bookkeeping for assembled dilations M^(alpha) (+) U.
struct SummandInfo {
  int alpha;              // copies of the truncated multiplier row
  Eigen::Index m_block;   // dimension of one truncated H^2_n copy
  Eigen::Index u_dim;     // dimension of the spherical part
};

/// Descriptor of a dilation whose commutant is the matrix algebra over
/// polynomials in the truncated multiplier row (used by the lifting
/// solver's structured path).
struct MultModelStructure {
  int n;
  int d;
  int alpha;
};

struct DilationResult {
  RowOperator V;      // the dilated tuple on K
  Mat embed;          // K x dim(H)
  int trunc_degree;
  DilationKind kind;
  int multiplicity;   // defect rank alpha, when applicable

  double embed_defect;  // || embed* embed - I ||
  double purity_tail;   // || Phi^{d+1}(I) || for the generating tuple
  std::optional<SummandInfo> summands;
  std::optional<MultModelStructure> mult_structure;
};

/// Minimal isometric co-extension on H (+) (F_n^{<= d-1} (x) D) with D
/// the defect range. Top Fock degree is annihilated; the construction
/// is an exact co-extension per block.
DilationResult frazho_bunce(const RowOperator& T, int d, double tol = 1e-10);

struct ArvesonOptions {
  double purity_tol = 1e-8;        // tail above this is reported, not fatal
  double commutation_tol = 1e-10;
};

/// Co-extension of a commuting row contraction to the truncated
/// multiplier row of multiplicity alpha = rank(I - sum T_i T_i*)^{1/2}.
/// The embedding W satisfies ||W h||^2 = ||h||^2 - <Phi^{d+1}(I) h, h>
/// exactly, so it is an isometry up to the purity tail.
DilationResult arveson_pure(const RowOperator& T, int d, const ArvesonOptions& opts = {});

struct SphericalUnitary {
  std::vector<Vec> points;          // joint eigenvalue tuples, ||mu|| = 1
  std::vector<int> multiplicities;  // same length as points

  Eigen::Index dim() const;
  int n() const;
};

/// Diagonal realization U_i = diag(mu_i over points, with multiplicity);
/// commuting normal blocks with sum U_i U_i* = I exactly.
RowOperator spherical_unitary_realize(const SphericalUnitary& S, double sphere_tol = 1e-12);

/// Block-diagonal M_trunc^(alpha) (+) U with summand bookkeeping.
/// U may be empty (alpha > 0) or alpha may be 0 (U alone).
DilationResult assemble_dilation(int n, int alpha, const SphericalUnitary& U, int d);

struct WoldData {
  Mat wandering_basis;        // K x dim(M), orthonormal, inside the interior
  Eigen::Index shift_part_dim;
  Eigen::Index cuntz_part_dim;
  Mat shift_frame;            // columns V_w m_j, word-major then wandering index
  std::vector<Word> frame_words;  // word per frame column group
  Mat cuntz_basis;            // orthonormal basis of interior minus shift part
  double isometry_residual;   // max_ij ||P_int (V_i* V_j - delta_ij I) P_int||
  double frame_residual;      // || frame* frame - I ||
  double wandering_residual;  // max_i || V_i* wandering ||
};

/// Wold decomposition data of a truncated row isometry, computed on the
/// leading `interior_dim` coordinates where V acts isometrically.
/// Words up to length d_interior generate the shift part.
WoldData wold_data(const RowOperator& V, Eigen::Index interior_dim, int d_interior,
                   double tol = 1e-8);

}  // namespace rowlift

#endif
