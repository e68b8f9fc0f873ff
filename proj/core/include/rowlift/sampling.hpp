#ifndef ROWLIFT_SAMPLING_HPP
#define ROWLIFT_SAMPLING_HPP

/// Seeded random instance generators shared by the property tests, the
/// CLI sweeps and the acceptance experiments.

#include <random>

#include "rowlift/pick.hpp"
#include "rowlift/row_operator.hpp"

namespace rowlift {

using Rng = std::mt19937_64;

/// Entries (g + i g) / sqrt(2), standard complex Gaussian.
Mat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Simultaneously diagonalizable commuting tuple S D_i S^{-1}, rescaled
/// to the requested row norm. The similarity is kept well conditioned.
RowOperator random_commuting_row_contraction(int n, Eigen::Index m, double target_row_norm,
                                             Rng& rng);

/// Independent Gaussian blocks rescaled to the requested row norm
/// (generically non-commuting).
RowOperator random_row_contraction(int n, Eigen::Index m, double target_row_norm, Rng& rng);

/// Random commuting polynomial with max_terms terms of degree <= max_degree.
PolynomialSpec random_symmetric_poly(int n, int max_degree, int max_terms, Rng& rng);

/// Random free polynomial (words).
PolynomialSpec random_free_poly(int n, int max_degree, int max_terms, Rng& rng);

/// A random polynomial in the tuple (commutes with it by construction).
Mat random_polynomial_of(const RowOperator& T, int max_degree, Rng& rng);

/// Random scalar Pick system with nodes of norm <= node_radius and
/// targets scaled so that ||X|| is around norm_center (crosses 1).
PickSystem random_scalar_pick_system(int n, int count, double node_radius, Rng& rng);

/// Random point on the unit sphere of C^n.
Vec random_sphere_point(int n, Rng& rng);

}  // namespace rowlift

#endif
