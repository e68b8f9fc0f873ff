#ifndef ROWLIFT_FOCK_HPP
#define ROWLIFT_FOCK_HPP

/// Truncated full Fock space F_n (words of length <= d) and symmetric
/// Fock / Drury-Arveson space H^2_n (multi-indices of weight <= d),
/// with the creation, multiplication and kernel machinery realized as
/// dense complex matrices.
///
/// Basis order everywhere: degree-major, and within a fixed degree the
/// variable-1-major order (z1^2 before z1 z2 before z2^2), matching the
/// base-n order of words. Truncation is then a leading principal block.

#include <cstdint>
#include <map>
#include <vector>

#include "rowlift/linalg.hpp"

namespace rowlift {

/// A word in the free semigroup on n letters; letters are 1-based.
using Word = std::vector<int>;
/// An exponent multi-index k in N_0^n.
using MultiIndex = std::vector<int>;

void validate_word(const Word& w, int n);
void validate_multi_index(const MultiIndex& k);
int weight(const MultiIndex& k);  // |k| = sum of entries

/// Exponent vector of a word: w(lambda) = lambda^k.
MultiIndex word_exponents(const Word& w, int n);

/// |P_k| = |k|! / (k_1! ... k_n!), exact in 64-bit integer arithmetic.
/// Throws std::overflow_error instead of wrapping.
std::uint64_t multinomial_count(const MultiIndex& k);

class TruncatedFock {
 public:
  TruncatedFock(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  Eigen::Index full_dim() const { return full_dim_; }
  Eigen::Index sym_dim() const { return static_cast<Eigen::Index>(multis_.size()); }

  // -- word basis (full Fock), index arithmetic, degree-major
  Eigen::Index word_rank(const Word& w) const;
  Word word_at(Eigen::Index idx) const;
  int word_degree(Eigen::Index idx) const;
  Eigen::Index full_degree_offset(int deg) const;  // first index of that degree
  Eigen::Index full_degree_count(int deg) const;   // n^deg

  // -- multi-index basis (symmetric Fock)
  Eigen::Index multi_rank(const MultiIndex& k) const;
  const MultiIndex& multi_at(Eigen::Index idx) const;
  int multi_degree(Eigen::Index idx) const;
  Eigen::Index sym_degree_offset(int deg) const;

  /// Projection onto full-Fock degrees <= deg (diagonal 0/1 matrix).
  Mat full_degree_cap(int deg) const;

 private:
  int n_, d_;
  Eigen::Index full_dim_;
  std::vector<Eigen::Index> full_offsets_;  // per degree
  std::vector<MultiIndex> multis_;
  std::vector<Eigen::Index> sym_offsets_;
  std::map<MultiIndex, Eigen::Index> multi_rank_;
};

/// zeta^k in full-Fock coordinates: coefficient 1/|P_k| on each word in
/// P_k. Squared norm is 1/|P_k|.
Vec sym_basis_vector(const MultiIndex& k, const TruncatedFock& F);

/// Left creation operator L_i on the truncated full Fock space:
/// xi_w -> xi_{iw} for |w| < d, and 0 for |w| = d.
Mat left_creation(int i, const TruncatedFock& F);

/// Orthogonal projection of the truncated full Fock space onto the span
/// of the symmetric vectors {zeta^k : |k| <= d}.
Mat symmetric_projection(const TruncatedFock& F);

/// Coordinate multiplier M_{z_i} on truncated H^2_n in the orthonormal
/// basis e_k = zeta^k / ||zeta^k||:
///   e_k -> sqrt((k_i+1)/(|k|+1)) e_{k+e_i} for |k| < d, 0 for |k| = d.
Mat multiplier_matrix(int i, const TruncatedFock& F);

/// All n multipliers as a vector.
std::vector<Mat> multiplier_row(const TruncatedFock& F);

/// Truncated kernel vector k_lambda in the orthonormal e_k basis:
/// coordinates conj(lambda)^k sqrt(|P_k|). Requires ||lambda|| < 1.
Vec kernel_vector(const Vec& lambda, const TruncatedFock& F);

/// Drury-Arveson kernel 1/(1 - <lambda,mu>), <lambda,mu> = sum l_i conj(m_i).
Complex kernel_value(const Vec& lambda, const Vec& mu);

/// lambda^k as a complex scalar.
Complex monomial_value(const Vec& lambda, const MultiIndex& k);

}  // namespace rowlift

#endif
