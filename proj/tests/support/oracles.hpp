#ifndef ROWLIFT_TESTS_ORACLES_HPP
#define ROWLIFT_TESTS_ORACLES_HPP

// Independent oracles for the property tests. Everything here is a
// brute-force or closed-form route that deliberately avoids the code
// paths it is used to check.

#include <cstdint>
#include <functional>
#include <vector>

#include "rowlift/fock.hpp"
#include "rowlift/linalg.hpp"

namespace oracles {

using rowlift::Complex;
using rowlift::Mat;
using rowlift::MultiIndex;
using rowlift::Vec;
using rowlift::Word;

// All words over {1..n} of exactly the given length.
inline std::vector<Word> enumerate_words(int n, int length) {
  std::vector<Word> out;
  Word w(static_cast<std::size_t>(length), 1);
  std::int64_t total = 1;
  for (int i = 0; i < length; ++i) total *= n;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t r = idx;
    for (int p = length - 1; p >= 0; --p) {
      w[static_cast<std::size_t>(p)] = static_cast<int>(r % n) + 1;
      r /= n;
    }
    out.push_back(w);
  }
  return out;
}

// |P_k| by brute-force word enumeration: count words w with w(lambda) = lambda^k.
inline std::uint64_t count_words_with_exponents(const MultiIndex& k) {
  int n = static_cast<int>(k.size());
  int len = 0;
  for (int e : k) len += e;
  std::uint64_t count = 0;
  for (const Word& w : enumerate_words(n, len))
    if (rowlift::word_exponents(w, n) == k) ++count;
  return count;
}

// Golden-section minimization of a unimodal function on [a, b].
inline double golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-12) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Basis of the commutant of the truncated unilateral shift on C^{d+1}:
// lower-triangular Toeplitz matrices e_j -> S^j.
inline std::vector<Mat> shift_commutant_basis(int d) {
  std::vector<Mat> out;
  for (int j = 0; j <= d; ++j) {
    Mat B = Mat::Zero(d + 1, d + 1);
    for (int c = 0; c + j <= d; ++c) B(c + j, c) = 1.0;
    out.push_back(B);
  }
  return out;
}

// Joint commutant of diagonal normal tuples: entry (s,t) is free iff the
// joint eigenvalues coincide. Returns the 0/1 pattern.
inline Eigen::MatrixXi diagonal_joint_commutant_pattern(const std::vector<Vec>& eigs,
                                                        double tol = 1e-12) {
  const Eigen::Index N = static_cast<Eigen::Index>(eigs.size());
  Eigen::MatrixXi pat(N, N);
  for (Eigen::Index s = 0; s < N; ++s)
    for (Eigen::Index t = 0; t < N; ++t)
      pat(s, t) = ((eigs[static_cast<std::size_t>(s)] - eigs[static_cast<std::size_t>(t)]).norm() <= tol) ? 1 : 0;
  return pat;
}

}  // namespace oracles

#endif
