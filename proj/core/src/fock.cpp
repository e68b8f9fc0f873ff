#include "rowlift/fock.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rowlift {

void validate_word(const Word& w, int n) {
  for (int letter : w)
    if (letter < 1 || letter > n)
      throw std::invalid_argument("word letter " + std::to_string(letter) +
                                  " outside [1.." + std::to_string(n) + "]");
}

void validate_multi_index(const MultiIndex& k) {
  for (int e : k)
    if (e < 0) throw std::invalid_argument("multi-index entry negative");
}

int weight(const MultiIndex& k) {
  int s = 0;
  for (int e : k) s += e;
  return s;
}

MultiIndex word_exponents(const Word& w, int n) {
  validate_word(w, n);
  MultiIndex k(n, 0);
  for (int letter : w) ++k[letter - 1];
  return k;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw std::overflow_error("multinomial_count: result exceeds 64-bit range");
  return a * b;
}

// C(n, r) with overflow detection, by the incremental product formula.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // c * (n - r + i) / i is always integral at each step
    std::uint64_t num = n - r + i;
    std::uint64_t g = std::gcd(num, i);
    num /= g;
    std::uint64_t den = i / g;
    // den divides c now
    c = checked_mul(c / den, num);
  }
  return c;
}

}  // namespace

std::uint64_t multinomial_count(const MultiIndex& k) {
  validate_multi_index(k);
  // |k|!/(k_1!...k_n!) = prod_i C(k_1+...+k_i, k_i), each factor integral
  std::uint64_t total = 0, result = 1;
  for (int e : k) {
    total += static_cast<std::uint64_t>(e);
    result = checked_mul(result, binomial(total, static_cast<std::uint64_t>(e)));
  }
  return result;
}

TruncatedFock::TruncatedFock(int n, int d) : n_(n), d_(d) {
  if (n < 1) throw std::invalid_argument("TruncatedFock: need n >= 1");
  if (d < 0) throw std::invalid_argument("TruncatedFock: need d >= 0");
  full_offsets_.resize(d + 2);
  full_offsets_[0] = 0;
  Eigen::Index pw = 1;
  for (int j = 0; j <= d; ++j) {
    full_offsets_[j + 1] = full_offsets_[j] + pw;
    if (pw > (std::numeric_limits<Eigen::Index>::max() / (2 * n)))
      throw std::overflow_error("TruncatedFock: full dimension overflow");
    pw *= n;
  }
  full_dim_ = full_offsets_[d + 1];

  sym_offsets_.assign(1, 0);
  MultiIndex k(n, 0);
  for (int deg = 0; deg <= d; ++deg) {
    // enumerate compositions of deg into n parts, variable-1-major
    std::fill(k.begin(), k.end(), 0);
    k[0] = deg;
    while (true) {
      multis_.push_back(k);
      // next composition: move one unit from the rightmost positive
      // entry that is not the last, standard colex-style walk
      int i = n - 2;
      while (i >= 0 && k[i] == 0) --i;
      if (i < 0) break;
      int rest = 0;
      for (int j = i + 1; j < n; ++j) {
        rest += k[j];
        k[j] = 0;
      }
      --k[i];
      k[i + 1] = rest + 1;
    }
    sym_offsets_.push_back(static_cast<Eigen::Index>(multis_.size()));
  }
  for (Eigen::Index idx = 0; idx < static_cast<Eigen::Index>(multis_.size()); ++idx)
    multi_rank_[multis_[idx]] = idx;
}

Eigen::Index TruncatedFock::word_rank(const Word& w) const {
  validate_word(w, n_);
  int deg = static_cast<int>(w.size());
  if (deg > d_) throw std::out_of_range("word_rank: degree above truncation");
  Eigen::Index r = 0;
  for (int letter : w) r = r * n_ + (letter - 1);
  return full_offsets_[deg] + r;
}

Word TruncatedFock::word_at(Eigen::Index idx) const {
  if (idx < 0 || idx >= full_dim_) throw std::out_of_range("word_at: index out of range");
  int deg = word_degree(idx);
  Eigen::Index r = idx - full_offsets_[deg];
  Word w(deg);
  for (int p = deg - 1; p >= 0; --p) {
    w[p] = static_cast<int>(r % n_) + 1;
    r /= n_;
  }
  return w;
}

int TruncatedFock::word_degree(Eigen::Index idx) const {
  if (idx < 0 || idx >= full_dim_) throw std::out_of_range("word_degree: index out of range");
  int deg = 0;
  while (full_offsets_[deg + 1] <= idx) ++deg;
  return deg;
}

Eigen::Index TruncatedFock::full_degree_offset(int deg) const {
  if (deg < 0 || deg > d_) throw std::out_of_range("full_degree_offset");
  return full_offsets_[deg];
}

Eigen::Index TruncatedFock::full_degree_count(int deg) const {
  return full_offsets_[deg + 1] - full_offsets_[deg];
}

Eigen::Index TruncatedFock::multi_rank(const MultiIndex& k) const {
  validate_multi_index(k);
  if (static_cast<int>(k.size()) != n_)
    throw std::invalid_argument("multi_rank: wrong arity");
  auto it = multi_rank_.find(k);
  if (it == multi_rank_.end())
    throw std::out_of_range("multi_rank: weight above truncation degree");
  return it->second;
}

const MultiIndex& TruncatedFock::multi_at(Eigen::Index idx) const {
  if (idx < 0 || idx >= sym_dim()) throw std::out_of_range("multi_at");
  return multis_[static_cast<std::size_t>(idx)];
}

int TruncatedFock::multi_degree(Eigen::Index idx) const { return weight(multi_at(idx)); }

Eigen::Index TruncatedFock::sym_degree_offset(int deg) const {
  if (deg < 0 || deg > d_) throw std::out_of_range("sym_degree_offset");
  return sym_offsets_[deg];
}

Mat TruncatedFock::full_degree_cap(int deg) const {
  Mat P = Mat::Zero(full_dim_, full_dim_);
  Eigen::Index top = full_offsets_[std::min(deg, d_) + 1];
  P.topLeftCorner(top, top).setIdentity();
  return P;
}

Vec sym_basis_vector(const MultiIndex& k, const TruncatedFock& F) {
  validate_multi_index(k);
  if (static_cast<int>(k.size()) != F.n())
    throw std::invalid_argument("sym_basis_vector: wrong arity");
  if (weight(k) > F.d())
    throw std::out_of_range("sym_basis_vector: degree above truncation");
  const double coeff = 1.0 / static_cast<double>(multinomial_count(k));
  Vec v = Vec::Zero(F.full_dim());
  // walk all words of length |k|, pick those with exponent vector k
  int deg = weight(k);
  Eigen::Index off = F.full_degree_offset(deg);
  Eigen::Index cnt = F.full_degree_count(deg);
  for (Eigen::Index r = 0; r < cnt; ++r) {
    Word w = F.word_at(off + r);
    if (word_exponents(w, F.n()) == k) v[off + r] = coeff;
  }
  return v;
}

Mat left_creation(int i, const TruncatedFock& F) {
  if (i < 1 || i > F.n()) throw std::invalid_argument("left_creation: letter out of range");
  Mat L = Mat::Zero(F.full_dim(), F.full_dim());
  for (Eigen::Index idx = 0; idx < F.full_dim(); ++idx) {
    Word w = F.word_at(idx);
    if (static_cast<int>(w.size()) == F.d()) continue;  // truncation boundary
    Word iw;
    iw.reserve(w.size() + 1);
    iw.push_back(i);
    iw.insert(iw.end(), w.begin(), w.end());
    L(F.word_rank(iw), idx) = 1.0;
  }
  return L;
}

Mat symmetric_projection(const TruncatedFock& F) {
  Mat P = Mat::Zero(F.full_dim(), F.full_dim());
  for (Eigen::Index s = 0; s < F.sym_dim(); ++s) {
    Vec z = sym_basis_vector(F.multi_at(s), F);
    double nrm2 = z.squaredNorm();
    P.noalias() += (z * z.adjoint()) / nrm2;
  }
  return P;
}

Mat multiplier_matrix(int i, const TruncatedFock& F) {
  if (i < 1 || i > F.n()) throw std::invalid_argument("multiplier_matrix: letter out of range");
  Mat M = Mat::Zero(F.sym_dim(), F.sym_dim());
  for (Eigen::Index s = 0; s < F.sym_dim(); ++s) {
    const MultiIndex& k = F.multi_at(s);
    int kw = weight(k);
    if (kw == F.d()) continue;  // annihilate top degree
    MultiIndex kp = k;
    ++kp[i - 1];
    M(F.multi_rank(kp), s) = std::sqrt(double(k[i - 1] + 1) / double(kw + 1));
  }
  return M;
}

std::vector<Mat> multiplier_row(const TruncatedFock& F) {
  std::vector<Mat> out;
  out.reserve(F.n());
  for (int i = 1; i <= F.n(); ++i) out.push_back(multiplier_matrix(i, F));
  return out;
}

Complex monomial_value(const Vec& lambda, const MultiIndex& k) {
  if (lambda.size() != static_cast<Eigen::Index>(k.size()))
    throw std::invalid_argument("monomial_value: arity mismatch");
  Complex v = 1.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    for (int p = 0; p < k[i]; ++p) v *= lambda[i];
  return v;
}

Vec kernel_vector(const Vec& lambda, const TruncatedFock& F) {
  if (lambda.size() != F.n()) throw std::invalid_argument("kernel_vector: arity mismatch");
  if (lambda.norm() >= 1.0)
    throw std::domain_error("kernel_vector: point outside the open unit ball");
  Vec v(F.sym_dim());
  Vec lbar = lambda.conjugate();
  for (Eigen::Index s = 0; s < F.sym_dim(); ++s) {
    const MultiIndex& k = F.multi_at(s);
    v[s] = monomial_value(lbar, k) * std::sqrt(static_cast<double>(multinomial_count(k)));
  }
  return v;
}

Complex kernel_value(const Vec& lambda, const Vec& mu) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("kernel_value: arity mismatch");
  if (lambda.norm() >= 1.0 || mu.norm() >= 1.0)
    throw std::domain_error("kernel_value: point outside the open unit ball");
  Complex ip = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) ip += lambda[i] * std::conj(mu[i]);
  return 1.0 / (1.0 - ip);
}

}  // namespace rowlift
