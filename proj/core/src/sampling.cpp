#include "rowlift/sampling.hpp"

#include <stdexcept>

namespace rowlift {

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  Mat A(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) A(r, c) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  return A;
}

RowOperator random_commuting_row_contraction(int n, Eigen::Index m, double target_row_norm,
                                             Rng& rng) {
  if (target_row_norm < 0.0)
    throw std::invalid_argument("random_commuting_row_contraction: negative norm");
  Mat S = Mat::Identity(m, m) + 0.35 * random_matrix(m, m, rng);
  Mat Sinv = S.inverse();
  std::vector<Mat> blocks;
  std::normal_distribution<double> g;
  for (int i = 0; i < n; ++i) {
    Vec diag(m);
    for (Eigen::Index j = 0; j < m; ++j) diag[j] = Complex(g(rng), g(rng)) / std::sqrt(2.0);
    blocks.push_back(S * diag.asDiagonal() * Sinv);
  }
  RowOperator T(std::move(blocks));
  double rn = row_norm(T);
  if (rn == 0.0) return T;
  double scale = target_row_norm / rn;
  std::vector<Mat> scaled;
  for (const Mat& b : T.blocks()) scaled.push_back(scale * b);
  return RowOperator(std::move(scaled));
}

RowOperator random_row_contraction(int n, Eigen::Index m, double target_row_norm, Rng& rng) {
  std::vector<Mat> blocks;
  for (int i = 0; i < n; ++i) blocks.push_back(random_matrix(m, m, rng));
  RowOperator T(std::move(blocks));
  double rn = row_norm(T);
  double scale = rn > 0.0 ? target_row_norm / rn : 0.0;
  std::vector<Mat> scaled;
  for (const Mat& b : T.blocks()) scaled.push_back(scale * b);
  return RowOperator(std::move(scaled));
}

namespace {

MultiIndex random_multi(int n, int max_degree, Rng& rng) {
  std::uniform_int_distribution<int> dd(0, max_degree);
  int deg = dd(rng);
  MultiIndex k(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<int> pos(0, n - 1);
  for (int p = 0; p < deg; ++p) ++k[static_cast<std::size_t>(pos(rng))];
  return k;
}

Complex random_coeff(Rng& rng) {
  std::normal_distribution<double> g;
  return Complex(g(rng), g(rng)) / std::sqrt(2.0);
}

}  // namespace

PolynomialSpec random_symmetric_poly(int n, int max_degree, int max_terms, Rng& rng) {
  std::uniform_int_distribution<int> tc(1, max_terms);
  int terms = tc(rng);
  std::vector<std::pair<MultiIndex, Complex>> list;
  for (int t = 0; t < terms; ++t) list.emplace_back(random_multi(n, max_degree, rng), random_coeff(rng));
  return PolynomialSpec::symmetric(std::move(list));
}

PolynomialSpec random_free_poly(int n, int max_degree, int max_terms, Rng& rng) {
  std::uniform_int_distribution<int> tc(1, max_terms);
  std::uniform_int_distribution<int> dd(0, max_degree);
  std::uniform_int_distribution<int> letter(1, n);
  int terms = tc(rng);
  std::vector<std::pair<Word, Complex>> list;
  for (int t = 0; t < terms; ++t) {
    Word w(static_cast<std::size_t>(dd(rng)));
    for (int& l : w) l = letter(rng);
    list.emplace_back(std::move(w), random_coeff(rng));
  }
  return PolynomialSpec::free(std::move(list));
}

Mat random_polynomial_of(const RowOperator& T, int max_degree, Rng& rng) {
  PolynomialSpec p = random_symmetric_poly(T.n(), max_degree, 4, rng);
  return poly_eval(T, p);
}

PickSystem random_scalar_pick_system(int n, int count, double node_radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> nodes;
  while (static_cast<int>(nodes.size()) < count) {
    Vec x = random_matrix(n, 1, rng).col(0);
    double nrm = x.norm();
    if (nrm == 0.0) continue;
    x *= (node_radius * std::pow(u(rng), 1.0 / n)) / nrm;
    bool distinct = true;
    for (const Vec& y : nodes)
      if ((x - y).norm() < 1e-3) distinct = false;
    if (distinct) nodes.push_back(std::move(x));
  }
  std::vector<Complex> values;
  for (int i = 0; i < count; ++i) values.push_back(random_coeff(rng));
  return PickSystem::scalar_system(std::move(nodes), std::move(values));
}

Vec random_sphere_point(int n, Rng& rng) {
  Vec x = random_matrix(n, 1, rng).col(0);
  double nrm = x.norm();
  while (nrm < 1e-8) {
    x = random_matrix(n, 1, rng).col(0);
    nrm = x.norm();
  }
  return x / nrm;
}

}  // namespace rowlift
