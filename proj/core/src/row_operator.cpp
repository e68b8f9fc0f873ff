#include "rowlift/row_operator.hpp"

#include <stdexcept>

namespace rowlift {

RowOperator::RowOperator(std::vector<Mat> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("RowOperator: needs at least one block");
  dim_ = blocks_[0].rows();
  for (const Mat& b : blocks_)
    if (b.rows() != dim_ || b.cols() != dim_)
      throw std::invalid_argument("RowOperator: blocks must be square of equal dimension");
}

Mat RowOperator::flat_row() const {
  Mat R(dim_, dim_ * n());
  for (int i = 0; i < n(); ++i) R.middleCols(i * dim_, dim_) = blocks_[i];
  return R;
}

Mat RowOperator::flat_col() const {
  Mat C(dim_ * n(), dim_);
  for (int i = 0; i < n(); ++i) C.middleRows(i * dim_, dim_) = blocks_[i];
  return C;
}

RowOperator RowOperator::zero(int n, Eigen::Index dim) {
  return RowOperator(std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(dim, dim)));
}

double row_norm(const RowOperator& T) { return spectral_norm(T.flat_row()); }

CommutativityReport is_commuting(const RowOperator& T, double tol) {
  double worst = 0.0;
  for (int i = 1; i <= T.n(); ++i)
    for (int j = i + 1; j <= T.n(); ++j)
      worst = std::max(worst,
                       spectral_norm(T.block(i) * T.block(j) - T.block(j) * T.block(i)));
  return {worst <= tol, worst};
}

DefectData defect(const RowOperator& T, double tol) {
  double rn = row_norm(T);
  if (rn > 1.0 + tol)
    throw std::domain_error("defect: row norm " + std::to_string(rn) + " exceeds 1");
  Mat R = T.flat_row();
  Mat gram = Mat::Identity(R.cols(), R.cols()) - R.adjoint() * R;
  DefectData out;
  out.defect_op = psd_sqrt(gram);
  out.range_basis = range_basis(out.defect_op, 1e-8);
  out.defect_rank = static_cast<int>(out.range_basis.cols());
  return out;
}

Mat phi_power(const RowOperator& T, int k, const Mat& seed) {
  if (k < 0) throw std::invalid_argument("phi_power: negative power");
  Mat A = seed;
  for (int step = 0; step < k; ++step) {
    Mat next = Mat::Zero(T.dim(), T.dim());
    for (int i = 1; i <= T.n(); ++i) next.noalias() += T.block(i) * A * T.block(i).adjoint();
    A = std::move(next);
  }
  return A;
}

double purity_index(const RowOperator& T, int k) {
  Mat A = phi_power(T, k, Mat::Identity(T.dim(), T.dim()));
  double lam = herm_max_eig(A);
  return lam > 0.0 ? lam : 0.0;
}

Mat apply_word(const RowOperator& T, const Word& w) {
  validate_word(w, T.n());
  Mat P = Mat::Identity(T.dim(), T.dim());
  for (int letter : w) P = P * T.block(letter);
  return P;
}

Mat apply_multiindex(const RowOperator& T, const MultiIndex& k, double tol) {
  if (static_cast<int>(k.size()) != T.n())
    throw std::invalid_argument("apply_multiindex: arity mismatch");
  validate_multi_index(k);
  auto comm = is_commuting(T, tol);
  if (!comm.commuting)
    throw std::invalid_argument("apply_multiindex: tuple not commuting (residual " +
                                std::to_string(comm.max_residual) + ")");
  Mat P = Mat::Identity(T.dim(), T.dim());
  for (int i = 1; i <= T.n(); ++i)
    for (int p = 0; p < k[static_cast<std::size_t>(i - 1)]; ++p) P = P * T.block(i);
  return P;
}

PolynomialSpec PolynomialSpec::symmetric(std::vector<std::pair<MultiIndex, Complex>> terms) {
  PolynomialSpec p;
  p.commuting = true;
  p.sym_terms = std::move(terms);
  return p;
}

PolynomialSpec PolynomialSpec::free(std::vector<std::pair<Word, Complex>> terms) {
  PolynomialSpec p;
  p.commuting = false;
  p.free_terms = std::move(terms);
  return p;
}

int PolynomialSpec::degree() const {
  int deg = 0;
  if (commuting)
    for (const auto& [k, c] : sym_terms) deg = std::max(deg, weight(k));
  else
    for (const auto& [w, c] : free_terms) deg = std::max(deg, static_cast<int>(w.size()));
  return deg;
}

Mat poly_eval(const RowOperator& T, const PolynomialSpec& p, double tol) {
  Mat acc = Mat::Zero(T.dim(), T.dim());
  if (p.commuting) {
    auto comm = is_commuting(T, tol);
    if (!comm.commuting)
      throw std::invalid_argument("poly_eval: commuting polynomial on non-commuting tuple");
    for (const auto& [k, c] : p.sym_terms) acc.noalias() += c * apply_multiindex(T, k, tol);
  } else {
    for (const auto& [w, c] : p.free_terms) acc.noalias() += c * apply_word(T, w);
  }
  return acc;
}

Mat poly_eval_model(const PolynomialSpec& p, int n, int d) {
  TruncatedFock F(n, d);
  if (p.commuting) {
    Mat acc = Mat::Zero(F.sym_dim(), F.sym_dim());
    std::vector<Mat> M = multiplier_row(F);
    for (const auto& [k, c] : p.sym_terms) {
      Mat P = Mat::Identity(F.sym_dim(), F.sym_dim());
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < k[static_cast<std::size_t>(i)]; ++q) P = P * M[static_cast<std::size_t>(i)];
      acc.noalias() += c * P;
    }
    return acc;
  }
  Mat acc = Mat::Zero(F.full_dim(), F.full_dim());
  std::vector<Mat> L;
  L.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) L.push_back(left_creation(i, F));
  for (const auto& [w, c] : p.free_terms) {
    Mat P = Mat::Identity(F.full_dim(), F.full_dim());
    for (int letter : w) P = P * L[static_cast<std::size_t>(letter - 1)];
    acc.noalias() += c * P;
  }
  return acc;
}

VonNeumannReport von_neumann_check(const RowOperator& T, const PolynomialSpec& p, int d,
                                   double tol) {
  if (p.degree() > d)
    throw std::invalid_argument("von_neumann_check: polynomial degree exceeds truncation");
  VonNeumannReport r;
  r.lhs = spectral_norm(poly_eval(T, p, std::max(tol, 1e-10)));
  r.rhs_d = spectral_norm(poly_eval_model(p, T.n(), d));
  r.rhs_d1 = spectral_norm(poly_eval_model(p, T.n(), d + 1));
  r.margin = r.rhs_d - r.lhs;
  r.pass = r.lhs <= r.rhs_d + tol;
  return r;
}

DilationRelationReport dilation_relation(const Mat& A, const Mat& B, const Mat& embed,
                                         int k_max, double tol) {
  if (!is_isometry(embed, tol))
    throw std::invalid_argument("dilation_relation: embedding is not an isometry");
  if (embed.rows() != B.rows() || embed.cols() != A.rows())
    throw std::invalid_argument("dilation_relation: dimension mismatch");
  DilationRelationReport r{};
  r.extension_residual = spectral_norm(B * embed - embed * A);
  r.coextension_residual = spectral_norm(embed.adjoint() * B - A * embed.adjoint());
  r.power_residual = 0.0;
  Mat Bk = Mat::Identity(B.rows(), B.cols());
  Mat Ak = Mat::Identity(A.rows(), A.cols());
  for (int k = 0; k <= k_max; ++k) {
    r.power_residual =
        std::max(r.power_residual, spectral_norm(embed.adjoint() * Bk * embed - Ak));
    Bk = Bk * B;
    Ak = Ak * A;
  }
  r.extension = r.extension_residual <= tol;
  r.co_extension = r.coextension_residual <= tol;
  r.sarason_dilation = r.power_residual <= tol;
  return r;
}

CounterexampleOperators counterexample_operators(double r, double eps) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("counterexample_operators: need 0 < r < 1");
  if (!(eps > 0.0) || eps == r)
    throw std::invalid_argument("counterexample_operators: need 0 < eps != r");

  Mat T1 = Mat::Zero(2, 2), T2 = Mat::Zero(2, 2);
  T1(0, 0) = r;
  T2(1, 1) = r;

  Mat B1 = Mat::Zero(3, 3), B2 = Mat::Zero(3, 3);
  B1(0, 0) = eps;
  B1(1, 0) = eps * (eps - r);
  B1(1, 1) = r;
  B1(2, 0) = eps * eps;
  B2(0, 0) = eps;
  B2(1, 0) = eps * eps;
  B2(2, 0) = eps * (eps - r);
  B2(2, 2) = r;

  Mat X = Mat::Zero(2, 2);
  X(0, 0) = 1.0;
  X(1, 1) = -1.0;

  Mat J = Mat::Zero(3, 2);
  J(1, 0) = 1.0;
  J(2, 1) = 1.0;

  CounterexampleOperators out{RowOperator({T1, T2}), RowOperator({B1, B2}), X, J, 0.0, false};
  out.row_norm_B = row_norm(out.B);
  out.contraction = out.row_norm_B <= 1.0;
  return out;
}

double ObstructionReport::first_at(double y) const { return (y - zero_first) * a; }
double ObstructionReport::second_at(double y) const { return (y - zero_second) * b; }

ObstructionReport counterexample_obstruction(double r, double eps) {
  if (!(r > 0.0 && r < 1.0) || !(eps > 0.0) || eps == r)
    throw std::invalid_argument("counterexample_obstruction: invalid parameters");
  ObstructionReport rep;
  rep.a = eps * (eps - r);   // signed slope of (y - 1) eps (eps - r)
  rep.b = eps * eps;
  rep.zero_first = 1.0;
  rep.zero_second = -1.0;
  double a = std::abs(rep.a), b = rep.b;
  // minimize max(|y-1| a, |y+1| b); piecewise linear, optimum where the
  // two branches cross inside (-1, 1)
  rep.y_star = (a - b) / (a + b);
  rep.minimax = 2.0 * a * b / (a + b);
  return rep;
}

}  // namespace rowlift
