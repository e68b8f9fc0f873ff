#include "rowlift/dilation.hpp"

#include <stdexcept>
#include <string>

namespace rowlift {

DilationResult frazho_bunce(const RowOperator& T, int d, double tol) {
  if (d < 1) throw std::invalid_argument("frazho_bunce: need d >= 1");
  double rn = row_norm(T);
  if (rn > 1.0 + tol)
    throw std::domain_error("frazho_bunce: not a row contraction (norm " +
                            std::to_string(rn) + ")");
  const int n = T.n();
  const Eigen::Index m = T.dim();

  DefectData D = defect(T, tol);
  const Eigen::Index dr = D.defect_rank;
  // coordinates of D_T(e_i (x) h) in the defect range
  Mat coord = D.range_basis.adjoint() * D.defect_op;  // dr x (n m)

  TruncatedFock Fock(n, d - 1);
  const Eigen::Index nw = Fock.full_dim();
  const Eigen::Index K = m + nw * dr;

  std::vector<Mat> blocks(static_cast<std::size_t>(n), Mat::Zero(K, K));
  for (int i = 1; i <= n; ++i) {
    Mat& Vi = blocks[static_cast<std::size_t>(i - 1)];
    Vi.topLeftCorner(m, m) = T.block(i);
    // defect row: h -> xi_empty (x) Pi_D D_T(e_i (x) h)
    Vi.block(m, 0, dr, m) = coord.middleCols((i - 1) * m, m);
    // shift on the Fock factor, annihilating the top degree
    for (Eigen::Index w = 0; w < nw; ++w) {
      Word word = Fock.word_at(w);
      if (static_cast<int>(word.size()) == d - 1) continue;
      Word iw;
      iw.reserve(word.size() + 1);
      iw.push_back(i);
      iw.insert(iw.end(), word.begin(), word.end());
      Eigen::Index target = Fock.word_rank(iw);
      for (Eigen::Index j = 0; j < dr; ++j)
        Vi(m + target * dr + j, m + w * dr + j) = 1.0;
    }
  }

  DilationResult out{RowOperator(std::move(blocks)),
                     Mat::Zero(K, m),
                     d,
                     DilationKind::isometric_coext,
                     static_cast<int>(dr),
                     0.0,
                     purity_index(T, d + 1),
                     std::nullopt,
                     std::nullopt};
  out.embed.topLeftCorner(m, m).setIdentity();
  out.embed_defect = (out.embed.adjoint() * out.embed - Mat::Identity(m, m)).norm();
  return out;
}

DilationResult arveson_pure(const RowOperator& T, int d, const ArvesonOptions& opts) {
  auto comm = is_commuting(T, opts.commutation_tol);
  if (!comm.commuting)
    throw std::invalid_argument("arveson_pure: tuple not commuting (residual " +
                                std::to_string(comm.max_residual) + ")");
  double rn = row_norm(T);
  if (rn > 1.0 + opts.commutation_tol)
    throw std::domain_error("arveson_pure: not a row contraction (norm " +
                            std::to_string(rn) + ")");
  const int n = T.n();
  const Eigen::Index m = T.dim();
  TruncatedFock F(n, d);
  const Eigen::Index N = F.sym_dim();

  // Delta = (I - sum T_i T_i*)^{1/2} on H, alpha = rank Delta
  Mat gram = Mat::Identity(m, m) - phi_power(T, 1, Mat::Identity(m, m));
  Mat Delta = psd_sqrt(gram);
  Mat U = range_basis(Delta, 1e-8);
  const Eigen::Index alpha = U.cols();

  // adjoint powers T*^k for every |k| <= d, in basis order
  std::vector<Mat> powstar(static_cast<std::size_t>(N));
  powstar[0] = Mat::Identity(m, m);
  for (Eigen::Index s = 1; s < N; ++s) {
    const MultiIndex& k = F.multi_at(s);
    int i = 0;
    while (k[static_cast<std::size_t>(i)] == 0) ++i;
    MultiIndex prev = k;
    --prev[static_cast<std::size_t>(i)];
    powstar[static_cast<std::size_t>(s)] =
        T.block(i + 1).adjoint() * powstar[static_cast<std::size_t>(F.multi_rank(prev))];
  }

  // W h = sum_k sqrt(|P_k|) e_k (x) Pi_Delta(Delta T*^k h), copy-major layout
  Mat W = Mat::Zero(alpha * N, m);
  Mat UD = U.adjoint() * Delta;  // alpha x m
  for (Eigen::Index s = 0; s < N; ++s) {
    double w = std::sqrt(static_cast<double>(multinomial_count(F.multi_at(s))));
    Mat rows = w * UD * powstar[static_cast<std::size_t>(s)];  // alpha x m
    for (Eigen::Index a = 0; a < alpha; ++a) W.row(a * N + s) = rows.row(a);
  }

  std::vector<Mat> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    Mat Mi = multiplier_matrix(i, F);
    Mat Vi = Mat::Zero(alpha * N, alpha * N);
    for (Eigen::Index a = 0; a < alpha; ++a) Vi.block(a * N, a * N, N, N) = Mi;
    blocks.push_back(std::move(Vi));
  }

  DilationResult out{RowOperator(std::move(blocks)),
                     std::move(W),
                     d,
                     DilationKind::arveson_pure,
                     static_cast<int>(alpha),
                     0.0,
                     purity_index(T, d + 1),
                     std::nullopt,
                     MultModelStructure{n, d, static_cast<int>(alpha)}};
  out.embed_defect =
      (out.embed.adjoint() * out.embed - Mat::Identity(m, m)).norm();
  out.summands = SummandInfo{static_cast<int>(alpha), N, 0};
  return out;
}

Eigen::Index SphericalUnitary::dim() const {
  Eigen::Index s = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    s += (i < multiplicities.size() ? multiplicities[i] : 1);
  return s;
}

int SphericalUnitary::n() const {
  return points.empty() ? 0 : static_cast<int>(points[0].size());
}

RowOperator spherical_unitary_realize(const SphericalUnitary& S, double sphere_tol) {
  if (S.points.empty())
    throw std::invalid_argument("spherical_unitary_realize: no points");
  const int n = S.n();
  for (const Vec& mu : S.points) {
    if (mu.size() != n)
      throw std::invalid_argument("spherical_unitary_realize: inconsistent arity");
    if (std::abs(mu.norm() - 1.0) > sphere_tol)
      throw std::domain_error("spherical_unitary_realize: point off the unit sphere");
  }
  const Eigen::Index dim = S.dim();
  std::vector<Mat> blocks(static_cast<std::size_t>(n), Mat::Zero(dim, dim));
  Eigen::Index pos = 0;
  for (std::size_t p = 0; p < S.points.size(); ++p) {
    int mult = p < S.multiplicities.size() ? S.multiplicities[p] : 1;
    if (mult < 1) throw std::invalid_argument("spherical_unitary_realize: bad multiplicity");
    for (int c = 0; c < mult; ++c, ++pos)
      for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(i)](pos, pos) = S.points[p][i];
  }
  return RowOperator(std::move(blocks));
}

DilationResult assemble_dilation(int n, int alpha, const SphericalUnitary& U, int d) {
  if (alpha < 0) throw std::invalid_argument("assemble_dilation: negative multiplicity");
  const bool have_u = !U.points.empty();
  if (!have_u && alpha == 0)
    throw std::invalid_argument("assemble_dilation: empty dilation");
  if (have_u && U.n() != n)
    throw std::invalid_argument("assemble_dilation: arity mismatch between M and U parts");

  TruncatedFock F(n, d);
  const Eigen::Index Nm = F.sym_dim();
  const Eigen::Index udim = have_u ? U.dim() : 0;
  const Eigen::Index K = alpha * Nm + udim;

  std::optional<RowOperator> Urow;
  if (have_u) Urow = spherical_unitary_realize(U);

  std::vector<Mat> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    Mat Vi = Mat::Zero(K, K);
    Mat Mi = multiplier_matrix(i, F);
    for (int a = 0; a < alpha; ++a) Vi.block(a * Nm, a * Nm, Nm, Nm) = Mi;
    if (have_u) Vi.bottomRightCorner(udim, udim) = Urow->block(i);
    blocks.push_back(std::move(Vi));
  }

  DilationResult out{RowOperator(std::move(blocks)),
                     Mat::Identity(K, K),
                     d,
                     DilationKind::assembled,
                     alpha,
                     0.0,
                     0.0,
                     SummandInfo{alpha, Nm, udim},
                     std::nullopt};
  if (!have_u && alpha > 0) out.mult_structure = MultModelStructure{n, d, alpha};
  return out;
}

WoldData wold_data(const RowOperator& V, Eigen::Index interior_dim, int d_interior,
                   double tol) {
  const Eigen::Index K = V.dim();
  if (interior_dim < 0 || interior_dim > K)
    throw std::invalid_argument("wold_data: bad interior dimension");

  WoldData out{};
  // isometry-with-orthogonal-ranges on the interior
  out.isometry_residual = 0.0;
  for (int i = 1; i <= V.n(); ++i)
    for (int j = 1; j <= V.n(); ++j) {
      Mat G = V.block(i).adjoint() * V.block(j);
      if (i == j) G -= Mat::Identity(K, K);
      out.isometry_residual =
          std::max(out.isometry_residual,
                   spectral_norm(Mat(G.topLeftCorner(interior_dim, interior_dim))));
    }
  if (out.isometry_residual > tol)
    throw std::domain_error("wold_data: tuple is not isometric on the interior (residual " +
                            std::to_string(out.isometry_residual) + ")");

  // wandering space M = range of I - sum V_i V_i*, compressed to the interior
  Mat G = Mat::Identity(K, K) - phi_power(V, 1, Mat::Identity(K, K));
  Mat Gi = Mat::Zero(K, K);
  Gi.topLeftCorner(interior_dim, interior_dim) =
      G.topLeftCorner(interior_dim, interior_dim);
  out.wandering_basis = range_basis(Gi, 1e-8);
  const Eigen::Index alpha = out.wandering_basis.cols();

  out.wandering_residual = 0.0;
  for (int i = 1; i <= V.n(); ++i)
    out.wandering_residual = std::max(
        out.wandering_residual, spectral_norm(Mat(V.block(i).adjoint() * out.wandering_basis)));

  // shift frame: columns V_w m_j over words |w| <= d_interior, word-major
  TruncatedFock Fock(V.n(), d_interior);
  const Eigen::Index nw = Fock.full_dim();
  out.shift_frame.resize(K, nw * alpha);
  out.frame_words.clear();
  out.frame_words.reserve(static_cast<std::size_t>(nw));
  for (Eigen::Index w = 0; w < nw; ++w) {
    Word word = Fock.word_at(w);
    out.frame_words.push_back(word);
    Mat cols = out.wandering_basis;
    for (auto it = word.rbegin(); it != word.rend(); ++it) cols = V.block(*it) * cols;
    out.shift_frame.middleCols(w * alpha, alpha) = cols;
  }
  out.frame_residual =
      (out.shift_frame.adjoint() * out.shift_frame -
       Mat::Identity(nw * alpha, nw * alpha))
          .norm();
  out.shift_part_dim = rank_at(out.shift_frame, 1e-8);

  // orthocomplement of the shift part within the interior
  Mat Fi = out.shift_frame.topRows(interior_dim);
  Mat C = null_basis(Fi.adjoint(), 1e-8);  // interior vectors killed by frame*
  out.cuntz_basis = Mat::Zero(K, C.cols());
  out.cuntz_basis.topRows(interior_dim) = C;
  out.cuntz_part_dim = C.cols();
  return out;
}

}  // namespace rowlift
