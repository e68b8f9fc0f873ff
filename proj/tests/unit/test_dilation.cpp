#include <doctest.h>

#include <random>

#include "rowlift/dilation.hpp"
#include "rowlift/sampling.hpp"
#include "support/oracles.hpp"

using namespace rowlift;

namespace {

// interior dimension of a frazho_bunce result: H plus Fock degrees <= d-2
Eigen::Index fb_interior(const RowOperator& T, int d, int defect_rank) {
  Eigen::Index words = 0, pw = 1;
  for (int j = 0; j <= d - 2; ++j) {
    words += pw;
    pw *= T.n();
  }
  return T.dim() + words * defect_rank;
}

}  // namespace

TEST_CASE("frazho_bunce classical cases") {
  SUBCASE("unitary input has zero defect and dilates to itself") {
    Mat U(2, 2);
    U << 0, 1, 1, 0;
    auto dil = frazho_bunce(RowOperator({U}), 3);
    CHECK(dil.V.dim() == 2);
    CHECK(dil.multiplicity == 0);
    CHECK(spectral_norm(dil.V.block(1) - U) < 1e-14);
  }
  SUBCASE("zero scalar dilates to the truncated unilateral shift") {
    auto dil = frazho_bunce(RowOperator::zero(1, 1), 4);
    CHECK(dil.V.dim() == 5);
    TruncatedFock F(1, 4);
    CHECK(spectral_norm(dil.V.block(1) - left_creation(1, F)) < 1e-14);
  }
  SUBCASE("non-contractions are rejected") {
    CHECK_THROWS_AS(frazho_bunce(RowOperator({Mat::Identity(2, 2) * 1.5}), 3),
                    std::domain_error);
  }
}

TEST_CASE("frazho_bunce contract on random commuting contractions") {
  std::mt19937_64 rng(29);
  const int n = 2, d = 5;
  for (int trial = 0; trial < 3; ++trial) {
    RowOperator T = random_commuting_row_contraction(n, 3, 0.85, rng);
    auto dil = frazho_bunce(T, d);
    const Mat& E = dil.embed;
    const Eigen::Index K = dil.V.dim();

    // (a) exact co-extension per block
    for (int i = 1; i <= n; ++i)
      CHECK(spectral_norm(Mat(E.adjoint() * dil.V.block(i) - T.block(i) * E.adjoint())) <
            1e-12);

    // (b)+(c) isometry with orthogonal ranges on the interior
    Eigen::Index interior = fb_interior(T, d, dil.multiplicity);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Mat G = dil.V.block(i).adjoint() * dil.V.block(j);
        if (i == j) G -= Mat::Identity(K, K);
        CHECK(spectral_norm(Mat(G.topLeftCorner(interior, interior))) < 1e-10);
      }

    // (d) minimality: the words of length <= d applied to H span K
    TruncatedFock W(n, d);
    Mat span(K, W.full_dim() * T.dim());
    for (Eigen::Index w = 0; w < W.full_dim(); ++w)
      span.middleCols(w * T.dim(), T.dim()) = apply_word(dil.V, W.word_at(w)) * E;
    CHECK(rank_at(span, 1e-8) == K);

    // word compression: P_H V_w |_H = T_w for all |w| <= d
    for (Eigen::Index w = 0; w < W.full_dim(); ++w) {
      Word word = W.word_at(w);
      CHECK(spectral_norm(Mat(E.adjoint() * apply_word(dil.V, word) * E - apply_word(T, word))) <
            1e-11);
    }

    // defect inner-product identity <D(e_i x h), D(e_j x h')> = d_ij <h,h'> - <T_i h, T_j h'>
    DefectData D = defect(T);
    Mat D2 = D.defect_op * D.defect_op;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Mat block = D2.block((i - 1) * T.dim(), (j - 1) * T.dim(), T.dim(), T.dim());
        Mat expect = -T.block(i).adjoint() * T.block(j);
        if (i == j) expect += Mat::Identity(T.dim(), T.dim());
        CHECK(spectral_norm(Mat(block - expect)) < 1e-12);
      }
  }
}

TEST_CASE("arveson_pure model co-extension") {
  std::mt19937_64 rng(31);
  SUBCASE("zero tuple maps onto the vacuum copies") {
    auto dil = arveson_pure(RowOperator::zero(2, 3), 4);
    CHECK(dil.multiplicity == 3);
    CHECK(dil.embed_defect < 1e-14);
    TruncatedFock F(2, 4);
    // embedding supported on the vacuum coordinate of each copy
    for (Eigen::Index c = 0; c < 3; ++c)
      CHECK(std::abs(std::abs(dil.embed.col(c).sum()) - 1.0) < 1e-14);
    CHECK(dil.V.dim() == 3 * F.sym_dim());
  }

  SUBCASE("exact truncation identity ||Wh||^2 = ||h||^2 - <Phi^{d+1} h, h>") {
    for (int trial = 0; trial < 4; ++trial) {
      RowOperator T = random_commuting_row_contraction(2, 3, 0.8, rng);
      int d = 6;
      auto dil = arveson_pure(T, d);
      Mat tail = phi_power(T, d + 1, Mat::Identity(3, 3));
      for (int h = 0; h < 5; ++h) {
        Vec v = random_matrix(3, 1, rng).col(0);
        double lhs = (dil.embed * v).squaredNorm();
        double rhs = v.squaredNorm() - std::real(v.dot(tail * v));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

        // independent oracle: direct summation over multi-indices
        Mat Delta2 = Mat::Identity(3, 3) - phi_power(T, 1, Mat::Identity(3, 3));
        TruncatedFock F(2, d);
        double direct = 0.0;
        for (Eigen::Index s = 0; s < F.sym_dim(); ++s) {
          const MultiIndex& k = F.multi_at(s);
          Mat Tk = apply_multiindex(T, k);
          direct += double(multinomial_count(k)) *
                    std::real((Tk.adjoint() * v).dot(Delta2 * (Tk.adjoint() * v)));
        }
        CHECK(lhs == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }

  SUBCASE("adjoint intertwining holds exactly below the top degree") {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.7, rng);
    int d = 5;
    auto dil = arveson_pure(T, d);
    TruncatedFock F(2, d);
    const Eigen::Index N = F.sym_dim(), top = F.sym_degree_offset(d);
    for (int i = 1; i <= 2; ++i) {
      Mat lhs = dil.V.block(i).adjoint() * dil.embed;
      Mat rhs = dil.embed * T.block(i).adjoint();
      // zero the top-degree rows of the right-hand side in every copy
      for (int a = 0; a < dil.multiplicity; ++a)
        rhs.middleRows(a * N + top, N - top).setZero();
      CHECK(spectral_norm(Mat(lhs - rhs)) < 1e-12);
    }
  }

  SUBCASE("embedding defect scales with the purity tail") {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.15, rng);
    auto dil = arveson_pure(T, 12);
    CHECK(dil.embed_defect < 1e-10);
    // co-invariance of the embedded image at this scale
    for (int i = 1; i <= 2; ++i) {
      Mat W = dil.embed;
      Mat resid = (Mat::Identity(W.rows(), W.rows()) - W * W.adjoint()) *
                  dil.V.block(i).adjoint() * W;
      CHECK(spectral_norm(resid) < 1e-10);
    }
  }

  SUBCASE("section 4 tuple at d = 12 embeds almost isometrically") {
    auto ce = counterexample_operators(0.5, 0.1);
    auto dil = arveson_pure(ce.B, 12);
    CHECK(dil.embed_defect < 1e-6);
    CHECK(dil.purity_tail < 1e-6);
  }

  SUBCASE("non-commuting input is rejected") {
    TruncatedFock F(2, 2);
    RowOperator L({left_creation(1, F), left_creation(2, F)});
    CHECK_THROWS_AS(arveson_pure(L, 3), std::invalid_argument);
  }
}

TEST_CASE("spherical unitaries") {
  SUBCASE("single point") {
    SphericalUnitary S;
    Vec mu(2);
    mu << 1.0, 0.0;
    S.points = {mu};
    S.multiplicities = {1};
    RowOperator U = spherical_unitary_realize(S);
    CHECK(std::abs(U.block(1)(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(U.block(2)(0, 0)) == 0.0);
  }
  SUBCASE("two points realize diagonally") {
    SphericalUnitary S;
    Vec a(2), b(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;
    S.points = {a, b};
    S.multiplicities = {1, 1};
    RowOperator U = spherical_unitary_realize(S);
    CHECK(std::abs(U.block(1)(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(U.block(2)(1, 1) - 1.0) == 0.0);
  }
  SUBCASE("sum U_i U_i* = I and exact commutation") {
    std::mt19937_64 rng(37);
    SphericalUnitary S;
    for (int p = 0; p < 4; ++p) S.points.push_back(random_sphere_point(3, rng));
    S.multiplicities = {1, 2, 1, 1};
    RowOperator U = spherical_unitary_realize(S);
    Mat sum = phi_power(U, 1, Mat::Identity(U.dim(), U.dim()));
    CHECK(spectral_norm(Mat(sum - Mat::Identity(U.dim(), U.dim()))) < 1e-14);
    auto rep = is_commuting(U);
    CHECK(rep.max_residual == 0.0);
  }
  SUBCASE("off-sphere points are rejected") {
    SphericalUnitary S;
    Vec mu(2);
    mu << 0.5, 0.0;
    S.points = {mu};
    S.multiplicities = {1};
    CHECK_THROWS_AS(spherical_unitary_realize(S), std::domain_error);
  }
}

TEST_CASE("fixed point equation implies joint commutant membership") {
  // solve sum_j U_j A U_j* = A as a linear system and test the conclusion
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    SphericalUnitary S;
    int pts = 3;
    for (int p = 0; p < pts; ++p) S.points.push_back(random_sphere_point(2, rng));
    S.multiplicities.assign(pts, 1);
    RowOperator U = spherical_unitary_realize(S);
    const Eigen::Index N = U.dim();

    // vec(U_j A U_j*) = (conj(U_j) (x) U_j) vec A; diagonal, so the operator
    // acts entrywise on vec A
    Mat Op = Mat::Zero(N * N, N * N);
    for (int j = 1; j <= U.n(); ++j) {
      const Mat& Uj = U.block(j);
      for (Eigen::Index q = 0; q < N; ++q)
        for (Eigen::Index p = 0; p < N; ++p)
          Op(q * N + p, q * N + p) += std::conj(Uj(q, q)) * Uj(p, p);
    }
    Op -= Mat::Identity(N * N, N * N);
    Mat null = null_basis(Op, 1e-10);

    // oracle: dimension equals the number of coinciding joint eigenvalue pairs
    Eigen::MatrixXi pat = oracles::diagonal_joint_commutant_pattern(S.points);
    CHECK(null.cols() == pat.sum());

    for (Eigen::Index c = 0; c < null.cols(); ++c) {
      Mat A = Eigen::Map<const Mat>(null.col(c).data(), N, N);
      for (int i = 1; i <= U.n(); ++i) {
        CHECK(spectral_norm(Mat(A * U.block(i) - U.block(i) * A)) < 1e-10);
        CHECK(spectral_norm(Mat(A * U.block(i).adjoint() - U.block(i).adjoint() * A)) < 1e-10);
      }
    }
  }
}

TEST_CASE("assembled dilations") {
  SUBCASE("alpha = 0 is the spherical part alone") {
    SphericalUnitary S;
    Vec mu(2);
    mu << 1.0, 0.0;
    S.points = {mu};
    S.multiplicities = {1};
    auto dil = assemble_dilation(2, 0, S, 3);
    CHECK(dil.V.dim() == 1);
    CHECK(dil.summands->u_dim == 1);
  }
  SUBCASE("alpha = 1 with empty spherical part is the multiplier row") {
    auto dil = assemble_dilation(2, 1, SphericalUnitary{}, 3);
    TruncatedFock F(2, 3);
    for (int i = 1; i <= 2; ++i)
      CHECK(spectral_norm(Mat(dil.V.block(i) - multiplier_matrix(i, F))) == 0.0);
    CHECK(dil.mult_structure.has_value());
  }
  SUBCASE("alpha = 1 plus one point: commuting row of norm one") {
    SphericalUnitary S;
    Vec mu(2);
    mu << 1.0, 0.0;
    S.points = {mu};
    S.multiplicities = {1};
    auto dil = assemble_dilation(2, 1, S, 3);
    CHECK(row_norm(dil.V) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_commuting(dil.V).commuting);
  }
}

TEST_CASE("wold decomposition data") {
  SUBCASE("truncated creation row: wandering space is the vacuum") {
    TruncatedFock F(2, 3);
    RowOperator L({left_creation(1, F), left_creation(2, F)});
    Eigen::Index interior = F.full_degree_offset(3);  // degrees <= 2
    WoldData w = wold_data(L, interior, 2);
    CHECK(w.wandering_basis.cols() == 1);
    CHECK(std::abs(std::abs(w.wandering_basis(0, 0)) - 1.0) < 1e-12);
    CHECK(w.shift_part_dim == interior);  // shift part fills the interior
    CHECK(w.cuntz_part_dim == 0);
  }
  SUBCASE("spherical unitary: empty wandering space, Cuntz relation") {
    std::mt19937_64 rng(43);
    SphericalUnitary S;
    S.points = {random_sphere_point(2, rng), random_sphere_point(2, rng)};
    S.multiplicities = {1, 1};
    RowOperator U = spherical_unitary_realize(S);
    // sum U_i U_i* = I exactly: nothing wanders
    Mat G = Mat::Identity(2, 2) - phi_power(U, 1, Mat::Identity(2, 2));
    CHECK(spectral_norm(G) < 1e-14);
    WoldData w = wold_data(U, 0, 0);  // isometric only on the trivial interior
    CHECK(w.wandering_basis.cols() == 0);
  }
  SUBCASE("frazho_bunce output recovers the defect rank as multiplicity") {
    std::mt19937_64 rng(47);
    RowOperator T = random_commuting_row_contraction(2, 2, 0.7, rng);
    int d = 4;
    auto dil = frazho_bunce(T, d);
    Eigen::Index interior = fb_interior(T, d, dil.multiplicity);
    WoldData w = wold_data(dil.V, interior, 2);
    CHECK(w.wandering_basis.cols() == dil.multiplicity);
    CHECK(w.frame_residual < 1e-8);
    CHECK(w.wandering_residual < 1e-8);
  }
  SUBCASE("non-isometries are rejected") {
    std::mt19937_64 rng(53);
    RowOperator T = random_commuting_row_contraction(2, 3, 0.9, rng);
    CHECK_THROWS_AS(wold_data(T, 3, 1), std::domain_error);
  }
}
