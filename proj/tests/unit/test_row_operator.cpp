#include <doctest.h>

#include <random>

#include "rowlift/dilation.hpp"
#include "rowlift/row_operator.hpp"
#include "rowlift/sampling.hpp"
#include "support/oracles.hpp"

using namespace rowlift;

namespace {

RowOperator section4_pair(double r) {
  Mat T1 = Mat::Zero(2, 2), T2 = Mat::Zero(2, 2);
  T1(0, 0) = r;
  T2(1, 1) = r;
  return RowOperator({T1, T2});
}

}  // namespace

TEST_CASE("row norm") {
  CHECK(row_norm(RowOperator::zero(3, 4)) == 0.0);
  CHECK(row_norm(section4_pair(0.5)) == doctest::Approx(0.5).epsilon(1e-14));
  Mat U(2, 2);
  U << 0, 1, 1, 0;
  CHECK(row_norm(RowOperator({U})) == doctest::Approx(1.0).epsilon(1e-14));

  // ||T||^2 equals the norm of the row gram sum T_i T_i*
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    RowOperator T = random_row_contraction(3, 4, 0.9, rng);
    double rn = row_norm(T);
    double gram = herm_max_eig(phi_power(T, 1, Mat::Identity(4, 4)));
    CHECK(rn * rn == doctest::Approx(gram).epsilon(1e-10));
  }
}

TEST_CASE("commutativity report") {
  CHECK(is_commuting(section4_pair(0.4)).commuting);
  CHECK(is_commuting(section4_pair(0.4)).max_residual == 0.0);

  auto ce = counterexample_operators(0.5, 0.1);
  CHECK(is_commuting(ce.B).commuting);

  TruncatedFock F(2, 2);
  RowOperator L({left_creation(1, F), left_creation(2, F)});
  auto rep = is_commuting(L);
  CHECK_FALSE(rep.commuting);
  CHECK(rep.max_residual > 0.5);  // L1 L2 xi_empty = xi_12 != xi_21
}

TEST_CASE("defect data") {
  SUBCASE("zero scalar") {
    auto D = defect(RowOperator::zero(1, 1));
    CHECK(std::abs(D.defect_op(0, 0) - 1.0) < 1e-14);
    CHECK(D.defect_rank == 1);
  }
  SUBCASE("multiplier row: defect located at the annihilated top degree") {
    TruncatedFock F(2, 2);
    RowOperator M(multiplier_row(F));
    auto D = defect(M);
    // I - M*M vanishes except where the top degree was cut: rank = n * (top count)
    Mat R = M.flat_row();
    Mat G = Mat::Identity(R.cols(), R.cols()) - R.adjoint() * R;
    CHECK(D.defect_rank == rank_at(G, 1e-8));
    CHECK(spectral_norm(D.defect_op * D.defect_op - G) < 1e-10);
  }
  SUBCASE("section 4 pair at r = 1/2: I - T*T is diagonal with known entries") {
    auto D = defect(section4_pair(0.5));
    CHECK(D.defect_rank == 4);
    // hand eigendecomposition: diag(3/4, 1, 1, 3/4), so the root is diagonal
    Mat expect = Mat::Identity(4, 4);
    expect(0, 0) = std::sqrt(0.75);
    expect(3, 3) = std::sqrt(0.75);
    CHECK(spectral_norm(D.defect_op - expect) < 1e-12);
  }
  SUBCASE("non-contractions are rejected") {
    Mat big = 2.0 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(defect(RowOperator({big})), std::domain_error);
  }
}

TEST_CASE("purity index") {
  std::mt19937_64 rng(5);
  SUBCASE("k = 0 gives 1") {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.7, rng);
    CHECK(purity_index(T, 0) == doctest::Approx(1.0));
  }
  SUBCASE("strict contractions decay at least geometrically") {
    for (double rho : {0.5, 0.8}) {
      RowOperator T = random_commuting_row_contraction(2, 3, rho, rng);
      double prev = 1.0;
      for (int k = 1; k <= 6; ++k) {
        double cur = purity_index(T, k);
        CHECK(cur <= prev + 1e-12);
        CHECK(cur <= std::pow(rho, 2 * k) + 1e-12);
        prev = cur;
      }
    }
  }
  SUBCASE("spherical unitaries never decay") {
    SphericalUnitary S;
    S.points.push_back(random_sphere_point(2, rng));
    S.points.push_back(random_sphere_point(2, rng));
    S.multiplicities = {1, 2};
    RowOperator U = spherical_unitary_realize(S);
    for (int k = 0; k <= 5; ++k) CHECK(purity_index(U, k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("word and multi-index application") {
  auto ce = counterexample_operators(0.5, 0.1);
  CHECK(spectral_norm(apply_word(ce.B, {}) - Mat::Identity(3, 3)) == 0.0);
  CHECK(spectral_norm(apply_word(ce.B, {1, 2}) - apply_word(ce.B, {2, 1})) < 1e-15);
  CHECK(spectral_norm(apply_multiindex(ce.B, {1, 1}) - apply_word(ce.B, {1, 2})) < 1e-15);

  Mat sq = apply_word(ce.T, {1, 1});
  CHECK(std::abs(sq(0, 0) - 0.25) < 1e-15);
  CHECK(sq.norm() == doctest::Approx(0.25).epsilon(1e-14));

  TruncatedFock F(2, 2);
  RowOperator L({left_creation(1, F), left_creation(2, F)});
  CHECK_THROWS_AS(apply_multiindex(L, {1, 1}), std::invalid_argument);
}

TEST_CASE("polynomial evaluation") {
  std::mt19937_64 rng(9);
  RowOperator T = random_commuting_row_contraction(2, 3, 0.8, rng);

  PolynomialSpec one = PolynomialSpec::symmetric({{{0, 0}, 1.0}});
  CHECK(spectral_norm(poly_eval(T, one) - Mat::Identity(3, 3)) < 1e-14);

  // z1 z2 - z2 z1 as a free polynomial vanishes on commuting input
  PolynomialSpec comm = PolynomialSpec::free({{{1, 2}, 1.0}, {{2, 1}, -1.0}});
  CHECK(spectral_norm(poly_eval(T, comm)) < 1e-12);

  // p = z1 + z2 on the truncated multiplier model has norm sqrt(2)
  PolynomialSpec sum = PolynomialSpec::symmetric({{{1, 0}, 1.0}, {{0, 1}, 1.0}});
  for (int d : {1, 3, 5})
    CHECK(spectral_norm(poly_eval_model(sum, 2, d)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("von Neumann experiments") {
  std::mt19937_64 rng(13);
  SUBCASE("coordinate polynomial is trivial") {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.95, rng);
    PolynomialSpec z1 = PolynomialSpec::symmetric({{{1, 0}, 1.0}});
    auto rep = von_neumann_check(T, z1, 4);
    CHECK(rep.pass);
    CHECK(rep.rhs_d == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random commuting pairs against the multiplier model") {
    for (int trial = 0; trial < 10; ++trial) {
      RowOperator T = random_commuting_row_contraction(2, 3, 0.9, rng);
      PolynomialSpec p = random_symmetric_poly(2, 3, 4, rng);
      auto rep = von_neumann_check(T, p, 6);
      CHECK(rep.pass);
      CHECK(rep.rhs_d <= rep.rhs_d1 + 1e-12);  // monotone in the truncation degree
    }
  }
  SUBCASE("free rows against the creation model") {
    for (int trial = 0; trial < 6; ++trial) {
      RowOperator A = random_row_contraction(2, 3, 0.9, rng);
      PolynomialSpec p = random_free_poly(2, 3, 4, rng);
      auto rep = von_neumann_check(A, p, 6);
      CHECK(rep.pass);
      CHECK(rep.rhs_d <= rep.rhs_d1 + 1e-12);
    }
  }
  SUBCASE("the section 4 pair against z1 z2") {
    auto ce = counterexample_operators(0.5, 0.1);
    PolynomialSpec p = PolynomialSpec::symmetric({{{1, 1}, 1.0}});
    auto rep = von_neumann_check(ce.B, p, 6);
    CHECK(rep.pass);
    CHECK(rep.margin > 0.1);  // strict margin
  }
}

TEST_CASE("dilation relations") {
  SUBCASE("direct summand is extension, co-extension and dilation") {
    std::mt19937_64 rng(17);
    Mat A = random_matrix(2, 2, rng), C = random_matrix(3, 3, rng);
    Mat B = Mat::Zero(5, 5);
    B.topLeftCorner(2, 2) = A;
    B.bottomRightCorner(3, 3) = C;
    Mat E = Mat::Zero(5, 2);
    E.topLeftCorner(2, 2).setIdentity();
    auto rep = dilation_relation(A, B, E, 4);
    CHECK(rep.extension);
    CHECK(rep.co_extension);
    CHECK(rep.sarason_dilation);
  }
  SUBCASE("truncated shift over its low-degree compression") {
    TruncatedFock F(1, 2);
    Mat B = left_creation(1, F);
    Mat A = Mat::Zero(2, 2);
    A(1, 0) = 1.0;
    Mat E = Mat::Zero(3, 2);
    E(0, 0) = 1.0;
    E(1, 1) = 1.0;
    auto rep = dilation_relation(A, B, E, 3);
    CHECK(rep.co_extension);
    CHECK_FALSE(rep.extension);
    CHECK(rep.sarason_dilation);
  }
  SUBCASE("non-isometric embeddings are rejected") {
    Mat E = 2.0 * Mat::Identity(3, 2);
    CHECK_THROWS_AS(dilation_relation(Mat::Identity(2, 2), Mat::Identity(3, 3), E, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("counterexample operators reproduce the displayed matrices") {
  auto ce = counterexample_operators(0.5, 0.1);

  Mat B1_expect(3, 3);
  B1_expect << 0.1, 0, 0, -0.04, 0.5, 0, 0.01, 0, 0;
  CHECK(spectral_norm(ce.B.block(1) - B1_expect) < 1e-16);

  CHECK(spectral_norm(ce.B.block(1) * ce.B.block(2) - ce.B.block(2) * ce.B.block(1)) < 1e-15);

  // X is a unitary commuting with T
  CHECK(spectral_norm(ce.X * ce.X - Mat::Identity(2, 2)) == 0.0);
  for (int i = 1; i <= 2; ++i)
    CHECK(spectral_norm(ce.X * ce.T.block(i) - ce.T.block(i) * ce.X) == 0.0);

  // B extends T on span{e2, e3}
  for (int i = 1; i <= 2; ++i)
    CHECK(spectral_norm(ce.B.block(i) * ce.embed_T_in_B - ce.embed_T_in_B * ce.T.block(i)) <
          1e-16);

  CHECK(ce.contraction);
  CHECK(ce.row_norm_B <= 1.0);
  CHECK(ce.row_norm_B > 0.5);

  CHECK_THROWS_AS(counterexample_operators(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_operators(1.5, 0.1), std::invalid_argument);
}

TEST_CASE("counterexample obstruction minimax") {
  auto rep = counterexample_obstruction(0.5, 0.1);
  CHECK(rep.zero_first == 1.0);
  CHECK(rep.zero_second == -1.0);
  CHECK(rep.minimax == doctest::Approx(0.016).epsilon(1e-12));
  CHECK(rep.minimax > 0.0);

  // golden-section oracle over y in [-2, 2]
  auto obj = [&](double y) {
    return std::max(std::abs(rep.first_at(y)), std::abs(rep.second_at(y)));
  };
  double ystar = oracles::golden_section_min(obj, -2.0, 2.0);
  CHECK(ystar == doctest::Approx(rep.y_star).epsilon(1e-6));
  CHECK(obj(ystar) == doctest::Approx(rep.minimax).epsilon(1e-8));

  SUBCASE("margin degenerates as eps -> 0") {
    double prev = rep.minimax;
    for (double eps : {0.05, 0.02, 0.01, 0.005}) {
      double cur = counterexample_obstruction(0.5, eps).minimax;
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(prev < 1e-4);
  }
}
