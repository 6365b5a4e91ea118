#include <catch2/catch_amalgamated.hpp>

#include "sspvip/linalg.hpp"

using namespace sspvip;

TEST_CASE("inner product and norms") {
  Vec a{1.0, 2.0};
  Vec b{3.0, 4.0};
  CHECK(inner(a, b) == 11.0);
  CHECK(norm(b) == 5.0);
  CHECK(distance(a, b) == std::sqrt(8.0));
  CHECK_THROWS_AS(inner(a, Vec{1.0}), DimensionError);
}

TEST_CASE("vector arithmetic") {
  Vec a{1.0, -2.0, 3.0};
  Vec b{0.5, 0.5, 0.5};
  CHECK(add(a, b) == Vec{1.5, -1.5, 3.5});
  CHECK(sub(a, b) == Vec{0.5, -2.5, 2.5});
  CHECK(scale(2.0, a) == Vec{2.0, -4.0, 6.0});
  axpy(2.0, b, a);  // a += 2 b, in place
  CHECK(a == Vec{2.0, -1.0, 4.0});
}

TEST_CASE("matrix apply and adjoint") {
  Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
  Vec x{1.0, 1.0, 1.0};
  CHECK(sspvip::apply(m, x) == Vec{6.0, 15.0});
  Vec u{1.0, 1.0};
  CHECK(apply_adjoint(m, u) == Vec{5.0, 7.0, 9.0});
  Matrix mt = adjoint(m);
  CHECK(mt.rows == 3);
  CHECK(sspvip::apply(mt, u) == apply_adjoint(m, u));
  CHECK_THROWS_AS(sspvip::apply(m, Vec{1.0}), DimensionError);
  CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), DimensionError);
}

TEST_CASE("matmul against hand result") {
  Matrix a(2, 2, {1, 2, 3, 4});
  Matrix b(2, 2, {0, 1, 1, 0});
  Matrix c = matmul(a, b);
  CHECK(c.data == std::vector<double>{2, 1, 4, 3});
}

TEST_CASE("operator norm of a known matrix") {
  // [[3,1],[-1,3]]: singular values are both sqrt(10).
  Matrix m(2, 2, {3, 1, -1, 3});
  CHECK_THAT(operator_norm(m), Catch::Matchers::WithinAbs(std::sqrt(10.0), 1e-9));
  // Rank-one rectangular case: norm is the norm of the single row.
  Matrix r(1, 3, {2, 3, 6});
  CHECK_THAT(operator_norm(r), Catch::Matchers::WithinAbs(7.0, 1e-9));
  Matrix z(2, 2);
  CHECK(operator_norm(z) == 0.0);
}

TEST_CASE("smallest symmetric-part eigenvalue") {
  // Symmetric part of [[3,1],[-1,3]] is 3*I.
  Matrix m(2, 2, {3, 1, -1, 3});
  CHECK_THAT(sym_eig_min(m), Catch::Matchers::WithinAbs(3.0, 1e-9));
  Matrix d(3, 3, {5, 0, 0, 0, 2, 0, 0, 0, 7});
  CHECK_THAT(sym_eig_min(d), Catch::Matchers::WithinAbs(2.0, 1e-9));
  // Indefinite matrix: symmetric part has a negative eigenvalue.
  Matrix ind(2, 2, {1, 0, 0, -2});
  CHECK_THAT(sym_eig_min(ind), Catch::Matchers::WithinAbs(-2.0, 1e-9));
}

TEST_CASE("finiteness guard") {
  CHECK(all_finite(Vec{1.0, 2.0}));
  CHECK_FALSE(all_finite(Vec{1.0, std::numeric_limits<double>::quiet_NaN()}));
  CHECK_FALSE(all_finite(Vec{std::numeric_limits<double>::infinity()}));
}
