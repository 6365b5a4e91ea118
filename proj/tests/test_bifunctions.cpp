#include <catch2/catch_amalgamated.hpp>

#include "sspvip/bifunctions.hpp"

using namespace sspvip;

namespace {

Bifunction sample_affine() {
  // h(x,y) = Kx + Ny + c with K = [[3,1],[-1,3]], N = [[0.2,0],[0,0.2]]
  Matrix k(2, 2, {3, 1, -1, 3});
  Matrix n(2, 2, {0.2, 0, 0, 0.2});
  Moduli m{3.0, std::sqrt(10.0), 0.2, MonotoneArg::First};
  return make_affine(k, n, {1.0, -1.0}, m);
}

}  // namespace

TEST_CASE("affine evaluation") {
  Bifunction h = sample_affine();
  Vec v = evaluate(h, Vec{1.0, 0.0}, Vec{0.0, 5.0});
  CHECK(v == Vec{3.0 + 0.0 + 1.0, -1.0 + 1.0 - 1.0});
  CHECK(dim_first(h) == 2);
  CHECK(dim_second(h) == 2);
  CHECK(dim_out(h) == 2);
  CHECK(is_affine(h));
  CHECK_THROWS_AS(evaluate(h, Vec{1.0}, Vec{0.0, 0.0}), DimensionError);
}

TEST_CASE("certified moduli from the coefficient matrices") {
  Bifunction h = sample_affine();
  Moduli m = certified_moduli(h);
  CHECK_THAT(m.strong_monotonicity, Catch::Matchers::WithinAbs(3.0, 1e-9));
  CHECK_THAT(m.lip_first, Catch::Matchers::WithinAbs(std::sqrt(10.0), 1e-9));
  CHECK_THAT(m.lip_second, Catch::Matchers::WithinAbs(0.2, 1e-9));
  CHECK(m.monotone_arg == MonotoneArg::First);

  // monotone in the second argument: roles of the coefficients swap
  Moduli m2{1.0, 2.0, 0.5, MonotoneArg::Second};
  Bifunction g = make_affine(Matrix(2, 2, {0.5, 0, 0, 0.5}),
                             Matrix(2, 2, {2, 0, 0, 1}), {0.0, 0.0}, m2);
  Moduli got = certified_moduli(g);
  CHECK_THAT(got.strong_monotonicity, Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK_THAT(got.lip_first, Catch::Matchers::WithinAbs(2.0, 1e-9));
  CHECK_THAT(got.lip_second, Catch::Matchers::WithinAbs(0.5, 1e-9));

  // not strongly monotone: symmetric part indefinite
  Bifunction bad = make_affine(Matrix(2, 2, {1, 0, 0, -1}), Matrix(2, 2),
                               {0.0, 0.0}, Moduli{0.1, 1.0, 0.0, MonotoneArg::First});
  CHECK_THROWS_AS(certified_moduli(bad), ModuliError);
}

TEST_CASE("mixed moduli bound the diagonal map") {
  // On the diagonal h(x,x) = (K+N)x + c.
  Bifunction h = sample_affine();
  MixedModuli m = mixed_certified_moduli(h);
  CHECK_THAT(m.strong, Catch::Matchers::WithinAbs(3.2, 1e-9));
  // K+N = [[3.2,1],[-1,3.2]], singular values sqrt(3.2^2+1)
  CHECK_THAT(m.lip, Catch::Matchers::WithinAbs(std::sqrt(3.2 * 3.2 + 1.0), 1e-9));
}

TEST_CASE("declared moduli are sanity checked") {
  CHECK(moduli_consistent(Moduli{1.0, 2.0, 0.1, MonotoneArg::First}));
  CHECK_FALSE(moduli_consistent(Moduli{-1.0, 2.0, 0.1, MonotoneArg::First}));
  CHECK_FALSE(moduli_consistent(Moduli{3.0, 2.0, 0.1, MonotoneArg::First}));  // strong > lip
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(moduli_consistent(Moduli{nan, 2.0, 0.1, MonotoneArg::First}));
}

TEST_CASE("random audit confirms certified moduli") {
  Bifunction h = sample_affine();
  AuditReport rep = audit_moduli(h, 200, 11);
  CHECK(rep.samples == 200);
  CHECK(rep.violations == 0);
  CHECK(rep.passed);

  // overstated strong monotonicity must be caught
  Bifunction lied = make_affine(Matrix(2, 2, {3, 1, -1, 3}), Matrix(2, 2),
                                {0.0, 0.0}, Moduli{5.0, 4.0, 0.0, MonotoneArg::First});
  AuditReport caught = audit_moduli(lied, 200, 11);
  CHECK(caught.violations > 0);
  CHECK_FALSE(caught.passed);
}

TEST_CASE("swapping arguments flips roles") {
  Bifunction h = sample_affine();
  Bifunction s = swap_arguments(h);
  CHECK(s.declared.monotone_arg == MonotoneArg::Second);
  CHECK(s.declared.strong_monotonicity == h.declared.strong_monotonicity);
  Vec a{0.3, -0.7};
  Vec b{1.1, 0.4};
  CHECK(evaluate(s, b, a) == evaluate(h, a, b));
}

TEST_CASE("callback bifunctions evaluate through the same interface") {
  Bifunction h{CallbackBifunction{2, 2, 2,
                                  [](const Vec& x, const Vec& y) {
                                    return Vec{x[0] + y[1], x[1] - y[0]};
                                  }},
               Moduli{0.0, 1.0, 1.0, MonotoneArg::First}};
  CHECK(evaluate(h, Vec{1.0, 2.0}, Vec{3.0, 4.0}) == Vec{5.0, -1.0});
  CHECK_FALSE(is_affine(h));
  CHECK_THROWS_AS(certified_moduli(h), ModuliError);
}
