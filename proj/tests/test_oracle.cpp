#include <catch2/catch_amalgamated.hpp>

#include "sspvip/generator.hpp"
#include "sspvip/oracle.hpp"

using namespace sspvip;

namespace {

Matrix identity1() {
  Matrix m(1, 1);
  m.at(0, 0) = 1.0;
  return m;
}

Bifunction scalar_affine_bifn(double cx, double cy, double c) {
  AffineBifunction a;
  a.first_coeff = Matrix(1, 1);
  a.first_coeff.at(0, 0) = cx;
  a.second_coeff = Matrix(1, 1);
  a.second_coeff.at(0, 0) = cy;
  a.constant = {c};
  Bifunction h;
  h.impl = a;
  h.declared.monotone_arg = MonotoneArg::First;
  return h;
}

// 1-D instance with a trivial image stage (whole-space image sets, zero image
// maps), so the solution is determined by F and G alone.
SspvipProblem scalar_system(Bifunction F, Bifunction G, ConvexSet set_x, ConvexSet set_y) {
  SspvipProblem p;
  p.dims = {1, 1, 1, 1};
  p.set_x = std::move(set_x);
  p.set_y = std::move(set_y);
  p.set_u = WholeSpace{1};
  p.set_v = WholeSpace{1};
  p.vi_first = std::move(F);
  p.vi_second = std::move(G);
  p.image_first = scalar_affine_bifn(0.0, 0.0, 0.0);
  p.image_second = scalar_affine_bifn(0.0, 0.0, 0.0);
  p.op_a = identity1();
  p.op_b = identity1();
  return p;
}

}  // namespace

TEST_CASE("kkt enumerator finds the interior zero of a decoupled system") {
  // F(x,y) = 2x - 3 vanishes at x = 1.5 inside [-5,5]; G(x,y) = y - x chains
  // the second variable to the first.
  SspvipProblem p = scalar_system(scalar_affine_bifn(2.0, 0.0, -3.0),
                                  scalar_affine_bifn(-1.0, 1.0, 0.0),
                                  Box{{-5.0}, {5.0}}, Box{{-5.0}, {5.0}});
  OracleSolution sol = kkt_enumerate_1d(p);
  CHECK(sol.method == OracleMethod::Kkt1d);
  CHECK(sol.candidate.x[0] == Catch::Approx(1.5).margin(1e-12));
  CHECK(sol.candidate.y[0] == Catch::Approx(1.5).margin(1e-12));
  CHECK(sol.consistent_combinations == 1);
  CHECK(sol.certificate.max_residual() <= 1e-8);
}

TEST_CASE("kkt enumerator picks the active lower bound") {
  // F(x,y) = x is positive on all of C1 = [1,2], so it pushes against the
  // lower endpoint; the solution sits at x = 1 with F(1) > 0.
  SspvipProblem p = scalar_system(scalar_affine_bifn(1.0, 0.0, 0.0),
                                  scalar_affine_bifn(-1.0, 1.0, 0.0),
                                  Box{{1.0}, {2.0}}, Box{{-5.0}, {5.0}});
  OracleSolution sol = kkt_enumerate_1d(p);
  CHECK(sol.candidate.x[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(sol.candidate.y[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(sol.consistent_combinations == 1);
}

TEST_CASE("kkt enumerator handles an active image constraint") {
  // f(u,v) = u - 2 wants u = 2, but the image box caps u at 1; there f = -1,
  // which keeps the projected point pinned to the upper endpoint. F = x - 1
  // places the variable-stage zero at the same spot.
  SspvipProblem p;
  p.dims = {1, 1, 1, 1};
  p.set_x = Box{{-10.0}, {10.0}};
  p.set_y = Box{{-10.0}, {10.0}};
  p.set_u = Box{{0.0}, {1.0}};
  p.set_v = WholeSpace{1};
  p.vi_first = scalar_affine_bifn(1.0, 0.0, -1.0);
  p.vi_second = scalar_affine_bifn(-1.0, 1.0, 0.0);  // y = x
  p.image_first = scalar_affine_bifn(1.0, 0.0, -2.0);
  p.image_second = scalar_affine_bifn(0.0, 0.0, 0.0);
  p.op_a = identity1();
  p.op_b = identity1();
  OracleSolution sol = kkt_enumerate_1d(p);
  CHECK(sol.candidate.x[0] == Catch::Approx(1.0).margin(1e-9));
  CHECK(sol.candidate.y[0] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("kkt enumerator agrees with planted 1-D instances") {
  GeneratorSpec spec;
  spec.dims = {1, 1, 1, 1};
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    SspvipProblem p = generate_synthetic(spec, seed);
    REQUIRE(p.planted.has_value());
    OracleSolution sol = kkt_enumerate_1d(p);
    CHECK(starred_distance(sol.candidate, *p.planted) <= 1e-8);
  }
}

TEST_CASE("kkt enumerator rejects unsupported inputs") {
  GeneratorSpec spec;
  CHECK_THROWS_AS(kkt_enumerate_1d(generate_synthetic(spec, 3)), OracleError);

  SspvipProblem p = scalar_system(scalar_affine_bifn(2.0, 0.0, -3.0),
                                  scalar_affine_bifn(-1.0, 1.0, 0.0),
                                  Halfspace{{1.0}, 2.0}, Box{{-5.0}, {5.0}});
  CHECK_THROWS_AS(kkt_enumerate_1d(p), OracleError);

  SspvipProblem q = scalar_system(scalar_affine_bifn(2.0, 0.0, -3.0),
                                  scalar_affine_bifn(-1.0, 1.0, 0.0),
                                  Box{{-5.0}, {5.0}}, Box{{-5.0}, {5.0}});
  CallbackBifunction cb;
  cb.dim_first = 1;
  cb.dim_second = 1;
  cb.fn = [](const Vec& a, const Vec&) { return Vec{a[0] * a[0]}; };
  q.vi_first = Bifunction{cb, q.vi_first.declared};
  CHECK_THROWS_AS(kkt_enumerate_1d(q), OracleError);
}

TEST_CASE("reference solver certifies generated problems against the plant") {
  GeneratorSpec spec;
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    SspvipProblem p = generate_synthetic(spec, seed);
    OracleSolution sol = extragradient_reference(p);
    CHECK(sol.method == OracleMethod::Extragradient);
    CHECK(sol.certificate.max_residual() <= 1e-8);
    CrossCheckReport rep = cross_check(sol.candidate, *p.planted, 1e-6);
    CHECK(rep.pass);
  }
}

TEST_CASE("reference solver returns a certified start immediately") {
  // All four maps identically zero: every feasible point solves the system,
  // so the projected origin is already certified and comes back untouched.
  SspvipProblem p = scalar_system(scalar_affine_bifn(0.0, 0.0, 0.0),
                                  scalar_affine_bifn(0.0, 0.0, 0.0),
                                  Box{{-1.0}, {2.0}}, Box{{0.5}, {2.0}});
  OracleSolution sol = extragradient_reference(p);
  CHECK(sol.candidate.x == Vec{0.0});
  CHECK(sol.candidate.y == Vec{0.5});
  CHECK(sol.certificate.max_residual() == 0.0);
}

TEST_CASE("reference solver gives up honestly on a tiny budget") {
  GeneratorSpec spec;
  SspvipProblem p = generate_synthetic(spec, 31);
  CHECK_THROWS_AS(extragradient_reference(p, 1e-12, 1), OracleError);
}

TEST_CASE("planted reference hands back the stored solution") {
  GeneratorSpec spec;
  SspvipProblem p = generate_synthetic(spec, 41);
  OracleSolution sol = planted_reference(p);
  CHECK(sol.method == OracleMethod::Planted);
  CHECK(sol.candidate.x == p.planted->x);
  CHECK(sol.candidate.y == p.planted->y);
  CHECK(sol.certificate.max_residual() <= 1e-10);

  SECTION("refuses a corrupted plant") {
    p.planted->x[0] += 0.5;
    CHECK_THROWS_AS(planted_reference(p), OracleError);
  }
  SECTION("refuses a missing plant") {
    p.planted.reset();
    CHECK_THROWS_AS(planted_reference(p), OracleError);
  }
}

TEST_CASE("cross check measures the summed distance and enforces dimensions") {
  Candidate a{{1.0, 2.0}, {3.0}};
  Candidate b{{1.0, 2.0}, {3.5}};
  CrossCheckReport rep = cross_check(a, b, 0.6);
  CHECK(rep.distance == Catch::Approx(0.5));
  CHECK(rep.tol == 0.6);
  CHECK(rep.pass);
  CHECK_FALSE(cross_check(a, b, 0.4).pass);
  Candidate c{{1.0}, {3.0}};
  CHECK_THROWS_AS(cross_check(a, c, 1.0), DimensionError);
}

TEST_CASE("oracle method names round through") {
  CHECK(oracle_method_name(OracleMethod::Kkt1d) == "kkt-1d");
  CHECK(oracle_method_name(OracleMethod::Extragradient) == "extragradient");
  CHECK(oracle_method_name(OracleMethod::Planted) == "planted");
}
