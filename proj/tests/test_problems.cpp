#include <catch2/catch_amalgamated.hpp>

#include "sspvip/generator.hpp"
#include "sspvip/problems.hpp"

using namespace sspvip;

namespace {

// 1-D instance with known solution x* = y* = 1:
//   C1 = [0,1], F(x,y) = x - 2          (pushes x to the upper bound)
//   C2 = [0,3], G(x,y) = y - x          (y settles at x)
//   C3 = C4 = whole line, f = g = 0, A = B = identity
SspvipProblem scalar_problem() {
  SspvipProblem p;
  p.dims = Dims{1, 1, 1, 1};
  p.set_x = make_box({0.0}, {1.0});
  p.set_y = make_box({0.0}, {3.0});
  p.set_u = WholeSpace{1};
  p.set_v = WholeSpace{1};
  p.vi_first = make_affine(Matrix(1, 1, {1.0}), Matrix(1, 1), {-2.0},
                           Moduli{1.0, 1.0, 0.0, MonotoneArg::First});
  p.vi_second = make_affine(Matrix(1, 1, {-1.0}), Matrix(1, 1, {1.0}), {0.0},
                            Moduli{1.0, 1.0, 1.0, MonotoneArg::Second});
  p.image_first = detail::zero_bifunction(1, 1, 1, MonotoneArg::First);
  p.image_second = detail::zero_bifunction(1, 1, 1, MonotoneArg::Second);
  p.op_a = Matrix::identity(1);
  p.op_b = Matrix::identity(1);
  p.planted = Candidate{{1.0}, {1.0}};
  return p;
}

}  // namespace

TEST_CASE("starred norm adds the component norms") {
  CHECK(starred_norm(Vec{3.0, 4.0}, Vec{0.0}) == 5.0);
  CHECK(starred_distance(Candidate{{1.0}, {2.0}}, Candidate{{4.0}, {6.0}}) == 7.0);
}

TEST_CASE("validation accepts a consistent instance") {
  CHECK(validate(scalar_problem()).empty());
}

TEST_CASE("validation pinpoints structural mistakes") {
  SspvipProblem p = scalar_problem();
  p.op_a = Matrix(2, 1, {1.0, 0.0});
  auto bad = validate(p);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad[0].find("operator A") != std::string::npos);

  p = scalar_problem();
  p.set_y = make_box({0.0, 0.0}, {1.0, 1.0});
  CHECK_FALSE(validate(p).empty());

  p = scalar_problem();
  p.vi_first.declared.strong_monotonicity = -1.0;
  CHECK_FALSE(validate(p).empty());

  p = scalar_problem();
  p.planted = Candidate{{1.0, 2.0}, {1.0}};
  CHECK_FALSE(validate(p).empty());
}

TEST_CASE("residuals vanish exactly at the solution") {
  SspvipProblem p = scalar_problem();
  ResidualReport rep = residuals(p, *p.planted, 1.0, 1.0);
  CHECK(rep.r1 == 0.0);  // P(1 - 1*(1-2)) = P(2) = 1
  CHECK(rep.r2 == 0.0);
  CHECK(rep.r3 == 0.0);
  CHECK(rep.r4 == 0.0);
  CHECK(rep.all_feasible());
  CHECK(rep.max_residual() == 0.0);
}

TEST_CASE("residuals measure the projected-step defect") {
  SspvipProblem p = scalar_problem();
  // At x = 0.5: F = -1.5, P(0.5 + 1.5) = 1, defect 0.5.
  // At y = 2 (x = 0.5): G = 1.5, P(2 - 1.5) = 0.5, defect 1.5.
  ResidualReport rep = residuals(p, Candidate{{0.5}, {2.0}}, 1.0, 1.0);
  CHECK_THAT(rep.r1, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(rep.r2, Catch::Matchers::WithinAbs(1.5, 1e-15));
  CHECK(rep.r3 == 0.0);  // zero image map over the whole space
  CHECK_THROWS_AS(residuals(p, *p.planted, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(residuals(p, Candidate{{1.0, 2.0}, {1.0}}, 1.0, 1.0), DimensionError);
}

TEST_CASE("generated problems have exactly planted solutions") {
  GeneratorSpec spec;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SspvipProblem p = generate_synthetic(spec, seed);
    REQUIRE(p.planted.has_value());
    CHECK(validate(p).empty());
    for (double step : {0.01, 0.1, 1.0}) {
      ResidualReport rep = residuals(p, *p.planted, step, step);
      CHECK(rep.max_residual() <= 1e-10);
      CHECK(rep.all_feasible());
    }
  }
}

TEST_CASE("certified problem moduli match the declared values of the generator") {
  SspvipProblem p = generate_synthetic(GeneratorSpec{}, 5);
  ProblemModuli m = certified_problem_moduli(p);
  CHECK(m.vi_first.strong_monotonicity == p.vi_first.declared.strong_monotonicity);
  CHECK(m.vi_second.lip_first == p.vi_second.declared.lip_first);
  CHECK(m.norm_a > 0.0);
  CHECK(m.norm_b > 0.0);
}

TEST_CASE("dropping the image part leaves a two-variable problem") {
  SspvipProblem p = generate_synthetic(GeneratorSpec{}, 9);
  SspvipProblem svip = reduce_to_svip(p);
  CHECK(svip.dims == Dims{p.dims.x, p.dims.y, p.dims.x, p.dims.y});
  CHECK(validate(svip).empty());
  CHECK(std::holds_alternative<WholeSpace>(svip.set_u));
  CHECK(std::holds_alternative<WholeSpace>(svip.set_v));
  CHECK(detail::zero_matrix(std::get<AffineBifunction>(svip.image_first.impl).first_coeff));
  CHECK(svip.op_a == Matrix::identity(p.dims.x));
  REQUIRE(svip.planted.has_value());
  CHECK(svip.planted->x == p.planted->x);
  // the reduced problem's solution still solves its VIs
  CHECK(residuals(svip, *svip.planted, 0.5, 0.5).max_residual() <= 1e-10);
}

TEST_CASE("collapsing to one variable duplicates the first block") {
  GeneratorSpec spec;
  spec.dims = Dims{3, 3, 2, 2};
  SspvipProblem p = generate_diagonal(spec, 11);
  REQUIRE(p.planted.has_value());
  CHECK(p.planted->y == p.planted->x);
  CHECK(validate(p).empty());
  CHECK(residuals(p, *p.planted, 0.5, 0.5).max_residual() <= 1e-10);

  SspvipProblem sp = reduce_to_spvip(p);
  CHECK(sp.dims == Dims{3, 3, 2, 2});
  CHECK(validate(sp).empty());
  CHECK(sp.vi_second.declared.monotone_arg == MonotoneArg::Second);
  // G(x, y) = F(y, x) after the swap
  Vec a{0.1, -0.2, 0.3};
  Vec b{1.0, 0.5, -0.4};
  CHECK(evaluate(sp.vi_second, a, b) == evaluate(sp.vi_first, b, a));
  REQUIRE(sp.planted.has_value());
  CHECK(sp.planted->y == sp.planted->x);
  CHECK(residuals(sp, *sp.planted, 0.5, 0.5).max_residual() <= 1e-10);

  // a generic plant is off the diagonal and cannot be carried over
  SspvipProblem generic = generate_synthetic(spec, 11);
  CHECK_FALSE(reduce_to_spvip(generic).planted.has_value());

  // mismatched second-argument dimension cannot collapse
  GeneratorSpec rect;
  rect.dims = Dims{3, 2, 2, 2};
  SspvipProblem q = generate_synthetic(rect, 11);
  CHECK_THROWS_AS(reduce_to_spvip(q), DimensionError);
}
