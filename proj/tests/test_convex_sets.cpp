#include <catch2/catch_amalgamated.hpp>

#include "sspvip/convex_sets.hpp"
#include "sspvip/rng.hpp"

using namespace sspvip;

TEST_CASE("box projection clamps per coordinate") {
  ConvexSet box = make_box({-1.0, 0.0}, {1.0, 2.0});
  CHECK(project(box, Vec{3.0, -5.0}) == Vec{1.0, 0.0});
  CHECK(project(box, Vec{0.25, 1.5}) == Vec{0.25, 1.5});
  CHECK(contains(box, Vec{0.0, 0.0}, 0.0));
  CHECK_FALSE(contains(box, Vec{1.1, 0.0}, 1e-12));
  CHECK_THROWS_AS(make_box({0.0}, {1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(make_box({1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("ball projection is radial") {
  ConvexSet ball = make_ball({0.0, 0.0}, 1.0);
  Vec onto = project(ball, Vec{3.0, 4.0});
  CHECK_THAT(onto[0], Catch::Matchers::WithinAbs(0.6, 1e-15));
  CHECK_THAT(onto[1], Catch::Matchers::WithinAbs(0.8, 1e-15));
  Vec inside{0.1, -0.2};
  CHECK(project(ball, inside) == inside);  // interior points pass through untouched
  ConvexSet shifted = make_ball({1.0, 1.0}, 2.0);
  CHECK(project(shifted, Vec{1.0, 4.0}) == Vec{1.0, 3.0});
  CHECK_THROWS_AS(make_ball({0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("halfspace projection") {
  // {x : x1 + x2 <= 1}
  ConvexSet hs = make_halfspace({1.0, 1.0}, 1.0);
  Vec in{0.2, 0.3};
  CHECK(project(hs, in) == in);
  Vec out{1.0, 1.0};
  Vec proj = project(hs, out);
  CHECK_THAT(proj[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(proj[1], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(make_halfspace({0.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("hyperplane projection") {
  // {x : x1 - x2 = 0}
  ConvexSet hp = make_hyperplane({1.0, -1.0}, 0.0);
  Vec proj = project(hp, Vec{1.0, 0.0});
  CHECK_THAT(proj[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(proj[1], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK(contains(hp, Vec{2.0, 2.0}, 1e-12));
}

TEST_CASE("affine subspace projection") {
  // span{(1,1)} through the origin
  ConvexSet line = make_affine_subspace(Matrix(2, 1, {1.0, 1.0}), {0.0, 0.0});
  Vec proj = project(line, Vec{1.0, 0.0});
  CHECK_THAT(proj[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(proj[1], Catch::Matchers::WithinAbs(0.5, 1e-15));
  // shifted anchor
  ConvexSet off = make_affine_subspace(Matrix(2, 1, {1.0, 0.0}), {0.0, 3.0});
  CHECK(project(off, Vec{5.0, 7.0}) == Vec{5.0, 3.0});
}

TEST_CASE("whole space is the identity projection") {
  ConvexSet all = WholeSpace{3};
  Vec x{1.0, -2.0, 3.0};
  CHECK(project(all, x) == x);
  CHECK(contains(all, x, 0.0));
  CHECK(ambient_dim(all) == 3);
}

namespace {

std::vector<ConvexSet> sample_sets() {
  std::vector<ConvexSet> sets;
  sets.push_back(make_box({-1.0, -2.0, 0.0}, {1.0, 0.5, 4.0}));
  sets.push_back(make_ball({0.5, -0.5, 1.0}, 1.7));
  sets.push_back(make_halfspace({1.0, 2.0, -1.0}, 0.7));
  sets.push_back(make_hyperplane({0.0, 1.0, 1.0}, 2.0));
  sets.push_back(make_affine_subspace(Matrix(3, 2, {1, 0, 0, 1, 1, 1}), {0.0, 0.0, 1.0}));
  sets.push_back(ConvexSet{WholeSpace{3}});
  return sets;
}

}  // namespace

TEST_CASE("projection inequalities on random samples") {
  Rng rng(42);
  for (const ConvexSet& s : sample_sets()) {
    for (int k = 0; k < 20; ++k) {
      Vec x = rng.uniform_vec(3, -6.0, 6.0);
      Vec y = rng.uniform_vec(3, -6.0, 6.0);
      Vec px = project(s, x);
      Vec py = project(s, y);
      // firm nonexpansiveness
      Vec dpd = sub(px, py);
      CHECK(inner(sub(x, y), dpd) >= inner(dpd, dpd) - 1e-10);
      // variational characterization and distance bound, against a feasible w
      Vec w = project(s, rng.uniform_vec(3, -6.0, 6.0));
      CHECK(inner(sub(x, px), sub(w, px)) <= 1e-10);
      double lhs = inner(sub(x, w), sub(x, w));
      double rhs = inner(sub(x, px), sub(x, px)) + inner(sub(w, px), sub(w, px));
      CHECK(lhs >= rhs - 1e-10);
      // idempotence
      CHECK(distance(project(s, px), px) <= 1e-12);
    }
  }
}

TEST_CASE("violation is a signed margin") {
  ConvexSet box = make_box({0.0}, {1.0});
  CHECK(violation(box, Vec{0.5}) == -0.5);  // negative strictly inside
  CHECK_THAT(violation(box, Vec{2.0}), Catch::Matchers::WithinAbs(1.0, 1e-15));
  ConvexSet ball = make_ball({0.0, 0.0}, 2.0);
  CHECK(violation(ball, Vec{0.0, 5.0}) == 3.0);
}
