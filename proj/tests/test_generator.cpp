#include <catch2/catch_amalgamated.hpp>

#include "sspvip/generator.hpp"
#include "sspvip/io.hpp"

using namespace sspvip;

TEST_CASE("generation is deterministic in the seed") {
  GeneratorSpec spec;
  SspvipProblem a = generate_synthetic(spec, 123);
  SspvipProblem b = generate_synthetic(spec, 123);
  CHECK(problem_to_json(a) == problem_to_json(b));
  SspvipProblem c = generate_synthetic(spec, 124);
  CHECK(problem_to_json(a) != problem_to_json(c));
}

TEST_CASE("declared moduli survive an independent audit") {
  GeneratorSpec spec;
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
    SspvipProblem p = generate_synthetic(spec, seed);
    for (const Bifunction* h : {&p.vi_first, &p.vi_second, &p.image_first,
                                &p.image_second}) {
      AuditReport rep = audit_moduli(*h, 100, seed);
      INFO("seed " << seed);
      CHECK(rep.violations == 0);
      CHECK(rep.passed);
    }
  }
}

TEST_CASE("every set kind produces a feasible plant") {
  const SetKind kinds[] = {SetKind::Box, SetKind::Ball, SetKind::Halfspace,
                           SetKind::Hyperplane, SetKind::Affine, SetKind::Whole};
  for (SetKind k : kinds) {
    GeneratorSpec spec;
    spec.kind_x = spec.kind_y = spec.kind_u = spec.kind_v = k;
    SspvipProblem p = generate_synthetic(spec, 31);
    INFO("kind " << set_kind_name(k));
    CHECK(validate(p).empty());
    ResidualReport rep = residuals(p, *p.planted, 1.0, 1.0);
    CHECK(rep.max_residual() <= 1e-10);
    CHECK(rep.all_feasible());
  }
}

TEST_CASE("kind names round-trip") {
  for (SetKind k : {SetKind::Box, SetKind::Ball, SetKind::Halfspace,
                    SetKind::Hyperplane, SetKind::Affine, SetKind::Whole})
    CHECK(set_kind_from_name(set_kind_name(k)) == k);
  CHECK_THROWS_AS(set_kind_from_name("simplex"), std::invalid_argument);
}

TEST_CASE("spec bounds are enforced") {
  GeneratorSpec spec;
  spec.ratio_hi = 1.2;
  CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
  GeneratorSpec swapped;
  swapped.scale_lo = 2.0;
  swapped.scale_hi = 0.5;
  CHECK_THROWS_AS(generate_synthetic(swapped, 1), std::invalid_argument);
  GeneratorSpec zero;
  zero.dims = Dims{0, 4, 3, 3};
  CHECK_THROWS_AS(generate_synthetic(zero, 1), std::invalid_argument);
}

TEST_CASE("default draws admit certified parameters") {
  // the weak-coupling defaults should essentially always be certifiable
  int certified = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    SspvipProblem p = generate_synthetic(GeneratorSpec{}, seed);
    ProblemModuli m = certified_problem_moduli(p);
    CertificationReport rep = convergence_constants(m, auto_lambda(m));
    if (!rep.rho_interval) continue;
    CertificationReport cert = certify(m, rep.rho_interval->midpoint(), rep.lambda,
                                       0.5 * rep.gamma_interval.hi);
    if (cert.certified) ++certified;
  }
  CHECK(certified == 20);
}

TEST_CASE("diagonal instances mirror their x-blocks") {
  GeneratorSpec spec;
  spec.dims = Dims{4, 4, 3, 3};
  spec.kind_u = SetKind::Ball;
  SspvipProblem p = generate_diagonal(spec, 77);
  CHECK(validate(p).empty());
  CHECK(p.op_a == p.op_b);
  CHECK(set_to_json(p.set_x) == set_to_json(p.set_y));
  CHECK(set_to_json(p.set_u) == set_to_json(p.set_v));
  CHECK(p.planted->x == p.planted->y);
  // mirrored bifunction evaluates as the swap of the original
  Vec a{0.1, 0.2, 0.3, 0.4};
  Vec b{-1.0, 0.5, 0.0, 2.0};
  CHECK(evaluate(p.vi_second, a, b) == evaluate(p.vi_first, b, a));
  CHECK(residuals(p, *p.planted, 1.0, 1.0).max_residual() == 0.0);
}
