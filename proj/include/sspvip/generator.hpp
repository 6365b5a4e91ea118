#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sspvip/problems.hpp"
#include "sspvip/rng.hpp"

// Synthetic instances with a planted solution. The construction works
// backwards: draw the solution pair first, build every set so the pair (and
// its image under A, B) sits in the set's relative interior, then cancel each
// bifunction's value at the plant through its constant term. Cancellation goes
// through the same evaluation routine the solvers call, so the bifunction
// values at the plant are exactly zero in floating point, not merely small,
// and the planted residuals vanish for every choice of step parameters.

namespace sspvip {

enum class SetKind { Box, Ball, Halfspace, Hyperplane, Affine, Whole };

inline std::string set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::Box: return "box";
    case SetKind::Ball: return "ball";
    case SetKind::Halfspace: return "halfspace";
    case SetKind::Hyperplane: return "hyperplane";
    case SetKind::Affine: return "affine";
    case SetKind::Whole: return "whole";
  }
  throw std::invalid_argument("set_kind_name: unknown kind");
}

inline SetKind set_kind_from_name(const std::string& s) {
  if (s == "box") return SetKind::Box;
  if (s == "ball") return SetKind::Ball;
  if (s == "halfspace") return SetKind::Halfspace;
  if (s == "hyperplane") return SetKind::Hyperplane;
  if (s == "affine") return SetKind::Affine;
  if (s == "whole") return SetKind::Whole;
  throw std::invalid_argument("set_kind_from_name: unknown kind '" + s + "'");
}

struct GeneratorSpec {
  Dims dims{4, 4, 3, 3};
  SetKind kind_x = SetKind::Box;
  SetKind kind_y = SetKind::Box;
  SetKind kind_u = SetKind::Box;
  SetKind kind_v = SetKind::Box;
  // strong-monotonicity / own-Lipschitz ratio of each monotone-argument
  // coefficient; high ratios with weak coupling keep the certification
  // comfortably inside its feasible region
  double ratio_lo = 0.94, ratio_hi = 0.985;
  // cross-coefficient norm relative to the block scale
  double coupling_lo = 0.01, coupling_hi = 0.06;
  double scale_lo = 0.8, scale_hi = 1.25;
  double opnorm_lo = 0.7, opnorm_hi = 1.5;
};

namespace detail {

inline void check_range(double lo, double hi, const char* name) {
  if (!(lo <= hi) || !(lo >= 0.0) || !std::isfinite(hi))
    throw std::invalid_argument(std::string("generate_synthetic: bad range for ") + name);
}

// Square coefficient with prescribed symmetric floor and spectral norm:
// scale*(ratio*I + w*U) with U a unit-norm skew part, w = sqrt(1-ratio^2).
// Its symmetric part is exactly scale*ratio*I and its norm is scale, so the
// realized strong/Lipschitz ratio lands on the requested value (measured
// afterwards rather than trusted).
inline Matrix monotone_block(Rng& rng, std::size_t n, double ratio, double scale) {
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) k.at(i, i) = scale * ratio;
  if (n >= 2) {
    Matrix r = rng.normal_matrix(n, n);
    Matrix skew(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) skew.at(i, j) = 0.5 * (r.at(i, j) - r.at(j, i));
    double nrm = operator_norm(skew);
    if (nrm > 0.0) {
      const double w = scale * std::sqrt(std::max(1.0 - ratio * ratio, 0.0)) / nrm;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k.at(i, j) += w * skew.at(i, j);
    }
  }
  return k;
}

inline Matrix scaled_block(Rng& rng, std::size_t rows, std::size_t cols, double target_norm) {
  Matrix m = rng.normal_matrix(rows, cols);
  double nrm = operator_norm(m);
  if (nrm == 0.0) return Matrix(rows, cols);
  for (double& v : m.data) v *= target_norm / nrm;
  return m;
}

// Set containing `point` in its relative interior (or exactly on it, for the
// flat kinds); membership of the point is exact by construction.
inline ConvexSet set_around(Rng& rng, SetKind kind, const Vec& point) {
  const std::size_t n = point.size();
  switch (kind) {
    case SetKind::Box: {
      Vec lower(n), upper(n);
      for (std::size_t i = 0; i < n; ++i) {
        lower[i] = point[i] - rng.uniform(0.5, 1.5);
        upper[i] = point[i] + rng.uniform(0.5, 1.5);
      }
      return make_box(std::move(lower), std::move(upper));
    }
    case SetKind::Ball: {
      const double radius = rng.uniform(0.8, 2.0);
      Vec dir = rng.normal_vec(n);
      double dn = norm(dir);
      Vec center = point;
      if (dn > 0.0)
        for (std::size_t i = 0; i < n; ++i) center[i] -= 0.4 * radius * dir[i] / dn;
      return make_ball(std::move(center), radius);
    }
    case SetKind::Halfspace: {
      Vec normal = rng.normal_vec(n);
      if (norm(normal) == 0.0) normal[0] = 1.0;
      const double offset = inner(normal, point) + rng.uniform(0.3, 1.0);
      return make_halfspace(std::move(normal), offset);
    }
    case SetKind::Hyperplane: {
      Vec normal = rng.normal_vec(n);
      if (norm(normal) == 0.0) normal[0] = 1.0;
      const double offset = inner(normal, point);
      return make_hyperplane(std::move(normal), offset);
    }
    case SetKind::Affine: {
      const std::size_t k = n > 1 ? n - 1 : 1;
      Matrix basis = rng.normal_matrix(n, k);
      return make_affine_subspace(basis, point);
    }
    case SetKind::Whole:
      return WholeSpace{n};
  }
  throw std::invalid_argument("set_around: unknown kind");
}

}  // namespace detail

inline SspvipProblem generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed) {
  const Dims d = spec.dims;
  if (d.x == 0 || d.y == 0 || d.u == 0 || d.v == 0)
    throw std::invalid_argument("generate_synthetic: dimensions must be positive");
  detail::check_range(spec.ratio_lo, spec.ratio_hi, "ratio");
  detail::check_range(spec.coupling_lo, spec.coupling_hi, "coupling");
  detail::check_range(spec.scale_lo, spec.scale_hi, "scale");
  detail::check_range(spec.opnorm_lo, spec.opnorm_hi, "opnorm");
  if (spec.ratio_hi > 1.0)
    throw std::invalid_argument("generate_synthetic: ratio cannot exceed 1");

  Rng rng(seed);
  SspvipProblem p;
  p.dims = d;

  p.op_a = detail::scaled_block(rng, d.u, d.x, rng.uniform(spec.opnorm_lo, spec.opnorm_hi));
  p.op_b = detail::scaled_block(rng, d.v, d.y, rng.uniform(spec.opnorm_lo, spec.opnorm_hi));

  Candidate star;
  star.x = rng.uniform_vec(d.x, -2.0, 2.0);
  star.y = rng.uniform_vec(d.y, -2.0, 2.0);
  const Vec u_star = sspvip::apply(p.op_a, star.x);
  const Vec v_star = sspvip::apply(p.op_b, star.y);

  p.set_x = detail::set_around(rng, spec.kind_x, star.x);
  p.set_y = detail::set_around(rng, spec.kind_y, star.y);
  p.set_u = detail::set_around(rng, spec.kind_u, u_star);
  p.set_v = detail::set_around(rng, spec.kind_v, v_star);

  auto draw_bifn = [&](std::size_t own, std::size_t other, MonotoneArg arg) {
    const double ratio = rng.uniform(spec.ratio_lo, spec.ratio_hi);
    const double scale = rng.uniform(spec.scale_lo, spec.scale_hi);
    const double coup = scale * rng.uniform(spec.coupling_lo, spec.coupling_hi);
    Matrix k = detail::monotone_block(rng, own, ratio, scale);
    Matrix n = detail::scaled_block(rng, own, other, coup);
    Moduli m;
    m.monotone_arg = arg;
    Bifunction h = arg == MonotoneArg::First
                       ? make_affine(std::move(k), std::move(n), Vec(own, 0.0), m)
                       : make_affine(std::move(n), std::move(k), Vec(own, 0.0), m);
    h.declared = certified_moduli(h);
    return h;
  };
  p.vi_first = draw_bifn(d.x, d.y, MonotoneArg::First);
  p.vi_second = draw_bifn(d.y, d.x, MonotoneArg::Second);
  p.image_first = draw_bifn(d.u, d.v, MonotoneArg::First);
  p.image_second = draw_bifn(d.v, d.u, MonotoneArg::Second);

  // cancel each bifunction at the plant through the shared evaluation path
  auto plant = [](Bifunction& h, const Vec& a, const Vec& b) {
    Vec val = evaluate(h, a, b);
    Vec& c = std::get<AffineBifunction>(h.impl).constant;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -val[i];
  };
  plant(p.vi_first, star.x, star.y);
  plant(p.vi_second, star.x, star.y);
  plant(p.image_first, u_star, v_star);
  plant(p.image_second, u_star, v_star);

  p.planted = std::move(star);
  return p;
}

// Single-variable instance embedded in the two-variable form: the y-blocks
// mirror the x-blocks (C2 = C1, C4 = C3, B = A, G and g are the argument
// swaps of F and f) and the plant sits on the diagonal, so F(x*, x*) = 0 and
// the collapse to one variable is exact. Only dims.x and dims.u of the spec
// matter here.
inline SspvipProblem generate_diagonal(const GeneratorSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.dims.x, m = spec.dims.u;
  if (n == 0 || m == 0)
    throw std::invalid_argument("generate_diagonal: dimensions must be positive");
  detail::check_range(spec.ratio_lo, spec.ratio_hi, "ratio");
  detail::check_range(spec.coupling_lo, spec.coupling_hi, "coupling");
  detail::check_range(spec.scale_lo, spec.scale_hi, "scale");
  detail::check_range(spec.opnorm_lo, spec.opnorm_hi, "opnorm");
  if (spec.ratio_hi > 1.0)
    throw std::invalid_argument("generate_diagonal: ratio cannot exceed 1");

  Rng rng(seed);
  SspvipProblem p;
  p.dims = Dims{n, n, m, m};

  p.op_a = detail::scaled_block(rng, m, n, rng.uniform(spec.opnorm_lo, spec.opnorm_hi));
  p.op_b = p.op_a;

  Vec x_star = rng.uniform_vec(n, -2.0, 2.0);
  const Vec u_star = sspvip::apply(p.op_a, x_star);

  p.set_x = detail::set_around(rng, spec.kind_x, x_star);
  p.set_y = p.set_x;
  p.set_u = detail::set_around(rng, spec.kind_u, u_star);
  p.set_v = p.set_u;

  auto draw_bifn = [&](std::size_t own) {
    const double ratio = rng.uniform(spec.ratio_lo, spec.ratio_hi);
    const double scale = rng.uniform(spec.scale_lo, spec.scale_hi);
    const double coup = scale * rng.uniform(spec.coupling_lo, spec.coupling_hi);
    Matrix k = detail::monotone_block(rng, own, ratio, scale);
    Matrix nm = detail::scaled_block(rng, own, own, coup);
    Moduli mod;
    mod.monotone_arg = MonotoneArg::First;
    Bifunction h = make_affine(std::move(k), std::move(nm), Vec(own, 0.0), mod);
    h.declared = certified_moduli(h);
    return h;
  };
  p.vi_first = draw_bifn(n);
  p.image_first = draw_bifn(m);

  auto plant = [](Bifunction& h, const Vec& a) {
    Vec val = evaluate(h, a, a);
    Vec& c = std::get<AffineBifunction>(h.impl).constant;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -val[i];
  };
  plant(p.vi_first, x_star);
  plant(p.image_first, u_star);

  // swapping shares the shifted constant, so the mirrors vanish at the
  // diagonal plant as well
  p.vi_second = swap_arguments(p.vi_first);
  p.image_second = swap_arguments(p.image_first);

  p.planted = Candidate{x_star, std::move(x_star)};
  return p;
}

}  // namespace sspvip
