#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sspvip/analysis.hpp"
#include "sspvip/bifunctions.hpp"
#include "sspvip/convex_sets.hpp"

// Problem instances. An SspvipProblem couples two variational inequalities
// over (C1, C2) with two more over the images (C3, C4) under linear maps A, B:
// find (x, y) in C1 x C2 such that x solves the VI of F(., y) on C1, y solves
// the VI of G(x, .) on C2, and the image points Ax, By solve the VIs of
// f(., By) on C3 and g(Ax, .) on C4. The special cases (no image part, one
// variable) reuse the same type with trivial components.

namespace sspvip {

struct Dims {
  std::size_t x = 0, y = 0, u = 0, v = 0;
  bool operator==(const Dims&) const = default;
};

struct Candidate {
  Vec x, y;
};

inline double starred_norm(const Vec& x, const Vec& y) { return norm(x) + norm(y); }

inline double starred_distance(const Candidate& a, const Candidate& b) {
  return distance(a.x, b.x) + distance(a.y, b.y);
}

struct SspvipProblem {
  Dims dims;
  ConvexSet set_x, set_y, set_u, set_v;  // C1..C4
  Bifunction vi_first;                   // monotone in x
  Bifunction vi_second;                  // monotone in y
  Bifunction image_first;                // monotone in u = Ax
  Bifunction image_second;               // monotone in v = By
  Matrix op_a, op_b;
  std::optional<Candidate> planted;
};

inline std::vector<std::string> validate(const SspvipProblem& p) {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  expect(p.dims.x > 0 && p.dims.y > 0 && p.dims.u > 0 && p.dims.v > 0,
         "all dimensions must be positive");
  expect(p.op_a.rows == p.dims.u && p.op_a.cols == p.dims.x,
         "operator A must map the x-space to the u-space");
  expect(p.op_b.rows == p.dims.v && p.op_b.cols == p.dims.y,
         "operator B must map the y-space to the v-space");
  expect(ambient_dim(p.set_x) == p.dims.x, "C1 ambient dimension mismatch");
  expect(ambient_dim(p.set_y) == p.dims.y, "C2 ambient dimension mismatch");
  expect(ambient_dim(p.set_u) == p.dims.u, "C3 ambient dimension mismatch");
  expect(ambient_dim(p.set_v) == p.dims.v, "C4 ambient dimension mismatch");
  struct Sig {
    const Bifunction* h;
    const char* name;
    std::size_t d1, d2, dout;
    MonotoneArg arg;
    bool needs_strong;
  };
  const Sig sigs[] = {
      {&p.vi_first, "first VI bifunction", p.dims.x, p.dims.y, p.dims.x,
       MonotoneArg::First, true},
      {&p.vi_second, "second VI bifunction", p.dims.x, p.dims.y, p.dims.y,
       MonotoneArg::Second, true},
      {&p.image_first, "first image bifunction", p.dims.u, p.dims.v, p.dims.u,
       MonotoneArg::First, false},
      {&p.image_second, "second image bifunction", p.dims.u, p.dims.v, p.dims.v,
       MonotoneArg::Second, false},
  };
  for (const Sig& s : sigs) {
    expect(dim_first(*s.h) == s.d1 && dim_second(*s.h) == s.d2 && dim_out(*s.h) == s.dout,
           std::string(s.name) + ": signature does not match problem dimensions");
    expect(s.h->declared.monotone_arg == s.arg,
           std::string(s.name) + ": must be monotone in its " +
               (s.arg == MonotoneArg::First ? "first" : "second") + " argument");
    expect(moduli_consistent(s.h->declared),
           std::string(s.name) + ": declared moduli are inconsistent");
    if (s.needs_strong)
      expect(s.h->declared.strong_monotonicity > 0.0,
             std::string(s.name) + ": must be strongly monotone");
  }
  for (const ConvexSet* s : {&p.set_x, &p.set_y, &p.set_u, &p.set_v}) {
    if (const auto* b = std::get_if<Box>(s)) {
      for (std::size_t i = 0; i < b->lower.size(); ++i)
        if (!(b->lower[i] <= b->upper[i])) {
          bad.push_back("box set has an empty coordinate interval");
          break;
        }
    } else if (const auto* bl = std::get_if<Ball>(s)) {
      if (!(bl->radius >= 0.0)) bad.push_back("ball set has negative radius");
    }
  }
  if (p.planted) {
    expect(p.planted->x.size() == p.dims.x && p.planted->y.size() == p.dims.y,
           "planted candidate dimensions mismatch");
  }
  return bad;
}

struct ResidualReport {
  double r1 = 0, r2 = 0, r3 = 0, r4 = 0;  // fixed-point defects of the four VIs
  bool feas_x = false, feas_y = false, feas_u = false, feas_v = false;
  double max_residual() const { return std::max(std::max(r1, r2), std::max(r3, r4)); }
  bool all_feasible() const { return feas_x && feas_y && feas_u && feas_v; }
};

// A candidate solves the problem exactly when all four defects vanish: each
// VI solution is a fixed point of its projected step, for any positive step.
inline ResidualReport residuals(const SspvipProblem& p, const Candidate& c, double rho,
                                double lambda, double tol = 1e-9) {
  if (!(rho > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("residuals: steps must be positive");
  if (c.x.size() != p.dims.x || c.y.size() != p.dims.y)
    throw DimensionError("residuals: candidate dimensions mismatch");
  const Vec u = sspvip::apply(p.op_a, c.x);
  const Vec v = sspvip::apply(p.op_b, c.y);
  ResidualReport rep;
  auto defect = [](const ConvexSet& set, const Vec& z, double step, const Vec& val) {
    Vec shifted = z;
    for (std::size_t i = 0; i < z.size(); ++i) shifted[i] -= step * val[i];
    return distance(z, project(set, shifted));
  };
  rep.r1 = defect(p.set_x, c.x, rho, evaluate(p.vi_first, c.x, c.y));
  rep.r2 = defect(p.set_y, c.y, rho, evaluate(p.vi_second, c.x, c.y));
  rep.r3 = defect(p.set_u, u, lambda, evaluate(p.image_first, u, v));
  rep.r4 = defect(p.set_v, v, lambda, evaluate(p.image_second, u, v));
  rep.feas_x = contains(p.set_x, c.x, tol);
  rep.feas_y = contains(p.set_y, c.y, tol);
  rep.feas_u = contains(p.set_u, u, tol);
  rep.feas_v = contains(p.set_v, v, tol);
  return rep;
}

namespace detail {

inline bool zero_matrix(const Matrix& m) {
  for (double v : m.data)
    if (v != 0.0) return false;
  return true;
}

inline Bifunction zero_bifunction(std::size_t d1, std::size_t d2, std::size_t dout,
                                  MonotoneArg arg) {
  Moduli m;
  m.monotone_arg = arg;
  return make_affine(Matrix(dout, d1), Matrix(dout, d2), Vec(dout, 0.0), m);
}

}  // namespace detail

// Moduli with machine-checked certificates. Image bifunctions are allowed to
// be identically zero (trivial image constraints); they contribute (0,0,0).
inline ProblemModuli certified_problem_moduli(const SspvipProblem& p, double tol = 1e-10) {
  ProblemModuli m;
  m.vi_first = certified_moduli(p.vi_first, tol);
  m.vi_second = certified_moduli(p.vi_second, tol);
  auto image = [&](const Bifunction& h) {
    const auto* a = std::get_if<AffineBifunction>(&h.impl);
    if (a && detail::zero_matrix(a->first_coeff) && detail::zero_matrix(a->second_coeff)) {
      Moduli zero;
      zero.monotone_arg = h.declared.monotone_arg;
      return zero;
    }
    return certified_moduli(h, tol);
  };
  m.image_first = image(p.image_first);
  m.image_second = image(p.image_second);
  m.norm_a = operator_norm(p.op_a, tol);
  m.norm_b = operator_norm(p.op_b, tol);
  return m;
}

// Strips the image-space part: identity operators, unconstrained image sets,
// zero image bifunctions. The corrected iteration on the result reproduces the
// plain two-operator iteration on the original bit for bit, because the
// correction term is exactly zero at every step.
inline SspvipProblem reduce_to_svip(const SspvipProblem& p) {
  SspvipProblem r;
  r.dims = Dims{p.dims.x, p.dims.y, p.dims.x, p.dims.y};
  r.set_x = p.set_x;
  r.set_y = p.set_y;
  r.set_u = WholeSpace{p.dims.x};
  r.set_v = WholeSpace{p.dims.y};
  r.vi_first = p.vi_first;
  r.vi_second = p.vi_second;
  r.image_first = detail::zero_bifunction(p.dims.x, p.dims.y, p.dims.x, MonotoneArg::First);
  r.image_second =
      detail::zero_bifunction(p.dims.x, p.dims.y, p.dims.y, MonotoneArg::Second);
  r.op_a = Matrix::identity(p.dims.x);
  r.op_b = Matrix::identity(p.dims.y);
  r.planted = p.planted;
  return r;
}

// Duplicates the single-variable problem across both tracks: the y-components
// are argument-swapped copies, so starting from y0 = x0 both tracks compute
// identical vectors and the two-variable iteration collapses to the
// one-variable one.
inline SspvipProblem reduce_to_spvip(const SspvipProblem& p) {
  if (dim_second(p.vi_first) != p.dims.x)
    throw DimensionError(
        "reduce_to_spvip: the VI bifunction must accept the x-space in both arguments");
  if (dim_second(p.image_first) != p.dims.u)
    throw DimensionError(
        "reduce_to_spvip: the image bifunction must accept the u-space in both arguments");
  SspvipProblem r;
  r.dims = Dims{p.dims.x, p.dims.x, p.dims.u, p.dims.u};
  r.set_x = p.set_x;
  r.set_y = p.set_x;
  r.set_u = p.set_u;
  r.set_v = p.set_u;
  r.vi_first = p.vi_first;
  r.vi_second = swap_arguments(p.vi_first);
  r.image_first = p.image_first;
  r.image_second = swap_arguments(p.image_first);
  r.op_a = p.op_a;
  r.op_b = p.op_a;
  // A plant survives only when it already sits on the diagonal; duplicating a
  // generic (x*, y*) would claim F(x*, x*) = 0, which does not hold.
  if (p.planted && p.planted->y == p.planted->x)
    r.planted = Candidate{p.planted->x, p.planted->x};
  return r;
}

}  // namespace sspvip
