#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspvip/analysis.hpp"
#include "sspvip/problems.hpp"

// Ground-truth references that deliberately avoid the main solvers' code
// paths. The 1-D enumerator solves box-constrained instances exactly by case
// analysis; the reference solver is a two-stage (predictor/corrector)
// projected method on the stacked system with the image defects pulled back
// into the variable spaces. Both certify their answers through the problem's
// residuals and refuse to return uncertified points.

namespace sspvip {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OracleMethod { Kkt1d, Extragradient, Planted };

inline std::string oracle_method_name(OracleMethod m) {
  switch (m) {
    case OracleMethod::Kkt1d: return "kkt-1d";
    case OracleMethod::Extragradient: return "extragradient";
    case OracleMethod::Planted: return "planted";
  }
  throw std::invalid_argument("oracle_method_name: unknown method");
}

struct OracleSolution {
  Candidate candidate;
  OracleMethod method = OracleMethod::Planted;
  ResidualReport certificate;              // at unit steps (rho = lambda = 1)
  int consistent_combinations = 0;         // kkt-1d only
};

struct CrossCheckReport {
  double distance = 0.0;  // ||a.x-b.x|| + ||a.y-b.y||
  double tol = 0.0;
  bool pass = false;
};

inline CrossCheckReport cross_check(const Candidate& a, const Candidate& b, double tol) {
  if (a.x.size() != b.x.size() || a.y.size() != b.y.size())
    throw DimensionError("cross_check: candidate dimensions disagree");
  CrossCheckReport rep;
  rep.distance = starred_distance(a, b);
  rep.tol = tol;
  rep.pass = rep.distance <= tol;
  return rep;
}

namespace detail {

struct Interval1d {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

inline Interval1d to_interval(const ConvexSet& s) {
  if (const auto* b = std::get_if<Box>(&s)) return {b->lower[0], b->upper[0]};
  if (const auto* bl = std::get_if<Ball>(&s))
    return {bl->center[0] - bl->radius, bl->center[0] + bl->radius};
  if (std::holds_alternative<WholeSpace>(s)) return {};
  throw OracleError("kkt_enumerate_1d: set is not an interval");
}

struct ScalarAffine {
  double cx = 0, cy = 0, c = 0;  // value = cx*x + cy*y + c
  double at(double x, double y) const { return cx * x + cy * y + c; }
};

inline ScalarAffine scalar_affine(const Bifunction& h) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (!a) throw OracleError("kkt_enumerate_1d: bifunction is not affine");
  return {a->first_coeff.data[0], a->second_coeff.data[0], a->constant[0]};
}

struct LinEq {
  double cx = 0, cy = 0, rhs = 0;
};

// Least-squares solve of up to four equations in (x, y) via the 2x2 normal
// system, in closed form.
inline bool solve_two_unknowns(const std::vector<LinEq>& eqs, double& x, double& y) {
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0, scale = 0;
  for (const LinEq& e : eqs) {
    a11 += e.cx * e.cx;
    a12 += e.cx * e.cy;
    a22 += e.cy * e.cy;
    b1 += e.cx * e.rhs;
    b2 += e.cy * e.rhs;
    scale = std::max({scale, std::abs(e.cx), std::abs(e.cy)});
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(std::abs(det) > 1e-12 * std::max(scale * scale, 1e-12) * scale * scale))
    return false;
  x = (b1 * a22 - b2 * a12) / det;
  y = (b2 * a11 - b1 * a12) / det;
  return std::isfinite(x) && std::isfinite(y);
}

}  // namespace detail

// Exact solver for fully one-dimensional box instances. Each VI component's
// solution is an interior zero of its scalar affine operator or an endpoint
// where the operator pushes outward; all 3^4 case combinations are solved as
// linear systems and checked. The problem's planted strong monotonicity makes
// exactly one combination survive in practice; that is asserted by tests, not
// assumed here.
inline OracleSolution kkt_enumerate_1d(const SspvipProblem& p) {
  if (p.dims.x != 1 || p.dims.y != 1 || p.dims.u != 1 || p.dims.v != 1)
    throw OracleError("kkt_enumerate_1d: all dimensions must be 1");
  const detail::Interval1d i1 = detail::to_interval(p.set_x);
  const detail::Interval1d i2 = detail::to_interval(p.set_y);
  const detail::Interval1d i3 = detail::to_interval(p.set_u);
  const detail::Interval1d i4 = detail::to_interval(p.set_v);
  const detail::ScalarAffine fF = detail::scalar_affine(p.vi_first);
  const detail::ScalarAffine fG = detail::scalar_affine(p.vi_second);
  const detail::ScalarAffine ff = detail::scalar_affine(p.image_first);
  const detail::ScalarAffine fg = detail::scalar_affine(p.image_second);
  const double a = p.op_a.data[0];
  const double b = p.op_b.data[0];

  const double atol = 1e-9;
  enum Mode { Zero = 0, Lower = 1, Upper = 2 };

  // equation contributed by one VI component in the given mode; false when the
  // mode is unavailable (infinite endpoint)
  auto equation = [&](int which, Mode mode, detail::LinEq& eq) {
    const detail::Interval1d iv = which == 0 ? i1 : which == 1 ? i2 : which == 2 ? i3 : i4;
    if (mode != Zero && !std::isfinite(mode == Lower ? iv.lo : iv.hi)) return false;
    switch (which) {
      case 0:
        eq = mode == Zero ? detail::LinEq{fF.cx, fF.cy, -fF.c}
                          : detail::LinEq{1.0, 0.0, mode == Lower ? iv.lo : iv.hi};
        return true;
      case 1:
        eq = mode == Zero ? detail::LinEq{fG.cx, fG.cy, -fG.c}
                          : detail::LinEq{0.0, 1.0, mode == Lower ? iv.lo : iv.hi};
        return true;
      case 2:
        eq = mode == Zero ? detail::LinEq{ff.cx * a, ff.cy * b, -ff.c}
                          : detail::LinEq{a, 0.0, mode == Lower ? iv.lo : iv.hi};
        return true;
      default:
        eq = mode == Zero ? detail::LinEq{fg.cx * a, fg.cy * b, -fg.c}
                          : detail::LinEq{0.0, b, mode == Lower ? iv.lo : iv.hi};
        return true;
    }
  };

  // one VI component's optimality at (x, y): value ~ 0 inside, pushes outward
  // at the active endpoint, and the point is feasible
  auto component_ok = [&](double z, const detail::Interval1d& iv, double val, Mode mode) {
    if (z < iv.lo - atol || z > iv.hi + atol) return false;
    if (mode == Zero) return std::abs(val) <= atol;
    if (mode == Lower) return std::abs(z - iv.lo) <= atol && val >= -atol;
    return std::abs(z - iv.hi) <= atol && val <= atol;
  };

  std::vector<Candidate> found;
  int combos = 0;
  for (int m1 = 0; m1 < 3; ++m1)
    for (int m2 = 0; m2 < 3; ++m2)
      for (int m3 = 0; m3 < 3; ++m3)
        for (int m4 = 0; m4 < 3; ++m4) {
          std::vector<detail::LinEq> eqs(4);
          const Mode modes[4] = {Mode(m1), Mode(m2), Mode(m3), Mode(m4)};
          bool available = true;
          for (int k = 0; k < 4 && available; ++k)
            available = equation(k, modes[k], eqs[k]);
          if (!available) continue;
          double x = 0, y = 0;
          if (!detail::solve_two_unknowns(eqs, x, y)) continue;
          bool consistent = true;
          for (const detail::LinEq& e : eqs)
            consistent = consistent &&
                         std::abs(e.cx * x + e.cy * y - e.rhs) <= atol * (1.0 + std::abs(e.rhs));
          if (!consistent) continue;
          const double u = a * x, v = b * y;
          if (!component_ok(x, i1, fF.at(x, y), modes[0])) continue;
          if (!component_ok(y, i2, fG.at(x, y), modes[1])) continue;
          if (!component_ok(u, i3, ff.at(u, v), modes[2])) continue;
          if (!component_ok(v, i4, fg.at(u, v), modes[3])) continue;
          ++combos;
          Candidate c{{x}, {y}};
          bool dup = false;
          for (const Candidate& f : found)
            dup = dup || starred_distance(f, c) <= 1e-9 * (1.0 + std::abs(x) + std::abs(y));
          if (!dup) found.push_back(std::move(c));
        }
  if (found.empty()) throw OracleError("kkt_enumerate_1d: no solution found");
  OracleSolution sol;
  sol.candidate = found.front();
  sol.method = OracleMethod::Kkt1d;
  sol.consistent_combinations = static_cast<int>(found.size());
  sol.certificate = residuals(p, sol.candidate, 1.0, 1.0);
  if (sol.certificate.max_residual() > 1e-8)
    throw OracleError("kkt_enumerate_1d: candidate failed residual certification");
  return sol;
}

namespace detail {

// Moduli that tolerate identically-zero bifunctions (contributing zeros), for
// step sizing only.
inline Moduli tolerant_moduli(const Bifunction& h, double tol) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (a && zero_matrix(a->first_coeff) && zero_matrix(a->second_coeff)) {
    Moduli zero;
    zero.monotone_arg = h.declared.monotone_arg;
    return zero;
  }
  return certified_moduli(h, tol);
}

}  // namespace detail

// Independent reference method: extragradient (predictor point, corrector
// step using the predictor's operator value) on C1 x C2, applied to the VI
// operators augmented with the pulled-back image defects
//   (x,y) -> ( F(x,y) + A'(Ax - P_C3(Ax - lambda f(Ax,By))),
//              G(x,y) + B'(By - P_C4(By - lambda g(Ax,By))) ).
// Every zero of the original system is a zero of this map inside the sets.
// The step is a conservative 0.3/L with L a certified upper bound on the
// map's Lipschitz constant. Returns only residual-certified points.
inline OracleSolution extragradient_reference(const SspvipProblem& p, double tol = 1e-8,
                                              std::size_t max_iters = 200000) {
  const Moduli mF = detail::tolerant_moduli(p.vi_first, 1e-10);
  const Moduli mG = detail::tolerant_moduli(p.vi_second, 1e-10);
  const Moduli mf = detail::tolerant_moduli(p.image_first, 1e-10);
  const Moduli mg = detail::tolerant_moduli(p.image_second, 1e-10);
  const double na = operator_norm(p.op_a);
  const double nb = operator_norm(p.op_b);
  ProblemModuli pm{mF, mG, mf, mg, na, nb};
  const double lambda = auto_lambda(pm);

  const double lip = std::max(mF.lip_first + mF.lip_second, mG.lip_first + mG.lip_second) +
                     na * na * (2.0 + lambda * mf.lip_first) +
                     nb * nb * (2.0 + lambda * mg.lip_first) +
                     lambda * (mf.lip_second + mg.lip_second) * na * nb;
  const double tau = 0.3 / std::max(lip, 1e-6);

  auto field = [&](const Vec& x, const Vec& y, Vec& out_x, Vec& out_y) {
    const Vec u = sspvip::apply(p.op_a, x);
    const Vec v = sspvip::apply(p.op_b, y);
    Vec su = u, sv = v;
    const Vec fu = evaluate(p.image_first, u, v);
    const Vec gv = evaluate(p.image_second, u, v);
    for (std::size_t i = 0; i < su.size(); ++i) su[i] -= lambda * fu[i];
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] -= lambda * gv[i];
    const Vec pu = project(p.set_u, su);
    const Vec pv = project(p.set_v, sv);
    out_x = evaluate(p.vi_first, x, y);
    out_y = evaluate(p.vi_second, x, y);
    const Vec cu = apply_adjoint(p.op_a, sub(u, pu));
    const Vec cv = apply_adjoint(p.op_b, sub(v, pv));
    for (std::size_t i = 0; i < out_x.size(); ++i) out_x[i] += cu[i];
    for (std::size_t i = 0; i < out_y.size(); ++i) out_y[i] += cv[i];
  };

  Vec x = project(p.set_x, Vec(p.dims.x, 0.0));
  Vec y = project(p.set_y, Vec(p.dims.y, 0.0));

  auto certified = [&](const Vec& cx, const Vec& cy, OracleSolution& sol) {
    ResidualReport rep = residuals(p, Candidate{cx, cy}, 1.0, 1.0);
    if (rep.max_residual() > tol) return false;
    sol.candidate = Candidate{cx, cy};
    sol.method = OracleMethod::Extragradient;
    sol.certificate = rep;
    return true;
  };

  OracleSolution sol;
  if (certified(x, y, sol)) return sol;
  Vec px, py, qx, qy;
  for (std::size_t it = 0; it < max_iters; ++it) {
    field(x, y, px, py);
    Vec sx = x, sy = y;
    for (std::size_t i = 0; i < sx.size(); ++i) sx[i] -= tau * px[i];
    for (std::size_t i = 0; i < sy.size(); ++i) sy[i] -= tau * py[i];
    const Vec mx = project(p.set_x, sx);
    const Vec my = project(p.set_y, sy);
    field(mx, my, qx, qy);
    Vec tx = x, ty = y;
    for (std::size_t i = 0; i < tx.size(); ++i) tx[i] -= tau * qx[i];
    for (std::size_t i = 0; i < ty.size(); ++i) ty[i] -= tau * qy[i];
    x = project(p.set_x, tx);
    y = project(p.set_y, ty);
    if (!all_finite(x) || !all_finite(y))
      throw OracleError("extragradient_reference: iteration diverged");
    if (certified(x, y, sol)) return sol;
  }
  throw OracleError("extragradient_reference: failed to certify within " +
                    std::to_string(max_iters) + " iterations");
}

inline OracleSolution planted_reference(const SspvipProblem& p, double tol = 1e-8) {
  if (!p.planted) throw OracleError("planted_reference: problem has no planted solution");
  OracleSolution sol;
  sol.candidate = *p.planted;
  sol.method = OracleMethod::Planted;
  sol.certificate = residuals(p, sol.candidate, 1.0, 1.0);
  if (sol.certificate.max_residual() > tol)
    throw OracleError("planted_reference: planted candidate failed certification");
  return sol;
}

}  // namespace sspvip
