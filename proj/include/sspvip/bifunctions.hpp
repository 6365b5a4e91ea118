#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "sspvip/linalg.hpp"
#include "sspvip/rng.hpp"

// Bifunctions h(x, y) with certified monotonicity/Lipschitz moduli. The
// affine variant h(x,y) = M x + N y + c is the workhorse: its moduli are
// computable exactly (smallest eigenvalue of a symmetric part, operator
// norms), which is what makes convergence certification possible.

namespace sspvip {

enum class MonotoneArg { First, Second };

struct Moduli {
  double strong_monotonicity = 0.0;  // alpha/sigma: modulus in the monotone argument
  double lip_first = 0.0;            // Lipschitz coefficient of the monotone argument
  double lip_second = 0.0;           // Lipschitz coefficient of the other argument
  MonotoneArg monotone_arg = MonotoneArg::First;
};

inline bool moduli_consistent(const Moduli& m) {
  return std::isfinite(m.strong_monotonicity) && std::isfinite(m.lip_first) &&
         std::isfinite(m.lip_second) && m.strong_monotonicity >= 0.0 &&
         m.lip_first >= 0.0 && m.lip_second >= 0.0 &&
         m.strong_monotonicity <= m.lip_first + 1e-9;
}

struct AffineBifunction {
  Matrix first_coeff;   // applied to the first argument
  Matrix second_coeff;  // applied to the second argument
  Vec constant;
};

struct CallbackBifunction {
  std::size_t dim_first = 0, dim_second = 0, dim_out = 0;
  std::function<Vec(const Vec&, const Vec&)> fn;
};

struct Bifunction {
  std::variant<AffineBifunction, CallbackBifunction> impl;
  Moduli declared;
};

inline std::size_t dim_first(const Bifunction& h) {
  if (auto* a = std::get_if<AffineBifunction>(&h.impl)) return a->first_coeff.cols;
  return std::get<CallbackBifunction>(h.impl).dim_first;
}
inline std::size_t dim_second(const Bifunction& h) {
  if (auto* a = std::get_if<AffineBifunction>(&h.impl)) return a->second_coeff.cols;
  return std::get<CallbackBifunction>(h.impl).dim_second;
}
inline std::size_t dim_out(const Bifunction& h) {
  if (auto* a = std::get_if<AffineBifunction>(&h.impl)) return a->first_coeff.rows;
  return std::get<CallbackBifunction>(h.impl).dim_out;
}
inline bool is_affine(const Bifunction& h) {
  return std::holds_alternative<AffineBifunction>(h.impl);
}

inline Bifunction make_affine(Matrix first_coeff, Matrix second_coeff, Vec constant,
                              Moduli declared) {
  if (first_coeff.rows != second_coeff.rows || first_coeff.rows != constant.size())
    throw DimensionError("make_affine: output dimensions disagree");
  return Bifunction{AffineBifunction{std::move(first_coeff), std::move(second_coeff),
                                     std::move(constant)},
                    declared};
}

inline Vec evaluate(const Bifunction& h, const Vec& x, const Vec& y) {
  if (x.size() != dim_first(h) || y.size() != dim_second(h))
    throw DimensionError("evaluate: argument dims do not match bifunction");
  if (const auto* a = std::get_if<AffineBifunction>(&h.impl)) {
    Vec out = sspvip::apply(a->first_coeff, x);
    Vec ny = sspvip::apply(a->second_coeff, y);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += ny[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a->constant[i];
    return out;
  }
  const auto& cb = std::get<CallbackBifunction>(h.impl);
  Vec out = cb.fn(x, y);
  if (out.size() != cb.dim_out) throw DimensionError("evaluate: callback output dim");
  if (!all_finite(out)) throw std::runtime_error("evaluate: callback produced non-finite values");
  return out;
}

struct ModuliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact moduli for an affine bifunction: strong monotonicity is the smallest
// eigenvalue of the symmetric part of the monotone argument's coefficient,
// the Lipschitz constants are the coefficients' spectral norms.
inline Moduli certified_moduli(const Bifunction& h, double tol = 1e-10) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (!a) throw ModuliError("certified_moduli: only affine bifunctions are certifiable");
  const bool first = h.declared.monotone_arg == MonotoneArg::First;
  const Matrix& k = first ? a->first_coeff : a->second_coeff;
  const Matrix& j = first ? a->second_coeff : a->first_coeff;
  if (k.rows != k.cols)
    throw ModuliError("certified_moduli: monotone argument's coefficient must be square");
  double alpha = sym_eig_min(k, tol);
  if (alpha <= 0.0)
    throw ModuliError("certified_moduli: not strongly monotone (smallest symmetric-part "
                      "eigenvalue " + std::to_string(alpha) + ")");
  Moduli m;
  m.strong_monotonicity = alpha;
  m.lip_first = operator_norm(k, tol);
  m.lip_second = operator_norm(j, tol);
  m.monotone_arg = h.declared.monotone_arg;
  return m;
}

struct MixedModuli {
  double strong = 0.0;  // modulus of x -> h(x, x)
  double lip = 0.0;
};

// Moduli of the diagonal map x -> h(x,x) = (M+N)x + c.
inline MixedModuli mixed_certified_moduli(const Bifunction& h, double tol = 1e-10) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (!a) throw ModuliError("mixed_certified_moduli: only affine bifunctions");
  if (a->first_coeff.rows != a->first_coeff.cols || a->second_coeff.rows != a->second_coeff.cols)
    throw ModuliError("mixed_certified_moduli: diagonal needs square coefficients");
  Matrix sum = a->first_coeff;
  for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += a->second_coeff.data[i];
  double eta = sym_eig_min(sum, tol);
  if (eta <= 0.0)
    throw ModuliError("mixed_certified_moduli: diagonal map not strongly monotone");
  return MixedModuli{eta, operator_norm(sum, tol)};
}

struct AuditReport {
  int samples = 0;
  int violations = 0;
  // smallest observed slack; negative beyond the tolerance means a violation
  double worst_monotonicity_margin = 0.0;
  double worst_lipschitz_margin = 0.0;
  bool passed = true;
};

// Sampling falsifier for declared moduli. Draws random argument pairs and
// checks the strong-monotonicity and Lipschitz inequalities directly;
// anything worse than -1e-9 (relative to the pair's scale) is a violation.
inline AuditReport audit_moduli(const Bifunction& h, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n1 = dim_first(h), n2 = dim_second(h);
  const Moduli& m = h.declared;
  AuditReport rep;
  rep.samples = samples;
  rep.worst_monotonicity_margin = std::numeric_limits<double>::infinity();
  rep.worst_lipschitz_margin = std::numeric_limits<double>::infinity();
  const double tol = 1e-9;
  for (int s = 0; s < samples; ++s) {
    Vec x1 = rng.uniform_vec(n1, -5.0, 5.0), x2 = rng.uniform_vec(n1, -5.0, 5.0);
    Vec y1 = rng.uniform_vec(n2, -5.0, 5.0), y2 = rng.uniform_vec(n2, -5.0, 5.0);
    // strong monotonicity in the designated argument, other argument held fixed
    Vec hm1, hm2;
    double dd;
    if (m.monotone_arg == MonotoneArg::First) {
      hm1 = evaluate(h, x1, y1);
      hm2 = evaluate(h, x2, y1);
      Vec dx = sub(x1, x2);
      dd = inner(dx, dx);
      double lhs = inner(sub(hm1, hm2), dx);
      double margin = (lhs - m.strong_monotonicity * dd) / std::max(dd, 1e-30);
      rep.worst_monotonicity_margin = std::min(rep.worst_monotonicity_margin, margin);
      if (margin < -tol) ++rep.violations;
    } else {
      hm1 = evaluate(h, x1, y1);
      hm2 = evaluate(h, x1, y2);
      Vec dy = sub(y1, y2);
      dd = inner(dy, dy);
      double lhs = inner(sub(hm1, hm2), dy);
      double margin = (lhs - m.strong_monotonicity * dd) / std::max(dd, 1e-30);
      rep.worst_monotonicity_margin = std::min(rep.worst_monotonicity_margin, margin);
      if (margin < -tol) ++rep.violations;
    }
    // Lipschitz on the pair; lip_first multiplies the monotone argument's difference
    Vec e1 = evaluate(h, x1, y1), e2 = evaluate(h, x2, y2);
    double dx = distance(x1, x2), dy = distance(y1, y2);
    double bound = (m.monotone_arg == MonotoneArg::First)
                       ? m.lip_first * dx + m.lip_second * dy
                       : m.lip_first * dy + m.lip_second * dx;
    double lmargin = (bound - distance(e1, e2)) / std::max(dx + dy, 1e-30);
    rep.worst_lipschitz_margin = std::min(rep.worst_lipschitz_margin, lmargin);
    if (lmargin < -tol) ++rep.violations;
  }
  rep.passed = rep.violations == 0;
  return rep;
}

// Duplicate with swapped arguments: returns k(x,y) := h(y,x). Values agree
// with h on the diagonal; the monotone argument flips sides.
inline Bifunction swap_arguments(const Bifunction& h) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (!a) throw ModuliError("swap_arguments: only affine bifunctions");
  Moduli m = h.declared;
  m.monotone_arg =
      m.monotone_arg == MonotoneArg::First ? MonotoneArg::Second : MonotoneArg::First;
  return Bifunction{AffineBifunction{a->second_coeff, a->first_coeff, a->constant}, m};
}

}  // namespace sspvip
