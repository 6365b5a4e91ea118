#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspvip/bifunctions.hpp"
#include "sspvip/schedule.hpp"

// Convergence certification. Given the four bifunctions' moduli and the two
// operator norms, these routines evaluate every constant of the linear
// convergence analysis: the image-space damping factors theta_{i+2}, the
// delta/p/q chain, the feasible step interval for rho, the admissible gamma
// range, and the per-iteration contraction factor theta = max{k1, k2}. A
// parameter triple (rho, lambda, gamma) is "certified" when every hypothesis
// holds and theta < 1; the solver's a-priori rate bound is valid exactly then.

namespace sspvip {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }  // open interval
  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// sqrt(1 - 2*step*strong + step^2*lip^2): the contraction factor of a single
// projected step x -> P(x - step*h(x)) under strong monotonicity and
// Lipschitz continuity.
inline double theta_factor(double step, double strong, double lip) {
  double rad = 1.0 - 2.0 * step * strong + step * step * lip * lip;
  if (rad < 0.0)
    throw AnalysisError("theta_factor: negative radicand " + std::to_string(rad) +
                        " (step=" + std::to_string(step) + ", strong=" +
                        std::to_string(strong) + ", lip=" + std::to_string(lip) + ")");
  return std::sqrt(rad);
}

// Moduli of the full problem: the VI pair (monotone in x resp. y) and the
// image-space pair (monotone in u resp. v), plus the linear operators' norms.
struct ProblemModuli {
  Moduli vi_first;      // monotone in its first argument
  Moduli vi_second;     // monotone in its second argument
  Moduli image_first;   // monotone in its first argument
  Moduli image_second;  // monotone in its second argument
  double norm_a = 0.0;
  double norm_b = 0.0;
};

struct IndexConstants {
  double theta_image = 0.0;  // theta_{i+2}
  double delta = 0.0;        // 1 + 2*theta_image
  double p = 0.0;
  double q = 0.0;
  std::optional<double> center;  // L_i, absent when undefined
  std::optional<double> radius;  // Delta_i, absent when undefined
  bool alpha_ok = false;         // alpha_i > p_i q_i + sqrt((beta_i^2-p_i^2)(1-q_i^2))
  bool beta_ok = false;          // beta_i > p_i
  bool q_ok = false;             // q_i < 1
  bool all_ok() const { return alpha_ok && beta_ok && q_ok; }
};

struct CertificationReport {
  double lambda = 0.0;
  IndexConstants index1, index2;
  std::optional<Interval> rho_interval;
  Interval gamma_interval{0.0, std::numeric_limits<double>::infinity()};
  double norm_a = 0.0, norm_b = 0.0;
  // filled in once a concrete (rho, gamma) is supplied
  std::optional<double> rho, gamma, theta;
  bool certified = false;
  // sharper per-run variants of delta_i using the actual gamma; diagnostic only
  std::optional<double> delta1_tight, delta2_tight;
  std::vector<std::string> notes;
};

inline Interval gamma_interval(double norm_a, double norm_b) {
  if (norm_a < 0.0 || norm_b < 0.0)
    throw AnalysisError("gamma_interval: operator norms must be nonnegative");
  double hi = std::numeric_limits<double>::infinity();
  if (norm_a > 0.0) hi = std::min(hi, 2.0 / (norm_a * norm_a));
  if (norm_b > 0.0) hi = std::min(hi, 2.0 / (norm_b * norm_b));
  return Interval{0.0, hi};
}

namespace detail {

inline void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw AnalysisError("step parameter for the image-space projections must be positive");
}

inline IndexConstants index_constants(double alpha, double beta, double theta_image,
                                      double e_own, double eps_other, double e_other) {
  IndexConstants c;
  c.theta_image = theta_image;
  c.delta = 1.0 + 2.0 * theta_image;
  c.p = eps_other * e_other / e_own;
  c.q = 1.0 / e_own;
  c.beta_ok = beta > c.p;
  c.q_ok = c.q < 1.0;
  if (c.beta_ok && c.q_ok) {
    const double denom = beta * beta - c.p * c.p;
    const double head = alpha - c.p * c.q;
    const double disc = head * head - denom * (1.0 - c.q * c.q);
    c.alpha_ok = head > 0.0 && disc > 0.0;
    if (disc >= 0.0) {
      c.center = head / denom;
      c.radius = std::sqrt(disc) / denom;
    }
  }
  return c;
}

}  // namespace detail

// The rho-independent part of the certification: damping factors, the
// delta/p/q chain per index, hypothesis flags, and the admissible gamma range.
inline CertificationReport convergence_constants(const ProblemModuli& m, double lambda) {
  detail::check_lambda(lambda);
  for (const Moduli* mm : {&m.vi_first, &m.vi_second, &m.image_first, &m.image_second})
    if (!moduli_consistent(*mm))
      throw AnalysisError("convergence_constants: inconsistent moduli");
  CertificationReport rep;
  rep.lambda = lambda;
  rep.norm_a = m.norm_a;
  rep.norm_b = m.norm_b;
  const double theta3 = theta_factor(lambda, m.image_first.strong_monotonicity,
                                     m.image_first.lip_first);
  const double theta4 = theta_factor(lambda, m.image_second.strong_monotonicity,
                                     m.image_second.lip_first);
  const double delta1 = 1.0 + 2.0 * theta3;
  const double delta2 = 1.0 + 2.0 * theta4;
  const double nu1 = m.image_first.lip_second;
  const double nu2 = m.image_second.lip_second;
  const double e1 = delta1 + 2.0 * lambda * nu2;
  const double e2 = delta2 + 2.0 * lambda * nu1;
  rep.index1 = detail::index_constants(m.vi_first.strong_monotonicity,
                                       m.vi_first.lip_first, theta3, e1,
                                       m.vi_second.lip_second, e2);
  rep.index2 = detail::index_constants(m.vi_second.strong_monotonicity,
                                       m.vi_second.lip_first, theta4, e2,
                                       m.vi_first.lip_second, e1);
  rep.gamma_interval = gamma_interval(m.norm_a, m.norm_b);
  if (rep.index1.all_ok() && rep.index2.all_ok()) {
    double lo = std::max(*rep.index1.center - *rep.index1.radius,
                         *rep.index2.center - *rep.index2.radius);
    double hi = std::min(*rep.index1.center + *rep.index1.radius,
                         *rep.index2.center + *rep.index2.radius);
    lo = std::max(lo, 0.0);
    if (lo < hi) rep.rho_interval = Interval{lo, hi};
  }
  return rep;
}

inline std::optional<Interval> feasible_rho_interval(const CertificationReport& rep) {
  return rep.rho_interval;
}

inline std::optional<Interval> feasible_rho_interval(const ProblemModuli& m, double lambda) {
  return convergence_constants(m, lambda).rho_interval;
}

struct ContractionDetail {
  double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
  double theta1 = 0, theta2 = 0;  // VI-step damping at this rho
  double k1 = 0, k2 = 0;
  double theta = 0;  // max(k1, k2)
};

// Per-iteration contraction factor at a concrete (rho, lambda). Computed from
// the e-coefficients; the identities p_i = e_{i+2}/e_i and q_i = 1/e_i tie
// these back to the interval constants above.
inline ContractionDetail contraction_detail(const ProblemModuli& m, double rho,
                                            double lambda) {
  detail::check_lambda(lambda);
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw AnalysisError("contraction_detail: rho must be positive");
  ContractionDetail d;
  const double theta3 = theta_factor(lambda, m.image_first.strong_monotonicity,
                                     m.image_first.lip_first);
  const double theta4 = theta_factor(lambda, m.image_second.strong_monotonicity,
                                     m.image_second.lip_first);
  const double delta1 = 1.0 + 2.0 * theta3;
  const double delta2 = 1.0 + 2.0 * theta4;
  const double nu1 = m.image_first.lip_second;
  const double nu2 = m.image_second.lip_second;
  const double eps1 = m.vi_first.lip_second;
  const double eps2 = m.vi_second.lip_second;
  d.e1 = delta1 + 2.0 * lambda * nu2;
  d.e2 = delta2 + 2.0 * lambda * nu1;
  d.e3 = delta2 * eps2 + 2.0 * lambda * nu1 * eps2;
  d.e4 = delta1 * eps1 + 2.0 * lambda * nu2 * eps1;
  d.theta1 = theta_factor(rho, m.vi_first.strong_monotonicity, m.vi_first.lip_first);
  d.theta2 = theta_factor(rho, m.vi_second.strong_monotonicity, m.vi_second.lip_first);
  d.k1 = d.e1 * d.theta1 + rho * d.e3;
  d.k2 = d.e2 * d.theta2 + rho * d.e4;
  d.theta = std::max(d.k1, d.k2);
  return d;
}

inline double contraction_factor(const ProblemModuli& m, double rho, double lambda) {
  return contraction_detail(m, rho, lambda).theta;
}

// e0 * prod_{r<n} [1 - alpha_r*(1-theta)]: the a-priori bound on the starred
// error after n iterations.
inline double rate_bound(double theta, const AlphaSchedule& schedule, std::size_t n,
                         double e0) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw AnalysisError("rate_bound: contraction factor must lie in (0,1), got " +
                        std::to_string(theta));
  if (e0 < 0.0) throw AnalysisError("rate_bound: initial error must be nonnegative");
  double prod = 1.0;
  for (std::size_t r = 0; r < n; ++r) prod *= 1.0 - alpha_at(schedule, r) * (1.0 - theta);
  return e0 * prod;
}

// Step bound for the pure two-operator problem (no image-space part):
// min over both indices of 2(alpha - eps) / (beta^2 - eps^2).
inline double svip_rho_bound(const Moduli& first, const Moduli& second) {
  auto bound_for = [](const Moduli& m, const char* which) {
    const double alpha = m.strong_monotonicity, beta = m.lip_first, eps = m.lip_second;
    if (!(alpha > eps))
      throw AnalysisError(std::string("svip_rho_bound: ") + which +
                          " operator violates strong-monotonicity > cross-Lipschitz (" +
                          std::to_string(alpha) + " <= " + std::to_string(eps) + ")");
    if (!(beta > eps))
      throw AnalysisError(std::string("svip_rho_bound: ") + which +
                          " operator violates own-Lipschitz > cross-Lipschitz (" +
                          std::to_string(beta) + " <= " + std::to_string(eps) + ")");
    return 2.0 * (alpha - eps) / (beta * beta - eps * eps);
  };
  return std::min(bound_for(first, "first"), bound_for(second, "second"));
}

struct SpvipReport {
  double theta_image = 0.0;
  double delta = 0.0;
  double k = 0.0;  // 1 / (delta + 2*lambda*nu): the image-space damping weight
  double p = 0.0;
  std::optional<Interval> rho_interval;
  Interval gamma_interval{0.0, std::numeric_limits<double>::infinity()};
  bool feasible = false;
};

// Single-variable specialization (one VI bifunction, one image bifunction,
// one operator). Reduces the two-index certification to one index by
// duplicating the moduli across both slots, so the numbers it reports agree
// with convergence_constants applied to that duplication.
inline SpvipReport spvip_conditions(const Moduli& vi, const Moduli& image, double norm_a,
                                    double lambda) {
  detail::check_lambda(lambda);
  SpvipReport rep;
  rep.theta_image =
      theta_factor(lambda, image.strong_monotonicity, image.lip_first);
  rep.delta = 1.0 + 2.0 * rep.theta_image;
  const double e = rep.delta + 2.0 * lambda * image.lip_second;
  rep.k = 1.0 / e;
  rep.p = vi.lip_second;  // p = eps * e / e collapses to the cross coefficient
  rep.gamma_interval = gamma_interval(norm_a, norm_a);
  const double alpha = vi.strong_monotonicity, beta = vi.lip_first, eps = vi.lip_second;
  if (beta > eps && rep.k < 1.0) {
    const double denom = beta * beta - eps * eps;
    const double head = alpha - eps * rep.k;
    const double disc = head * head - denom * (1.0 - rep.k * rep.k);
    if (head > 0.0 && disc > 0.0) {
      rep.feasible = true;
      double lo = std::max((head - std::sqrt(disc)) / denom, 0.0);
      double hi = (head + std::sqrt(disc)) / denom;
      if (lo < hi) rep.rho_interval = Interval{lo, hi};
    }
  }
  return rep;
}

struct SpvipMixedReport {
  double theta_image = 0.0;
  double delta = 0.0;
  double k = 0.0;  // 1/delta
  std::optional<Interval> rho_interval;
  Interval gamma_interval{0.0, std::numeric_limits<double>::infinity()};
  bool feasible = false;
};

// Variant certified against diagonal (mixed) moduli: strong monotonicity and
// Lipschitz continuity of x -> h(x,x) rather than argument-wise coefficients.
inline SpvipMixedReport spvip_mixed_conditions(const MixedModuli& vi,
                                               const MixedModuli& image, double norm_a,
                                               double lambda) {
  detail::check_lambda(lambda);
  SpvipMixedReport rep;
  rep.theta_image = theta_factor(lambda, image.strong, image.lip);
  rep.delta = 1.0 + 2.0 * rep.theta_image;
  rep.k = 1.0 / rep.delta;
  rep.gamma_interval = gamma_interval(norm_a, norm_a);
  const double alpha = vi.strong, beta = vi.lip;
  if (beta > 0.0) {
    const double rhs = beta * std::sqrt(std::max(1.0 - rep.k * rep.k, 0.0));
    if (alpha > rhs) {
      rep.feasible = true;
      const double denom = beta * beta;
      const double disc = alpha * alpha - denom * (1.0 - rep.k * rep.k);
      double lo = std::max((alpha - std::sqrt(disc)) / denom, 0.0);
      double hi = (alpha + std::sqrt(disc)) / denom;
      if (lo < hi) rep.rho_interval = Interval{lo, hi};
    }
  }
  return rep;
}

// Picks the image-space step by minimizing max(theta3, theta4) over a bracket
// around the per-bifunction optima strong/lip^2. Golden-section; deterministic.
inline double auto_lambda(const ProblemModuli& m) {
  std::vector<double> candidates;
  for (const Moduli* im : {&m.image_first, &m.image_second})
    if (im->strong_monotonicity > 0.0 && im->lip_first > 0.0)
      candidates.push_back(im->strong_monotonicity / (im->lip_first * im->lip_first));
  if (candidates.empty()) return 1.0;
  double lo = 0.5 * *std::min_element(candidates.begin(), candidates.end());
  double hi = 1.5 * *std::max_element(candidates.begin(), candidates.end());
  auto phi = [&](double lam) {
    double t3 = theta_factor(lam, m.image_first.strong_monotonicity,
                             m.image_first.lip_first);
    double t4 = theta_factor(lam, m.image_second.strong_monotonicity,
                             m.image_second.lip_first);
    return std::max(t3, t4);
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = phi(x2);
    }
  }
  return 0.5 * (a + b);
}

// Full certification of a concrete parameter triple. certified = all
// hypothesis flags hold, rho sits in the feasible interval, gamma in its
// range, and the contraction factor is below one.
inline CertificationReport certify(const ProblemModuli& m, double rho, double lambda,
                                   double gamma) {
  CertificationReport rep = convergence_constants(m, lambda);
  if (!(rho > 0.0) || !(gamma > 0.0))
    throw AnalysisError("certify: rho and gamma must be positive");
  ContractionDetail d = contraction_detail(m, rho, lambda);
  // the p/q values must agree with the e-ratio identities; disagreement means
  // the two formula paths diverged, which would invalidate the certificate
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!close(rep.index1.p, d.e3 / d.e1) || !close(rep.index2.p, d.e4 / d.e2) ||
      !close(rep.index1.q, 1.0 / d.e1) || !close(rep.index2.q, 1.0 / d.e2))
    throw AnalysisError("certify: internal constant cross-check failed");
  rep.rho = rho;
  rep.gamma = gamma;
  rep.theta = d.theta;
  rep.delta1_tight = 1.0 + gamma * m.norm_a * m.norm_a * rep.index1.theta_image;
  rep.delta2_tight = 1.0 + gamma * m.norm_b * m.norm_b * rep.index2.theta_image;
  rep.certified = rep.index1.all_ok() && rep.index2.all_ok() &&
                  rep.rho_interval.has_value() && rep.rho_interval->contains(rho) &&
                  rep.gamma_interval.contains(gamma) && d.theta > 0.0 && d.theta < 1.0;
  rep.notes.push_back(
      "contraction factor is evaluated from (rho, lambda) only; gamma enters "
      "through its admissible interval, not the factor itself");
  return rep;
}

}  // namespace sspvip
