#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspvip/problems.hpp"
#include "sspvip/schedule.hpp"

// The three projected iterations. The full method alternates a relaxed VI
// step in each variable with a correction pulled back from the image spaces:
//   x_half = P_C1(x - rho*F(x,y))          y_half = P_C2(y - rho*G(x,y))
//   u_half = P_C3(A x_half - lambda*f(..)) v_half = P_C4(B y_half - lambda*g(..))
//   x_next = (1-alpha)x + alpha*[x_half + gamma*A'(u_half - A x_half)]
// and symmetrically for y. The two-projection variant drops the image
// correction; the one-variable variant runs a single track with diagonal
// bifunction calls.

namespace sspvip {

struct SolverParams {
  double rho = 0.1;
  double lambda = 0.1;
  double gamma = 0.1;
  AlphaSchedule alpha_schedule = ConstantSchedule{0.9};
  std::size_t max_iters = 100000;
  double tol = 1e-9;
  std::size_t trace_every = 1;
};

inline void check_params(const SolverParams& p) {
  if (!(p.rho > 0.0) || !std::isfinite(p.rho))
    throw std::invalid_argument("solver params: rho must be positive");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    throw std::invalid_argument("solver params: lambda must be positive");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw std::invalid_argument("solver params: gamma must be positive");
  if (!(p.tol > 0.0)) throw std::invalid_argument("solver params: tol must be positive");
  if (p.trace_every < 1)
    throw std::invalid_argument("solver params: trace_every must be at least 1");
  alpha_at(p.alpha_schedule, 0);  // throws on malformed variant content
}

struct IterationState {
  std::size_t n = 0;
  Vec x, y;
  Vec x_half, y_half;  // relaxed VI projections (a_n, d_n)
  Vec u_half, v_half;  // image-space projections (b_n, l_n)
};

struct TraceRow {
  std::size_t n = 0;
  double r1 = 0, r2 = 0, r3 = 0, r4 = 0;
  double err_star = std::numeric_limits<double>::quiet_NaN();  // NaN = no plant known
  double alpha = 0;
};

struct SolveResult {
  Candidate final;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
  bool schedule_warning = false;
};

struct SolverDivergence : std::runtime_error {
  IterationState last_state;
  std::vector<TraceRow> trace;
  SolverDivergence(const std::string& msg, IterationState st)
      : std::runtime_error(msg), last_state(std::move(st)) {}
};

namespace detail {

inline Vec shifted(const Vec& z, double step, const Vec& val) {
  Vec out = z;
  for (std::size_t i = 0; i < z.size(); ++i) out[i] -= step * val[i];
  return out;
}

inline void require_finite(const Vec& v, const char* what, const IterationState& s) {
  if (!all_finite(v))
    throw SolverDivergence(std::string("divergence: non-finite ") + what +
                               " at iteration " + std::to_string(s.n),
                           s);
}

// x_next = (1-alpha)*x + alpha*(base + gamma*corr)
inline Vec relaxed_update(const Vec& x, const Vec& base, const Vec& corr, double alpha,
                          double gamma) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = (1.0 - alpha) * x[i] + alpha * (base[i] + gamma * corr[i]);
  return out;
}

}  // namespace detail

inline IterationState sspvip_step(const SspvipProblem& p, const IterationState& s,
                                  const SolverParams& params) {
  if (s.x.size() != p.dims.x || s.y.size() != p.dims.y)
    throw DimensionError("sspvip_step: state dims do not match problem");
  const double alpha = alpha_at(params.alpha_schedule, s.n);
  IterationState next;
  next.n = s.n + 1;

  Vec shift_x = detail::shifted(s.x, params.rho, evaluate(p.vi_first, s.x, s.y));
  Vec shift_y = detail::shifted(s.y, params.rho, evaluate(p.vi_second, s.x, s.y));
  detail::require_finite(shift_x, "VI step (first variable)", s);
  detail::require_finite(shift_y, "VI step (second variable)", s);
  next.x_half = project(p.set_x, shift_x);
  next.y_half = project(p.set_y, shift_y);

  const Vec u = sspvip::apply(p.op_a, next.x_half);
  const Vec v = sspvip::apply(p.op_b, next.y_half);
  Vec shift_u = detail::shifted(u, params.lambda, evaluate(p.image_first, u, v));
  Vec shift_v = detail::shifted(v, params.lambda, evaluate(p.image_second, u, v));
  detail::require_finite(shift_u, "image step (first variable)", s);
  detail::require_finite(shift_v, "image step (second variable)", s);
  next.u_half = project(p.set_u, shift_u);
  next.v_half = project(p.set_v, shift_v);

  const Vec corr_x = apply_adjoint(p.op_a, sub(next.u_half, u));
  const Vec corr_y = apply_adjoint(p.op_b, sub(next.v_half, v));
  next.x = detail::relaxed_update(s.x, next.x_half, corr_x, alpha, params.gamma);
  next.y = detail::relaxed_update(s.y, next.y_half, corr_y, alpha, params.gamma);
  detail::require_finite(next.x, "updated first variable", s);
  detail::require_finite(next.y, "updated second variable", s);
  return next;
}

namespace detail {

// Shared outer loop: `step` advances the state, `observe` produces the
// residual row for the current point. Rows are recorded at n = 0, every
// trace_every-th iteration, and the final iteration.
template <class StepFn, class ObserveFn>
SolveResult solve_loop(const SolverParams& params, Candidate start,
                       const std::optional<Candidate>& planted, StepFn step,
                       ObserveFn observe) {
  check_params(params);
  SolveResult res;
  res.schedule_warning = custom_schedule_suspicious(params.alpha_schedule, params.max_iters);

  IterationState state;
  state.n = 0;
  state.x = std::move(start.x);
  state.y = std::move(start.y);

  // recent starred errors, for the runaway-growth check (window of 100)
  std::vector<double> err_window;

  auto record = [&](const IterationState& s, const TraceRow& row) {
    if (!res.trace.empty() && res.trace.back().n == s.n) return;
    res.trace.push_back(row);
  };

  auto make_row = [&](const IterationState& s) {
    TraceRow row = observe(s);
    row.n = s.n;
    row.alpha = alpha_at(params.alpha_schedule, s.n);
    if (planted)
      row.err_star = starred_distance(Candidate{s.x, s.y}, *planted);
    return row;
  };

  TraceRow row = make_row(state);
  record(state, row);
  double max_res = std::max(std::max(row.r1, row.r2), std::max(row.r3, row.r4));
  if (max_res <= params.tol) {
    res.final = Candidate{state.x, state.y};
    res.iterations = 0;
    res.converged = true;
    return res;
  }
  if (planted) err_window.push_back(row.err_star);

  while (state.n < params.max_iters) {
    try {
      state = step(state);
    } catch (SolverDivergence& e) {
      e.trace = res.trace;
      throw;
    }
    row = make_row(state);
    max_res = std::max(std::max(row.r1, row.r2), std::max(row.r3, row.r4));
    const bool hit_tol = max_res <= params.tol;
    const bool last = hit_tol || state.n >= params.max_iters;
    if (state.n % params.trace_every == 0 || last) record(state, row);
    if (planted) {
      err_window.push_back(row.err_star);
      if (err_window.size() > 101) err_window.erase(err_window.begin());
      const double then = err_window.front();
      if (err_window.size() == 101 && then > 0.0 && row.err_star > 1e6 * then) {
        SolverDivergence e("divergence: starred error grew by more than 1e6 over 100 "
                           "iterations (from " + std::to_string(then) + " to " +
                               std::to_string(row.err_star) + ")",
                           state);
        e.trace = res.trace;
        throw e;
      }
    }
    if (hit_tol) {
      res.final = Candidate{state.x, state.y};
      res.iterations = state.n;
      res.converged = true;
      return res;
    }
  }
  res.final = Candidate{state.x, state.y};
  res.iterations = state.n;
  res.converged = false;
  return res;
}

}  // namespace detail

inline SolveResult solve(const SspvipProblem& p, const SolverParams& params,
                         Candidate start) {
  if (start.x.size() != p.dims.x || start.y.size() != p.dims.y)
    throw DimensionError("solve: start dims do not match problem");
  return detail::solve_loop(
      params, std::move(start), p.planted,
      [&](const IterationState& s) { return sspvip_step(p, s, params); },
      [&](const IterationState& s) {
        ResidualReport rep = residuals(p, Candidate{s.x, s.y}, params.rho, params.lambda);
        TraceRow row;
        row.r1 = rep.r1;
        row.r2 = rep.r2;
        row.r3 = rep.r3;
        row.r4 = rep.r4;
        return row;
      });
}

// Two-projection variant: no image correction; gamma and lambda are unused.
// The image residuals are reported as zero since the method does not address
// them.
inline SolveResult solve_svip(const SspvipProblem& p, const SolverParams& params,
                              Candidate start) {
  if (start.x.size() != p.dims.x || start.y.size() != p.dims.y)
    throw DimensionError("solve_svip: start dims do not match problem");
  auto step = [&](const IterationState& s) {
    const double alpha = alpha_at(params.alpha_schedule, s.n);
    IterationState next;
    next.n = s.n + 1;
    Vec shift_x = detail::shifted(s.x, params.rho, evaluate(p.vi_first, s.x, s.y));
    Vec shift_y = detail::shifted(s.y, params.rho, evaluate(p.vi_second, s.x, s.y));
    detail::require_finite(shift_x, "VI step (first variable)", s);
    detail::require_finite(shift_y, "VI step (second variable)", s);
    next.x_half = project(p.set_x, shift_x);
    next.y_half = project(p.set_y, shift_y);
    next.x.resize(s.x.size());
    next.y.resize(s.y.size());
    for (std::size_t i = 0; i < s.x.size(); ++i)
      next.x[i] = (1.0 - alpha) * s.x[i] + alpha * next.x_half[i];
    for (std::size_t i = 0; i < s.y.size(); ++i)
      next.y[i] = (1.0 - alpha) * s.y[i] + alpha * next.y_half[i];
    detail::require_finite(next.x, "updated first variable", s);
    detail::require_finite(next.y, "updated second variable", s);
    return next;
  };
  auto observe = [&](const IterationState& s) {
    auto defect = [&](const ConvexSet& set, const Vec& z, const Vec& val) {
      return distance(z, project(set, detail::shifted(z, params.rho, val)));
    };
    TraceRow row;
    row.r1 = defect(p.set_x, s.x, evaluate(p.vi_first, s.x, s.y));
    row.r2 = defect(p.set_y, s.y, evaluate(p.vi_second, s.x, s.y));
    return row;
  };
  return detail::solve_loop(params, std::move(start), p.planted, step, observe);
}

// One-variable variant with diagonal bifunction calls. The y-track of the
// result mirrors the x-track.
inline SolveResult solve_spvip(const SspvipProblem& p, const SolverParams& params,
                               Candidate start) {
  if (start.x.size() != p.dims.x)
    throw DimensionError("solve_spvip: start dims do not match problem");
  if (dim_second(p.vi_first) != p.dims.x)
    throw DimensionError("solve_spvip: the VI bifunction must accept the x-space in "
                         "both arguments");
  if (dim_second(p.image_first) != p.dims.u)
    throw DimensionError("solve_spvip: the image bifunction must accept the u-space in "
                         "both arguments");
  std::optional<Candidate> planted;
  // only a diagonal plant is a plant of the collapsed problem
  if (p.planted && p.planted->y == p.planted->x)
    planted = Candidate{p.planted->x, p.planted->x};
  Candidate start2{start.x, start.x};
  auto step = [&](const IterationState& s) {
    const double alpha = alpha_at(params.alpha_schedule, s.n);
    IterationState next;
    next.n = s.n + 1;
    Vec shift_x = detail::shifted(s.x, params.rho, evaluate(p.vi_first, s.x, s.x));
    detail::require_finite(shift_x, "VI step", s);
    next.x_half = project(p.set_x, shift_x);
    const Vec u = sspvip::apply(p.op_a, next.x_half);
    Vec shift_u = detail::shifted(u, params.lambda, evaluate(p.image_first, u, u));
    detail::require_finite(shift_u, "image step", s);
    next.u_half = project(p.set_u, shift_u);
    const Vec corr = apply_adjoint(p.op_a, sub(next.u_half, u));
    next.x = detail::relaxed_update(s.x, next.x_half, corr, alpha, params.gamma);
    detail::require_finite(next.x, "updated variable", s);
    next.y = next.x;
    next.y_half = next.x_half;
    next.v_half = next.u_half;
    return next;
  };
  auto observe = [&](const IterationState& s) {
    TraceRow row;
    row.r1 = distance(
        s.x, project(p.set_x,
                     detail::shifted(s.x, params.rho, evaluate(p.vi_first, s.x, s.x))));
    const Vec u = sspvip::apply(p.op_a, s.x);
    row.r3 = distance(
        u, project(p.set_u,
                   detail::shifted(u, params.lambda, evaluate(p.image_first, u, u))));
    row.r2 = row.r1;
    row.r4 = row.r3;
    return row;
  };
  return detail::solve_loop(params, std::move(start2), planted, step, observe);
}

}  // namespace sspvip
