#pragma once

#include <algorithm>
#include <limits>
#include <variant>

#include "sspvip/linalg.hpp"

// Closed convex sets with exact metric projections. Every variant stores
// enough to project in closed form; AffineSubspace precomputes its projector
// at construction so repeated projections are one matvec.

namespace sspvip {

struct WholeSpace {
  std::size_t dim = 0;
};

struct Box {
  Vec lower, upper;  // lower[i] <= upper[i]
};

struct Ball {
  Vec center;
  double radius = 0.0;  // >= 0; radius 0 is the singleton {center}
};

// { x : <normal, x> <= offset }, normal != 0
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

// { x : <normal, x> = offset }, normal != 0
struct Hyperplane {
  Vec normal;
  double offset = 0.0;
};

// { anchor + basis * t }, basis columns independent. projector caches
// basis (basis^T basis)^-1 basis^T.
struct AffineSubspace {
  Matrix basis;  // ambient_dim x k
  Vec anchor;
  Matrix projector;
};

using ConvexSet = std::variant<WholeSpace, Box, Ball, Halfspace, Hyperplane, AffineSubspace>;

inline Box make_box(Vec lower, Vec upper) {
  check_same_dim(lower, upper, "make_box");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("make_box: lower > upper at index " + std::to_string(i));
  return Box{std::move(lower), std::move(upper)};
}

inline Ball make_ball(Vec center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("make_ball: negative radius");
  return Ball{std::move(center), radius};
}

inline Halfspace make_halfspace(Vec normal, double offset) {
  if (norm(normal) == 0.0) throw std::invalid_argument("make_halfspace: zero normal");
  return Halfspace{std::move(normal), offset};
}

inline Hyperplane make_hyperplane(Vec normal, double offset) {
  if (norm(normal) == 0.0) throw std::invalid_argument("make_hyperplane: zero normal");
  return Hyperplane{std::move(normal), offset};
}

inline AffineSubspace make_affine_subspace(Matrix basis, Vec anchor) {
  if (basis.rows != anchor.size())
    throw DimensionError("make_affine_subspace: basis rows vs anchor length");
  if (basis.cols == 0 || basis.cols > basis.rows)
    throw std::invalid_argument("make_affine_subspace: need 1..dim independent columns");
  Matrix bt = adjoint(basis);
  Matrix gram = matmul(bt, basis);
  Matrix l = gram;
  if (!detail::cholesky(l))
    throw std::invalid_argument("make_affine_subspace: basis columns are dependent");
  // projector = basis * gram^-1 * basis^T, built column by column
  Matrix proj(basis.rows, basis.rows);
  for (std::size_t j = 0; j < basis.rows; ++j) {
    Vec e(basis.rows, 0.0);
    e[j] = 1.0;
    Vec t = detail::cholesky_solve(l, sspvip::apply(bt, e));
    Vec col = sspvip::apply(basis, t);
    for (std::size_t i = 0; i < basis.rows; ++i) proj.at(i, j) = col[i];
  }
  return AffineSubspace{std::move(basis), std::move(anchor), std::move(proj)};
}

inline std::size_t ambient_dim(const ConvexSet& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WholeSpace>) return v.dim;
        else if constexpr (std::is_same_v<T, Box>) return v.lower.size();
        else if constexpr (std::is_same_v<T, Ball>) return v.center.size();
        else if constexpr (std::is_same_v<T, AffineSubspace>) return v.anchor.size();
        else return v.normal.size();
      },
      s);
}

inline Vec project(const WholeSpace& s, Vec x) {
  if (x.size() != s.dim) throw DimensionError("project: point vs WholeSpace dim");
  return x;
}

inline Vec project(const Box& s, Vec x) {
  check_same_dim(x, s.lower, "project(Box)");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], s.lower[i], s.upper[i]);
  return x;
}

inline Vec project(const Ball& s, Vec x) {
  check_same_dim(x, s.center, "project(Ball)");
  Vec d = sub(x, s.center);
  double r = norm(d);
  if (r <= s.radius) return x;  // covers x == center: any direction works, keep it fixed
  double f = s.radius / r;
  Vec y = s.center;
  axpy(f, d, y);
  return y;
}

inline Vec project(const Halfspace& s, Vec x) {
  check_same_dim(x, s.normal, "project(Halfspace)");
  double g = inner(s.normal, x) - s.offset;
  if (g <= 0.0) return x;
  axpy(-g / inner(s.normal, s.normal), s.normal, x);
  return x;
}

inline Vec project(const Hyperplane& s, Vec x) {
  check_same_dim(x, s.normal, "project(Hyperplane)");
  double g = inner(s.normal, x) - s.offset;
  if (g == 0.0) return x;
  axpy(-g / inner(s.normal, s.normal), s.normal, x);
  return x;
}

inline Vec project(const AffineSubspace& s, const Vec& x) {
  check_same_dim(x, s.anchor, "project(AffineSubspace)");
  Vec y = s.anchor;
  Vec corr = sspvip::apply(s.projector, sub(x, s.anchor));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += corr[i];
  return y;
}

inline Vec project(const ConvexSet& s, const Vec& x) {
  return std::visit([&](const auto& v) { return project(v, x); }, s);
}

// Largest violation of the set's defining constraints at x; <= 0 means member.
inline double violation(const ConvexSet& s, const Vec& x) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          if (x.size() != v.dim) throw DimensionError("violation: dim mismatch");
          return 0.0;
        } else if constexpr (std::is_same_v<T, Box>) {
          check_same_dim(x, v.lower, "violation(Box)");
          double w = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < x.size(); ++i)
            w = std::max({w, v.lower[i] - x[i], x[i] - v.upper[i]});
          return w;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return distance(x, v.center) - v.radius;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return inner(v.normal, x) - v.offset;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return std::abs(inner(v.normal, x) - v.offset);
        } else {
          return distance(x, project(v, x));
        }
      },
      s);
}

inline bool contains(const ConvexSet& s, const Vec& x, double tol) {
  return violation(s, x) <= tol;
}

}  // namespace sspvip
