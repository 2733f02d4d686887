#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <type_traits>

namespace ripple::geom {

// Exact predicates for lattice triangles. Integer inputs are promoted to
// __int128, which holds every intermediate for coordinates in [0, 65535].
// Floating-point inputs run the same code in double precision.

template <class T>
using Point = std::array<T, 3>;
template <class T>
using Triangle = std::array<Point<T>, 3>;

using LatticeTriangle = Triangle<std::int64_t>;

template <class T>
using Wide = std::conditional_t<std::is_integral_v<T>, __int128, T>;

namespace detail {

template <class W>
using V3 = std::array<W, 3>;

template <class W, class T>
V3<W> sub(const Point<T>& a, const Point<T>& b) {
  return {W(a[0]) - W(b[0]), W(a[1]) - W(b[1]), W(a[2]) - W(b[2])};
}

template <class W>
V3<W> cross(const V3<W>& u, const V3<W>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

template <class W>
W dot(const V3<W>& u, const V3<W>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

template <class W>
int sign(W x) {
  return (x > W(0)) - (x < W(0));
}

template <class W>
W abs(W x) {
  return x < W(0) ? -x : x;
}

template <class W, class T>
V3<W> normal(const Triangle<T>& t) {
  return cross(sub<W>(t[1], t[0]), sub<W>(t[2], t[0]));
}

// Fraction num/den with den > 0.
template <class W>
struct Frac {
  W num;
  W den;
};

template <class W>
bool less(const Frac<W>& a, const Frac<W>& b) {
  return a.num * b.den < b.num * a.den;
}

// Open interval where the relative interior of `t` crosses the plane with
// normal n through p0, parameterized by coordinate `axis`. False when the
// triangle does not strictly straddle the plane.
template <class W, class T>
bool plane_crossing(const Triangle<T>& t, const V3<W>& n, const Point<T>& p0, int axis, Frac<W>& lo, Frac<W>& hi) {
  std::array<W, 3> d{};
  bool pos = false;
  bool neg = false;
  for (int k = 0; k < 3; ++k) {
    d[k] = dot(n, sub<W>(t[k], p0));
    pos |= d[k] > W(0);
    neg |= d[k] < W(0);
  }
  if (!pos || !neg) return false;

  std::array<Frac<W>, 2> ends{};
  int found = 0;
  for (int k = 0; k < 3 && found < 2; ++k) {
    const int j = (k + 1) % 3;
    if (d[k] == W(0)) {
      ends[found++] = {W(t[k][axis]), W(1)};
    } else if (d[j] != W(0) && sign(d[k]) != sign(d[j])) {
      // p_k + d_k / (d_k - d_j) (p_j - p_k), along the chosen axis
      Frac<W> f{d[k] * W(t[j][axis]) - d[j] * W(t[k][axis]), d[k] - d[j]};
      if (f.den < W(0)) {
        f.num = -f.num;
        f.den = -f.den;
      }
      ends[found++] = f;
    }
  }
  if (less(ends[1], ends[0])) std::swap(ends[0], ends[1]);
  lo = ends[0];
  hi = ends[1];
  return true;
}

}  // namespace detail

template <class T>
bool degenerate(const Triangle<T>& t) {
  using W = Wide<T>;
  const auto n = detail::normal<W>(t);
  return n[0] == W(0) && n[1] == W(0) && n[2] == W(0);
}

template <class T>
bool coplanar(const Triangle<T>& a, const Triangle<T>& b) {
  using W = Wide<T>;
  const auto n = detail::normal<W>(a);
  for (const auto& p : b) {
    if (detail::dot(n, detail::sub<W>(p, a[0])) != W(0)) return false;
  }
  return true;
}

// Separating-axis test for two non-degenerate coplanar triangles. Interiors
// must overlap; shared edges and touching vertices count as separated.
template <class T>
bool coplanar_overlap(const Triangle<T>& a, const Triangle<T>& b) {
  using W = Wide<T>;
  const auto n = detail::normal<W>(a);
  int drop = 0;
  for (int k = 1; k < 3; ++k) {
    if (detail::abs(n[k]) > detail::abs(n[drop])) drop = k;
  }
  const int u = (drop + 1) % 3;
  const int v = (drop + 2) % 3;

  auto separated_by = [&](const Triangle<T>& t, int e) {
    const auto& p = t[e];
    const auto& q = t[(e + 1) % 3];
    const W ax = -(W(q[v]) - W(p[v]));
    const W ay = W(q[u]) - W(p[u]);
    auto project = [&](const Triangle<T>& s, W& lo, W& hi) {
      lo = hi = ax * W(s[0][u]) + ay * W(s[0][v]);
      for (int k = 1; k < 3; ++k) {
        const W x = ax * W(s[k][u]) + ay * W(s[k][v]);
        if (x < lo) lo = x;
        if (x > hi) hi = x;
      }
    };
    W alo, ahi, blo, bhi;
    project(a, alo, ahi);
    project(b, blo, bhi);
    return ahi <= blo || bhi <= alo;
  };

  for (int e = 0; e < 3; ++e) {
    if (separated_by(a, e) || separated_by(b, e)) return false;
  }
  return true;
}

// True when the relative interiors of two non-degenerate triangles intersect.
// Triangles that only share an edge or a vertex, or touch along a boundary,
// do not intersect.
template <class T>
bool triangles_intersect(const Triangle<T>& a, const Triangle<T>& b) {
  using W = Wide<T>;
  if (coplanar(a, b)) return coplanar_overlap(a, b);

  const auto na = detail::normal<W>(a);
  const auto nb = detail::normal<W>(b);
  const auto dir = detail::cross(na, nb);
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (detail::abs(dir[k]) > detail::abs(dir[axis])) axis = k;
  }
  if (dir[axis] == W(0)) return false;  // parallel planes

  detail::Frac<W> alo, ahi, blo, bhi;
  if (!detail::plane_crossing<W>(a, nb, b[0], axis, alo, ahi)) return false;
  if (!detail::plane_crossing<W>(b, na, a[0], axis, blo, bhi)) return false;
  return detail::less(alo, bhi) && detail::less(blo, ahi);
}

}  // namespace ripple::geom
