#pragma once

// Exact 2D/3D primitives: points, segments, triangles, and the
// intersection predicates every other module is built on. Everything is
// rational; there is no floating point in this library.

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "multipoint/rational.hpp"

namespace multipoint {

/// A named general-position (or consistency) failure. The code is a stable
/// identifier such as "tangency" or "coplanar-overlap"; tests and reports
/// match on it.
class Violation : public std::runtime_error {
 public:
  Violation(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// A named general-position or validation failure, reported rather than thrown.
struct Issue {
  std::string code;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Points and vectors

struct Point2 {
  Rational x, y;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

struct Point3 {
  Rational x, y, z;
  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;

  const Rational& operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  Rational& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(const Rational& k, const Point2& a) { return {k * a.x, k * a.y}; }
inline Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline Rational norm2(const Point2& a) { return dot(a, a); }
/// Counter-clockwise quarter turn.
inline Point2 perp(const Point2& a) { return {-a.y, a.x}; }

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(const Rational& k, const Point3& a) { return {k * a.x, k * a.y, k * a.z}; }
inline Rational dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Rational norm2(const Point3& a) { return dot(a, a); }
inline bool is_zero(const Point3& a) { return a.x.is_zero() && a.y.is_zero() && a.z.is_zero(); }

/// Componentwise representative in [0,1)^3: the canonical image in the flat 3-torus.
inline Point3 wrap(const Point3& p) { return {p.x.frac(), p.y.frac(), p.z.frac()}; }
inline Point3 floor(const Point3& p) { return {p.x.floor(), p.y.floor(), p.z.floor()}; }

inline std::string to_string(const Point2& p) { return "(" + p.x.str() + ", " + p.y.str() + ")"; }
inline std::string to_string(const Point3& p) {
  return "(" + p.x.str() + ", " + p.y.str() + ", " + p.z.str() + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Point2& p) { return os << to_string(p); }
inline std::ostream& operator<<(std::ostream& os, const Point3& p) { return os << to_string(p); }

// ---------------------------------------------------------------------------
// Segments and triangles

struct Segment2 {
  Point2 a, b;
  Point2 at(const Rational& t) const { return a + t * (b - a); }
  friend bool operator==(const Segment2&, const Segment2&) = default;
};

struct Segment3 {
  Point3 a, b;
  Point3 at(const Rational& t) const { return a + t * (b - a); }
  friend bool operator==(const Segment3&, const Segment3&) = default;
};

struct Triangle3 {
  std::array<Point3, 3> v;
  Point3 normal() const { return cross(v[1] - v[0], v[2] - v[0]); }
  bool degenerate() const { return is_zero(normal()); }
  friend bool operator==(const Triangle3&, const Triangle3&) = default;
};

inline Segment2 make_segment(Point2 a, Point2 b) {
  if (a == b) throw std::invalid_argument("Segment2: coincident endpoints");
  return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Segment/segment

struct SegmentIntersection {
  enum class Kind { none, point, degenerate };
  Kind kind = Kind::none;
  Point2 point;
  Rational s;  // parameter on the first segment
  Rational t;  // parameter on the second segment

  bool is_point() const { return kind == Kind::point; }
  bool interior() const {
    return kind == Kind::point && s.sign() > 0 && s < 1 && t.sign() > 0 && t < 1;
  }
};

/// Exact intersection of two closed segments. Collinear overlaps of positive
/// length come back as `degenerate`; a single shared point (including a
/// collinear end-to-end touch) is a `point` with its parameters on both.
inline SegmentIntersection seg_intersect(const Segment2& a, const Segment2& b) {
  using Kind = SegmentIntersection::Kind;
  const Point2 da = a.b - a.a;
  const Point2 db = b.b - b.a;
  const Point2 w = b.a - a.a;
  const Rational denom = cross(da, db);
  SegmentIntersection out;
  if (!denom.is_zero()) {
    Rational s = cross(w, db) / denom;
    Rational t = cross(w, da) / denom;
    if (s.sign() < 0 || s > 1 || t.sign() < 0 || t > 1) return out;
    out.kind = Kind::point;
    out.point = a.at(s);
    out.s = std::move(s);
    out.t = std::move(t);
    return out;
  }
  if (!cross(w, da).is_zero()) return out;  // parallel, distinct lines

  const Rational len = norm2(da);
  Rational t0 = dot(b.a - a.a, da) / len;
  Rational t1 = dot(b.b - a.a, da) / len;
  Rational lo = max(min(t0, t1), Rational(0));
  Rational hi = min(max(t0, t1), Rational(1));
  if (lo > hi) return out;
  if (lo < hi) {
    out.kind = Kind::degenerate;
    return out;
  }
  out.kind = Kind::point;
  out.s = lo;
  out.point = a.at(lo);
  out.t = dot(out.point - b.a, db) / norm2(db);
  return out;
}

// ---------------------------------------------------------------------------
// Distances (always squared, so they stay rational)

inline Rational dist2(const Point2& p, const Point2& q) { return norm2(p - q); }

inline Rational dist2(const Point2& p, const Segment2& s) {
  const Point2 d = s.b - s.a;
  Rational t = dot(p - s.a, d) / norm2(d);
  if (t.sign() < 0) t = 0;
  if (t > 1) t = 1;
  return norm2(p - s.at(t));
}

/// Separation of two segments measured from their endpoints. A transverse
/// crossing of the interiors does not count as contact: crossings are
/// permitted in general position, touching is not.
inline Rational dist2(const Segment2& s, const Segment2& t) {
  return min(min(dist2(s.a, t), dist2(s.b, t)), min(dist2(t.a, s), dist2(t.b, s)));
}

using Feature2 = std::variant<Point2, Segment2>;

namespace detail {

inline std::vector<Point2> feature_points(const Feature2& f) {
  if (auto p = std::get_if<Point2>(&f)) return {*p};
  const auto& s = std::get<Segment2>(f);
  return {s.a, s.b};
}

inline bool incident(const Feature2& f, const Feature2& g) {
  const bool f_seg = std::holds_alternative<Segment2>(f);
  const bool g_seg = std::holds_alternative<Segment2>(g);
  if (!f_seg && !g_seg) return false;
  for (const auto& p : feature_points(f))
    for (const auto& q : feature_points(g))
      if (p == q) return true;
  return false;
}

inline Rational feature_dist2(const Feature2& f, const Feature2& g) {
  return std::visit(
      [](const auto& a, const auto& b) -> Rational {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<A, Point2> && std::is_same_v<B, Segment2>) return dist2(a, b);
        else if constexpr (std::is_same_v<A, Segment2> && std::is_same_v<B, Point2>) return dist2(b, a);
        else return dist2(a, b);
      },
      f, g);
}

}  // namespace detail

/// Minimum squared distance over all pairs of non-incident features (features
/// that share an endpoint are incident). Empty when no such pair exists. A
/// zero result means two features touch.
inline std::optional<Rational> min_separation(const std::vector<Feature2>& features) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < features.size(); ++i)
    for (std::size_t j = i + 1; j < features.size(); ++j) {
      if (detail::incident(features[i], features[j])) continue;
      Rational d = detail::feature_dist2(features[i], features[j]);
      if (!best || d < *best) best = std::move(d);
    }
  return best;
}

// ---------------------------------------------------------------------------
// Triangle/triangle and segment/triangle in 3D

/// Where an endpoint of a triangle-triangle intersection segment sits: on
/// edge `edge` (edge i runs from v[i] to v[i+1]) of triangle `triangle`
/// (0 = first argument, 1 = second), and in the interior of the other one.
struct EdgeIncidence {
  int triangle = 0;
  int edge = 0;
  friend bool operator==(const EdgeIncidence&, const EdgeIncidence&) = default;
};

struct TriangleIntersection {
  enum class Kind { none, segment, degenerate };
  Kind kind = Kind::none;
  Segment3 segment;
  std::array<EdgeIncidence, 2> incidence{};
  /// Set for `degenerate`: "coplanar-overlap", "tangency" (point or vertex
  /// contact), or "edge-contact" (intersection runs along or meets an edge of
  /// both triangles at once).
  std::string reason;
};

namespace detail {

// A point of (triangle ∩ other plane), remembering which feature produced it.
struct PlaneCut {
  Point3 p;
  bool vertex = false;
  int index = 0;  // vertex index, or edge index when !vertex
};

inline std::vector<PlaneCut> plane_cut(const Triangle3& t, const std::array<int, 3>& side) {
  std::vector<PlaneCut> cuts;
  for (int i = 0; i < 3; ++i)
    if (side[i] == 0) cuts.push_back({t.v[i], true, i});
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    if (side[i] * side[j] < 0) {
      // exact crossing of edge i with the plane
      cuts.push_back({Point3{}, false, i});
    }
  }
  return cuts;
}

inline int sign_of(const Rational& r) { return r.sign(); }

// Projection axis that keeps a plane with normal n injective.
inline int dominant_axis(const Point3& n) {
  int axis = 0;
  for (int k = 1; k < 3; ++k)
    if (abs(n[k]) > abs(n[axis])) axis = k;
  return axis;
}

inline Point2 drop_axis(const Point3& p, int axis) {
  switch (axis) {
    case 0: return {p.y, p.z};
    case 1: return {p.z, p.x};
    default: return {p.x, p.y};
  }
}

// Closed point-in-triangle test for coplanar 2D data; returns -1 outside,
// 0 on the boundary, 1 strictly inside.
inline int point_in_triangle2(const Point2& p, const std::array<Point2, 3>& t) {
  int pos = 0, neg = 0, zero = 0;
  for (int i = 0; i < 3; ++i) {
    int s = cross(t[(i + 1) % 3] - t[i], p - t[i]).sign();
    (s > 0 ? pos : s < 0 ? neg : zero)++;
  }
  if (pos > 0 && neg > 0) return -1;
  return zero > 0 ? 0 : 1;
}

// Coplanar triangles: do they share any point outside the listed shared
// vertices? Shared vertices themselves are allowed contact.
inline bool coplanar_contact(const Triangle3& a, const Triangle3& b, const std::vector<Point3>& shared) {
  const int axis = dominant_axis(a.normal());
  std::array<Point2, 3> pa, pb;
  for (int i = 0; i < 3; ++i) {
    pa[i] = drop_axis(a.v[i], axis);
    pb[i] = drop_axis(b.v[i], axis);
  }
  std::vector<Point2> allowed;
  for (const auto& s : shared) allowed.push_back(drop_axis(s, axis));
  auto is_allowed = [&](const Point2& p) {
    return std::find(allowed.begin(), allowed.end(), p) != allowed.end();
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto hit = seg_intersect({pa[i], pa[(i + 1) % 3]}, {pb[j], pb[(j + 1) % 3]});
      if (hit.kind == SegmentIntersection::Kind::degenerate) return true;
      if (hit.is_point() && !is_allowed(hit.point)) return true;
    }
  for (int i = 0; i < 3; ++i) {
    if (!is_allowed(pb[i]) && point_in_triangle2(pb[i], pa) >= 0) return true;
    if (!is_allowed(pa[i]) && point_in_triangle2(pa[i], pb) >= 0) return true;
  }
  return false;
}

}  // namespace detail

/// Exact triangle/triangle intersection. A generic result is a segment whose
/// endpoints each lie in the interior of one edge of one triangle and the
/// interior of the other triangle; anything else is reported as degenerate.
inline TriangleIntersection tri_tri_intersect(const Triangle3& a, const Triangle3& b) {
  using Kind = TriangleIntersection::Kind;
  if (a.degenerate() || b.degenerate()) throw std::invalid_argument("tri_tri_intersect: degenerate triangle");
  TriangleIntersection out;
  const Point3 na = a.normal();
  const Point3 nb = b.normal();
  std::array<Rational, 3> ob, oa;
  std::array<int, 3> sb{}, sa{};
  for (int i = 0; i < 3; ++i) {
    ob[i] = dot(na, b.v[i] - a.v[0]);
    oa[i] = dot(nb, a.v[i] - b.v[0]);
    sb[i] = ob[i].sign();
    sa[i] = oa[i].sign();
  }
  if (sb[0] == 0 && sb[1] == 0 && sb[2] == 0) {
    if (detail::coplanar_contact(a, b, {})) {
      out.kind = Kind::degenerate;
      out.reason = "coplanar-overlap";
    }
    return out;
  }
  auto one_side = [](const std::array<int, 3>& s) {
    return (s[0] > 0 && s[1] > 0 && s[2] > 0) || (s[0] < 0 && s[1] < 0 && s[2] < 0);
  };
  if (one_side(sb) || one_side(sa)) return out;

  auto cuts_of = [](const Triangle3& t, const std::array<Rational, 3>& o, const std::array<int, 3>& s) {
    auto cuts = detail::plane_cut(t, s);
    for (auto& c : cuts)
      if (!c.vertex) {
        int i = c.index, j = (i + 1) % 3;
        c.p = t.v[i] + (o[i] / (o[i] - o[j])) * (t.v[j] - t.v[i]);
      }
    return cuts;
  };
  auto ca = cuts_of(a, oa, sa);
  auto cb = cuts_of(b, ob, sb);

  const Point3 dir = cross(na, nb);
  struct End {
    Rational t;
    int tri;
    detail::PlaneCut cut;
  };
  auto interval = [&](const std::vector<detail::PlaneCut>& cuts, int tri) {
    End lo{dot(dir, cuts[0].p), tri, cuts[0]}, hi = lo;
    for (const auto& c : cuts) {
      Rational t = dot(dir, c.p);
      if (t < lo.t) lo = {t, tri, c};
      if (t > hi.t) hi = {std::move(t), tri, c};
    }
    return std::pair{lo, hi};
  };
  auto [alo, ahi] = interval(ca, 0);
  auto [blo, bhi] = interval(cb, 1);
  const End& lo = alo.t >= blo.t ? alo : blo;
  const End& hi = ahi.t <= bhi.t ? ahi : bhi;
  if (lo.t > hi.t) return out;

  out.kind = Kind::degenerate;
  if (lo.t == hi.t) {
    out.reason = "tangency";
    return out;
  }
  auto count_zero = [](const std::array<int, 3>& s) { return (s[0] == 0) + (s[1] == 0) + (s[2] == 0); };
  if (count_zero(sa) >= 2 || count_zero(sb) >= 2) {
    out.reason = "edge-contact";
    return out;
  }
  if (alo.t == blo.t || ahi.t == bhi.t) {
    out.reason = "edge-contact";
    return out;
  }
  if (lo.cut.vertex || hi.cut.vertex) {
    out.reason = "tangency";
    return out;
  }
  out.kind = Kind::segment;
  out.reason.clear();
  out.segment = {lo.cut.p, hi.cut.p};
  out.incidence = {EdgeIncidence{lo.tri, lo.cut.index}, EdgeIncidence{hi.tri, hi.cut.index}};
  return out;
}

struct SegmentTriangleIntersection {
  enum class Kind { none, point, degenerate };
  Kind kind = Kind::none;
  Point3 point;
  Rational s;  // parameter along the segment
  /// True when the contact is in the open segment and the open triangle.
  bool transverse() const { return kind == Kind::point; }
};

/// Exact segment/triangle intersection. `point` means a single transverse
/// crossing in the open segment and the open triangle; any contact involving
/// a segment endpoint, a triangle edge, or coplanarity is `degenerate`.
inline SegmentTriangleIntersection seg_tri_intersect(const Segment3& seg, const Triangle3& tri) {
  using Kind = SegmentTriangleIntersection::Kind;
  SegmentTriangleIntersection out;
  const Point3 n = tri.normal();
  const Rational o0 = dot(n, seg.a - tri.v[0]);
  const Rational o1 = dot(n, seg.b - tri.v[0]);
  const int s0 = o0.sign(), s1 = o1.sign();
  if (s0 * s1 > 0) return out;

  // Closed containment of a point already in the plane.
  auto containment = [&](const Point3& p) {
    int pos = 0, neg = 0, zero = 0;
    for (int i = 0; i < 3; ++i) {
      int s = dot(n, cross(tri.v[(i + 1) % 3] - tri.v[i], p - tri.v[i])).sign();
      (s > 0 ? pos : s < 0 ? neg : zero)++;
    }
    if (pos > 0 && neg > 0) return -1;
    return zero > 0 ? 0 : 1;
  };

  if (s0 == 0 && s1 == 0) {
    const int axis = detail::dominant_axis(n);
    std::array<Point2, 3> t2{detail::drop_axis(tri.v[0], axis), detail::drop_axis(tri.v[1], axis),
                             detail::drop_axis(tri.v[2], axis)};
    Segment2 s2{detail::drop_axis(seg.a, axis), detail::drop_axis(seg.b, axis)};
    bool touch = detail::point_in_triangle2(s2.a, t2) >= 0 || detail::point_in_triangle2(s2.b, t2) >= 0;
    for (int i = 0; i < 3 && !touch; ++i)
      touch = seg_intersect(s2, {t2[i], t2[(i + 1) % 3]}).kind != SegmentIntersection::Kind::none;
    if (touch) out.kind = Kind::degenerate;
    return out;
  }
  if (s0 == 0 || s1 == 0) {
    if (containment(s0 == 0 ? seg.a : seg.b) >= 0) out.kind = Kind::degenerate;
    return out;
  }
  Rational s = o0 / (o0 - o1);
  Point3 p = seg.at(s);
  int c = containment(p);
  if (c < 0) return out;
  if (c == 0) {
    out.kind = Kind::degenerate;
    return out;
  }
  out.kind = Kind::point;
  out.point = std::move(p);
  out.s = std::move(s);
  return out;
}

/// Affine chart coordinates (u, w) of a point in the plane of `tri`, with
/// p = v0 + u (v1 - v0) + w (v2 - v0).
inline Point2 triangle_chart(const Triangle3& tri, const Point3& p) {
  const Point3 e1 = tri.v[1] - tri.v[0];
  const Point3 e2 = tri.v[2] - tri.v[0];
  const Point3 n = cross(e1, e2);
  const Rational nn = norm2(n);
  const Point3 d = p - tri.v[0];
  return {dot(cross(d, e2), n) / nn, dot(cross(e1, d), n) / nn};
}

inline Point3 chart_point(const Triangle3& tri, const Point2& uw) {
  return tri.v[0] + uw.x * (tri.v[1] - tri.v[0]) + uw.y * (tri.v[2] - tri.v[0]);
}

/// Integer translations z such that the bounding boxes of `a` and `b + z`
/// intersect (closed boxes). Used to enumerate lifts in the 3-torus.
inline std::vector<Point3> overlapping_translations(const std::array<Point3, 3>& a,
                                                    const std::array<Point3, 3>& b) {
  std::array<long, 3> lo{}, hi{};
  for (int k = 0; k < 3; ++k) {
    Rational amin = a[0][k], amax = a[0][k], bmin = b[0][k], bmax = b[0][k];
    for (int i = 1; i < 3; ++i) {
      amin = min(amin, a[i][k]);
      amax = max(amax, a[i][k]);
      bmin = min(bmin, b[i][k]);
      bmax = max(bmax, b[i][k]);
    }
    // need amin <= bmax + z and bmin + z <= amax
    Rational zlo = amin - bmax, zhi = amax - bmin;
    Rational clo = zlo.floor();
    if (clo < zlo) clo += 1;
    lo[k] = clo.to_long();
    hi[k] = zhi.floor().to_long();
  }
  std::vector<Point3> out;
  for (long x = lo[0]; x <= hi[0]; ++x)
    for (long y = lo[1]; y <= hi[1]; ++y)
      for (long z = lo[2]; z <= hi[2]; ++z) out.push_back({x, y, z});
  return out;
}

}  // namespace multipoint
