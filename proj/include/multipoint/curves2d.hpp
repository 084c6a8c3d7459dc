#pragma once

// Immersed closed multicurves on square-tiled surfaces: general-position
// certification, double points, normal transport, pushoffs, and the mod-2
// intersection pairing.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multipoint/surface2d.hpp"

namespace multipoint {

struct CurveVertex {
  int square = 0;
  Point2 p;
  friend bool operator==(const CurveVertex&, const CurveVertex&) = default;
};

/// One closed polyline. routes[k] says how vertex k reaches vertex k+1
/// (cyclically): straight inside the square, or across one square edge.
struct CurveComponent {
  std::vector<CurveVertex> vertices;
  std::vector<std::optional<Side>> routes;
  friend bool operator==(const CurveComponent&, const CurveComponent&) = default;
};

/// A point on the source 1-manifold: segment index plus parameter in [0,1).
struct CurveParam {
  int component = 0;
  int segment = 0;
  Rational s;
  friend bool operator==(const CurveParam&, const CurveParam&) = default;
  friend auto operator<=>(const CurveParam&, const CurveParam&) = default;
};

inline std::string to_string(const CurveParam& c) {
  return "c" + std::to_string(c.component) + ":" + std::to_string(c.segment) + "@" + c.s.str();
}

/// A point of the ambient square complex.
struct AmbientPoint {
  int square = 0;
  Point2 p;
  friend bool operator==(const AmbientPoint&, const AmbientPoint&) = default;
  friend auto operator<=>(const AmbientPoint&, const AmbientPoint&) = default;
};

inline std::string to_string(const AmbientPoint& a) { return "s" + std::to_string(a.square) + " " + to_string(a.p); }

/// Straight sub-segment of a curve lying in a single square.
struct CurvePiece {
  int square = 0;
  Segment2 seg;
  int component = 0;
  int segment = 0;
  Rational s0, s1;  // parameter range on the full segment
  bool start_vertex = true;  // false: starts on a square edge
  bool end_vertex = true;

  CurveParam param_at(const Rational& u) const { return {component, segment, s0 + u * (s1 - s0)}; }
};

/// Resolved geometry of one segment in the frame of its starting square.
struct SegmentGeometry {
  int from_square = 0;
  int to_square = 0;
  Point2 p;      // start, departure frame
  Point2 q_ext;  // end, departure frame (beyond the crossed edge if any)
  std::optional<Side> exit;
  Transform2 map;  // departure frame -> arrival frame (identity when direct)
  Rational cross_s;
  Point2 cross_point;  // on the crossed edge, departure frame

  Point2 direction() const { return q_ext - p; }
};

namespace detail {

inline bool strictly_inside_unit(const Point2& p) {
  return p.x.sign() > 0 && p.x < 1 && p.y.sign() > 0 && p.y < 1;
}

inline Rational inside_distance(Side side, const Point2& p) {
  return dot(inward_normal(side), p - edge_point(side, 0));
}

}  // namespace detail

inline SegmentGeometry segment_geometry(const SquareComplex& c, const CurveVertex& from, const CurveVertex& to,
                                        const std::optional<Side>& route) {
  SegmentGeometry g;
  g.from_square = from.square;
  g.to_square = to.square;
  g.p = from.p;
  g.exit = route;
  if (!route) {
    if (from.square != to.square)
      throw Violation("no-route", "direct step between different squares s" + std::to_string(from.square) + ", s" +
                                      std::to_string(to.square));
    g.q_ext = to.p;
  } else {
    const EdgeCrossing* x = c.across(from.square, *route);
    if (!x) throw Violation("no-route", "boundary edge " + to_string(EdgeRef{from.square, *route}));
    if (x->to.square != to.square) throw Violation("no-route", "edge " + to_string(EdgeRef{from.square, *route}) +
                                                                  " does not lead to s" + std::to_string(to.square));
    g.map = x->map;
    g.q_ext = x->map.inverse().apply(to.p);
    const Rational hp = detail::inside_distance(*route, g.p);
    const Rational hq = detail::inside_distance(*route, g.q_ext);
    if (hp.sign() <= 0 || hq.sign() >= 0) throw Violation("no-route", "step does not cross its edge");
    g.cross_s = hp / (hp - hq);
    g.cross_point = g.p + g.cross_s * (g.q_ext - g.p);
    const Rational t = edge_parameter(*route, g.cross_point);
    if (t.sign() <= 0 || t >= 1)
      throw Violation("vertex-on-edge", "step crosses the corner of s" + std::to_string(from.square));
  }
  if (g.q_ext == g.p) throw Violation("zero-length-segment", "at " + to_string(AmbientPoint{from.square, from.p}));
  return g;
}

/// Shortest-step rule: among the straight step inside the square and the
/// single-edge crossings that reach the next vertex's square, pick the one
/// of least length. Ties are rejected.
inline std::optional<Side> resolve_route(const SquareComplex& c, const CurveVertex& from, const CurveVertex& to) {
  struct Candidate {
    Rational len;
    std::optional<Side> route;
  };
  std::vector<Candidate> cands;
  if (from.square == to.square && !(from.p == to.p)) cands.push_back({norm2(to.p - from.p), std::nullopt});
  for (Side s : kSides) {
    const EdgeCrossing* x = c.across(from.square, s);
    if (!x || x->to.square != to.square) continue;
    Point2 q = x->map.inverse().apply(to.p);
    cands.push_back({norm2(q - from.p), s});
  }
  if (cands.empty())
    throw Violation("no-route", "no single step from s" + std::to_string(from.square) + " to s" + std::to_string(to.square));
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.len < b.len; });
  if (cands.size() > 1 && cands[0].len == cands[1].len)
    throw Violation("ambiguous-step", "equal-length steps from " + to_string(AmbientPoint{from.square, from.p}));
  return cands[0].route;
}

class ImmersedMulticurve {
 public:
  ImmersedMulticurve() = default;

  /// Builds a multicurve with explicit routes; throws Violation when a
  /// vertex touches a square edge, a step is impossible, or a step is empty.
  ImmersedMulticurve(std::shared_ptr<const SquareComplex> ambient, std::vector<CurveComponent> components,
                     std::vector<std::string> ids = {})
      : ambient_(std::move(ambient)), components_(std::move(components)), ids_(std::move(ids)) {
    if (!ambient_) throw std::invalid_argument("ImmersedMulticurve: null ambient");
    if (ids_.empty())
      for (std::size_t k = 0; k < components_.size(); ++k) ids_.push_back("c" + std::to_string(k));
    if (ids_.size() != components_.size()) throw std::invalid_argument("ImmersedMulticurve: id count mismatch");
    build();
  }

  /// Builds a multicurve from vertex lists, resolving each step with
  /// resolve_route.
  static ImmersedMulticurve from_vertices(std::shared_ptr<const SquareComplex> ambient,
                                          const std::vector<std::vector<CurveVertex>>& loops,
                                          std::vector<std::string> ids = {}) {
    if (!ambient) throw std::invalid_argument("ImmersedMulticurve: null ambient");
    std::vector<CurveComponent> comps;
    for (const auto& loop : loops) {
      check_vertices(*ambient, loop);
      CurveComponent comp;
      comp.vertices = loop;
      for (std::size_t k = 0; k < loop.size(); ++k)
        comp.routes.push_back(resolve_route(*ambient, loop[k], loop[(k + 1) % loop.size()]));
      comps.push_back(std::move(comp));
    }
    return ImmersedMulticurve(std::move(ambient), std::move(comps), std::move(ids));
  }

  const SquareComplex& ambient() const { return *ambient_; }
  const std::shared_ptr<const SquareComplex>& ambient_ptr() const { return ambient_; }
  const std::vector<CurveComponent>& components() const { return components_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }

  int component_index(const std::string& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw Violation("unknown-component", id);
    return static_cast<int>(it - ids_.begin());
  }

  const SegmentGeometry& segment(int component, int k) const { return geometry_[component][k]; }
  const std::vector<CurvePiece>& pieces() const { return pieces_; }

  /// Orientation flips of a transported normal at each gluing crossed by the
  /// component, in traversal order.
  std::vector<int> normal_transport(int component) const {
    std::vector<int> bits;
    const auto& geo = geometry_.at(component);
    for (const auto& g : geo) {
      if (!g.exit) continue;
      const Point2 t = g.direction();
      const Point2 n = perp(t);
      const int before = cross(t, n).sign();
      const int after = cross(g.map.apply_linear(t), g.map.apply_linear(n)).sign();
      bits.push_back(before == after ? 0 : 1);
    }
    return bits;
  }

  AmbientLoop ambient_loop(int component) const {
    const auto& comp = components_.at(component);
    AmbientLoop loop{comp.vertices.front().square, {}};
    for (const auto& r : comp.routes)
      if (r) loop.exits.push_back(*r);
    return loop;
  }

  friend bool operator==(const ImmersedMulticurve& a, const ImmersedMulticurve& b) {
    return *a.ambient_ == *b.ambient_ && a.components_ == b.components_ && a.ids_ == b.ids_;
  }

 private:
  static void check_vertices(const SquareComplex& c, const std::vector<CurveVertex>& loop) {
    if (loop.size() < 2) throw Violation("too-few-vertices", "a closed polyline needs at least two vertices");
    for (const auto& v : loop) {
      if (v.square < 0 || v.square >= c.square_count())
        throw Violation("bad-square", "s" + std::to_string(v.square));
      if (!detail::strictly_inside_unit(v.p)) throw Violation("vertex-on-edge", to_string(AmbientPoint{v.square, v.p}));
    }
  }

  void build() {
    for (std::size_t ci = 0; ci < components_.size(); ++ci) {
      const auto& comp = components_[ci];
      check_vertices(*ambient_, comp.vertices);
      if (comp.routes.size() != comp.vertices.size()) throw std::invalid_argument("route count mismatch");
      std::vector<SegmentGeometry> geo;
      const std::size_t n = comp.vertices.size();
      for (std::size_t k = 0; k < n; ++k) {
        geo.push_back(segment_geometry(*ambient_, comp.vertices[k], comp.vertices[(k + 1) % n], comp.routes[k]));
        const auto& g = geo.back();
        CurvePiece first{g.from_square, {g.p, g.exit ? g.cross_point : g.q_ext}, static_cast<int>(ci),
                         static_cast<int>(k), 0, g.exit ? g.cross_s : Rational(1), true, !g.exit};
        pieces_.push_back(first);
        if (g.exit)
          pieces_.push_back({g.to_square, {g.map.apply(g.cross_point), comp.vertices[(k + 1) % n].p},
                             static_cast<int>(ci), static_cast<int>(k), g.cross_s, 1, false, true});
      }
      geometry_.push_back(std::move(geo));
    }
  }

  std::shared_ptr<const SquareComplex> ambient_;
  std::vector<CurveComponent> components_;
  std::vector<std::string> ids_;
  std::vector<std::vector<SegmentGeometry>> geometry_;
  std::vector<CurvePiece> pieces_;
};

/// A transverse crossing between two curve pieces.
struct CurveCrossing {
  AmbientPoint at;
  CurveParam first, second;
};

struct GeneralPositionCert2 {
  bool vertices_off_edges = true;
  bool vertices_off_crossings = true;
  bool crossings_transverse = true;
  bool no_triple_points = true;
  std::optional<Rational> min_separation;
  std::size_t crossing_count = 0;
  std::vector<Issue> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline int segment_count(const ImmersedMulticurve& f, int component) {
  return static_cast<int>(f.components()[component].vertices.size());
}

// Pieces that meet at a shared polyline vertex; returns that vertex.
inline std::optional<Point2> shared_vertex(const ImmersedMulticurve& f, const CurvePiece& a, const CurvePiece& b) {
  if (a.component != b.component) return std::nullopt;
  const int n = segment_count(f, a.component);
  if (a.end_vertex && b.start_vertex && (a.segment + 1) % n == b.segment) return a.seg.b;
  if (b.end_vertex && a.start_vertex && (b.segment + 1) % n == a.segment) return b.seg.b;
  return std::nullopt;
}

struct ContactScan {
  std::vector<CurveCrossing> crossings;
  std::vector<Issue> issues;
};

inline void classify_contact(const CurvePiece& a, const CurvePiece& b, const SegmentIntersection& hit,
                             ContactScan& out) {
  if (hit.kind == SegmentIntersection::Kind::degenerate) {
    out.issues.push_back({"degenerate-overlap", "collinear overlap in s" + std::to_string(a.square)});
    return;
  }
  if (hit.interior()) {
    out.crossings.push_back({{a.square, hit.point}, a.param_at(hit.s), b.param_at(hit.t)});
    return;
  }
  auto at_vertex = [](const CurvePiece& p, const Rational& u) {
    return (u.is_zero() && p.start_vertex) || (u == 1 && p.end_vertex);
  };
  auto at_end = [](const Rational& u) { return u.is_zero() || u == 1; };
  const bool va = at_end(hit.s) && at_vertex(a, hit.s);
  const bool vb = at_end(hit.t) && at_vertex(b, hit.t);
  const std::string where = to_string(AmbientPoint{a.square, hit.point});
  if (va && vb) out.issues.push_back({"coincident-vertices", where});
  else if (va || vb) out.issues.push_back({"tangency", where});
  else out.issues.push_back({"crossing-on-edge", where});
}

inline void flag_triples(ContactScan& scan) {
  std::map<AmbientPoint, int> count;
  for (const auto& c : scan.crossings) ++count[c.at];
  for (const auto& [p, k] : count)
    if (k > 1) scan.issues.push_back({"triple-point", to_string(p)});
}

inline std::map<int, std::vector<const CurvePiece*>> by_square(const std::vector<CurvePiece>& pieces) {
  std::map<int, std::vector<const CurvePiece*>> out;
  for (const auto& p : pieces) out[p.square].push_back(&p);
  return out;
}

inline ContactScan scan_self(const ImmersedMulticurve& f) {
  ContactScan scan;
  for (const auto& [square, list] : by_square(f.pieces()))
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const CurvePiece& a = *list[i];
        const CurvePiece& b = *list[j];
        auto hit = seg_intersect(a.seg, b.seg);
        if (hit.kind == SegmentIntersection::Kind::none) continue;
        if (auto v = shared_vertex(f, a, b); v && hit.is_point() && hit.point == *v) continue;
        classify_contact(a, b, hit, scan);
      }
  flag_triples(scan);
  return scan;
}

inline ContactScan scan_pair(const std::vector<CurvePiece>& fa, const std::vector<CurvePiece>& fb) {
  ContactScan scan;
  auto sb = by_square(fb);
  for (const auto& [square, la] : by_square(fa)) {
    auto it = sb.find(square);
    if (it == sb.end()) continue;
    for (const CurvePiece* a : la)
      for (const CurvePiece* b : it->second) {
        auto hit = seg_intersect(a->seg, b->seg);
        if (hit.kind == SegmentIntersection::Kind::none) continue;
        classify_contact(*a, *b, hit, scan);
      }
  }
  return scan;
}

// Separation data per square: polyline vertices and pieces as features,
// plus each vertex's distance to the square boundary.
inline std::optional<Rational> curve_separation(const std::vector<const ImmersedMulticurve*>& curves) {
  std::map<int, std::vector<Feature2>> features;
  std::optional<Rational> best;
  auto take = [&](Rational d) {
    if (!best || d < *best) best = std::move(d);
  };
  for (const auto* f : curves) {
    for (const auto& comp : f->components())
      for (const auto& v : comp.vertices) {
        features[v.square].push_back(v.p);
        for (Side s : kSides) {
          Rational h = inside_distance(s, v.p);
          take(h * h);
        }
      }
    for (const auto& p : f->pieces()) features[p.square].push_back(p.seg);
  }
  for (const auto& [sq, list] : features)
    if (auto d = min_separation(list)) take(*d);
  return best;
}

}  // namespace detail

inline GeneralPositionCert2 validate_general_position(const ImmersedMulticurve& f) {
  GeneralPositionCert2 cert;
  auto scan = detail::scan_self(f);
  cert.crossing_count = scan.crossings.size();
  for (const auto& issue : scan.issues) {
    if (issue.code == "tangency" || issue.code == "coincident-vertices") cert.vertices_off_crossings = false;
    if (issue.code == "degenerate-overlap" || issue.code == "crossing-on-edge") cert.crossings_transverse = false;
    if (issue.code == "triple-point") cert.no_triple_points = false;
  }
  cert.violations = std::move(scan.issues);
  cert.min_separation = detail::curve_separation({&f});
  if (cert.violations.empty() && cert.min_separation && cert.min_separation->sign() <= 0)
    cert.violations.push_back({"coincident-features", "zero separation"});
  return cert;
}

inline void require_certified(const ImmersedMulticurve& f) {
  auto cert = validate_general_position(f);
  if (!cert.ok()) throw Violation(cert.violations.front().code, cert.violations.front().detail);
}

struct DoublePointData {
  std::vector<AmbientPoint> points;
  /// Two entries per point, (a,b) then (b,a).
  std::vector<std::pair<CurveParam, CurveParam>> ordered_preimages;
};

inline DoublePointData double_points(const ImmersedMulticurve& f) {
  auto scan = detail::scan_self(f);
  if (!scan.issues.empty()) throw Violation(scan.issues.front().code, scan.issues.front().detail);
  std::sort(scan.crossings.begin(), scan.crossings.end(),
            [](const CurveCrossing& a, const CurveCrossing& b) { return a.at < b.at; });
  DoublePointData out;
  for (auto& c : scan.crossings) {
    auto a = c.first, b = c.second;
    if (b < a) std::swap(a, b);
    out.points.push_back(c.at);
    out.ordered_preimages.emplace_back(a, b);
    out.ordered_preimages.emplace_back(b, a);
  }
  return out;
}

/// Transverse crossings between two distinct multicurves on the same
/// ambient, sorted by location. Throws "non-transverse" on any contact that
/// is not a clean crossing.
inline std::vector<CurveCrossing> crossings_between(const ImmersedMulticurve& f, const ImmersedMulticurve& g) {
  if (!(f.ambient() == g.ambient())) throw Violation("ambient-mismatch", "curves live on different surfaces");
  auto scan = detail::scan_pair(f.pieces(), g.pieces());
  detail::flag_triples(scan);
  if (!scan.issues.empty()) throw Violation("non-transverse", scan.issues.front().code + " " + scan.issues.front().detail);
  std::sort(scan.crossings.begin(), scan.crossings.end(),
            [](const CurveCrossing& a, const CurveCrossing& b) { return a.at < b.at; });
  return scan.crossings;
}

/// 1 iff the normal line bundle of the component is non-orientable, found
/// by transporting a normal vector once around the loop.
inline int two_sidedness(const ImmersedMulticurve& f, int component) {
  if (component < 0 || component >= static_cast<int>(f.size()))
    throw Violation("unknown-component", std::to_string(component));
  int bit = 0;
  for (int b : f.normal_transport(component)) bit ^= b;
  return bit;
}

inline int two_sidedness(const ImmersedMulticurve& f, const std::string& id) {
  return two_sidedness(f, f.component_index(id));
}

// ---------------------------------------------------------------------------
// Pushoff

enum class PushSide { left, right };

struct Pushoff {
  CurveComponent curve;
  bool reconnected = false;
};

namespace detail {

inline Rational l1(const Point2& v) { return abs(v.x) + abs(v.y); }

// Offset vector of length ~eps on the given side of direction d (L1
// normalisation keeps it rational).
inline Point2 offset_vector(const Point2& d, int side, const Rational& eps) {
  return (Rational(side) * eps / l1(d)) * perp(d);
}

// Intersection of the lines {q + a_in + t d_in} and {q + a_out + t d_out}.
inline Point2 miter(const Point2& q, const Point2& d_in, const Point2& a_in, const Point2& d_out,
                    const Point2& a_out) {
  const Rational den = cross(d_in, d_out);
  if (den.is_zero()) return q + a_out;
  const Rational lambda = cross(a_out - a_in, d_out) / den;
  return q + a_in + lambda * d_in;
}

inline ImmersedMulticurve single(const ImmersedMulticurve& f, CurveComponent comp) {
  return ImmersedMulticurve(f.ambient_ptr(), {std::move(comp)}, {"pushoff"});
}

}  // namespace detail

/// Offsets one component by epsilon to the chosen side with mitered
/// corners. When the normal comes back reversed (one-sided component) the
/// offset ends on the opposite side of where it began, and a straight
/// reconnection jump closes it, crossing the component exactly once.
/// Throws Violation("pushoff-collision") when epsilon is too large for the
/// local geometry. The offset starts next to the first vertex, before any
/// point where the component meets itself or one of `avoid`.
inline Pushoff pushoff_polyline(const ImmersedMulticurve& f, int component, PushSide side, const Rational& epsilon,
                                const std::vector<CurvePiece>& avoid = {}) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("pushoff_polyline: epsilon must be positive");
  const auto& comp = f.components().at(component);
  const int m = static_cast<int>(comp.vertices.size());

  ImmersedMulticurve alone(f.ambient_ptr(), {comp}, {"core"});
  auto sep = detail::curve_separation({&alone});
  if (!sep || Rational(9) * epsilon * epsilon >= *sep)
    throw Violation("pushoff-collision", "epsilon exceeds a third of the feature separation");

  std::vector<int> sigma(static_cast<std::size_t>(m) + 1);
  sigma[0] = side == PushSide::left ? 1 : -1;
  for (int k = 0; k < m; ++k) sigma[k + 1] = sigma[k] * f.segment(component, k).map.det();

  auto dir = [&](int k) { return f.segment(component, k).direction(); };
  auto offset = [&](int k, int s) { return detail::offset_vector(dir(k), s, epsilon); };

  // Split point on the first piece of segment 0, short of its first contact.
  const SegmentGeometry& g0 = f.segment(component, 0);
  const CurvePiece& head = alone.pieces().front();
  Rational first_hit(1);
  auto probe = [&](const CurvePiece& other) {
    if (other.square != head.square) return;
    auto hit = seg_intersect(head.seg, other.seg);
    if (hit.is_point() && hit.s.sign() > 0 && hit.s < first_hit) first_hit = hit.s;
  };
  for (std::size_t k = 1; k < alone.pieces().size(); ++k) probe(alone.pieces()[k]);
  for (const auto& other : avoid) probe(other);
  const Rational split = first_hit * head.s1 / 2;
  const Point2 mid = g0.p + split * g0.direction();
  const int sq0 = comp.vertices[0].square;

  Pushoff out;
  auto& verts = out.curve.vertices;
  auto& routes = out.curve.routes;
  verts.push_back({sq0, mid + offset(0, sigma[0])});
  routes.push_back(g0.exit);
  for (int k = 1; k <= m; ++k) {
    const SegmentGeometry& gin = f.segment(component, k - 1);
    const int kk = k % m;
    const Point2& q = comp.vertices[kk].p;
    const Point2 d_in = gin.map.apply_linear(dir(k - 1));
    const Point2 a_in = gin.map.apply_linear(offset(k - 1, sigma[k - 1]));
    const Point2 w = detail::miter(q, d_in, a_in, dir(kk), offset(kk, sigma[k]));
    verts.push_back({comp.vertices[kk].square, w});
    routes.push_back(kk == 0 ? std::nullopt : f.segment(component, kk).exit);
  }
  out.reconnected = sigma[m] != sigma[0];
  if (out.reconnected) {
    verts.push_back({sq0, mid + offset(0, sigma[m])});
    routes.push_back(std::nullopt);
  }

  try {
    for (const auto& v : verts)
      if (!detail::strictly_inside_unit(v.p)) throw Violation("pushoff-collision", "offset vertex leaves its square");
    auto pushed = detail::single(f, out.curve);
    auto scan = detail::scan_pair(alone.pieces(), pushed.pieces());
    if (!scan.issues.empty()) throw Violation("pushoff-collision", scan.issues.front().code);
    const std::size_t self = detail::scan_self(alone).crossings.size();
    if (scan.crossings.size() != 2 * self + (out.reconnected ? 1 : 0))
      throw Violation("pushoff-collision", "offset crosses the core unexpectedly");
    if (out.reconnected) {
      const int jump = static_cast<int>(out.curve.vertices.size()) - 1;
      int hits = 0;
      for (const auto& c : scan.crossings)
        if (c.second.segment == jump) ++hits;
      if (hits != 1) throw Violation("pushoff-collision", "reconnection jump must cross the core once");
    }
  } catch (const Violation& v) {
    if (v.code() == "pushoff-collision") throw;
    throw Violation("pushoff-collision", v.what());
  }
  return out;
}

namespace detail {

inline Rational initial_epsilon(const std::vector<const ImmersedMulticurve*>& curves) {
  Rational eps(1, 8);
  for (const auto* f : curves) {
    auto sep = curve_separation({f});
    if (!sep) continue;
    if (sep->sign() <= 0) throw Violation("coincident-features", "zero separation");
    while (Rational(9) * eps * eps >= *sep) eps /= 2;
  }
  return eps;
}

}  // namespace detail

inline constexpr int kPushoffBudget = 40;

/// Mod-2 intersection number of component `component` of f with the class
/// of g, counted against a pushoff of every component of g.
inline int pairing_mod2(const ImmersedMulticurve& f, int component, const ImmersedMulticurve& g,
                        PushSide side = PushSide::left, std::optional<Rational> epsilon = std::nullopt) {
  if (!(f.ambient() == g.ambient())) throw Violation("ambient-mismatch", "curves live on different surfaces");
  require_certified(f);
  require_certified(g);
  if (component < 0 || component >= static_cast<int>(f.size()))
    throw Violation("unknown-component", std::to_string(component));
  std::vector<CurvePiece> core;
  for (const auto& p : f.pieces())
    if (p.component == component) core.push_back(p);

  Rational eps = epsilon ? *epsilon : detail::initial_epsilon({&f, &g});
  std::string last = "no attempt";
  for (int attempt = 0; attempt < kPushoffBudget; ++attempt, eps /= 2) {
    try {
      std::vector<CurveComponent> pushed;
      for (int d = 0; d < static_cast<int>(g.size()); ++d)
        pushed.push_back(pushoff_polyline(g, d, side, eps, core).curve);
      ImmersedMulticurve moved(g.ambient_ptr(), std::move(pushed));
      auto scan = detail::scan_pair(core, moved.pieces());
      if (!scan.issues.empty()) {
        last = scan.issues.front().code;
        continue;
      }
      return static_cast<int>(scan.crossings.size() % 2);
    } catch (const Violation& v) {
      if (v.code() != "pushoff-collision") throw;
      last = v.what();
    }
  }
  throw Violation("pushoff-collision", "no admissible epsilon found: " + last);
}

inline int pairing_mod2(const ImmersedMulticurve& f, const std::string& id, const ImmersedMulticurve& g) {
  return pairing_mod2(f, f.component_index(id), g);
}

/// Both sides of the r = 1 identity on one source circle.
struct R1Evaluation {
  int lhs = 0;    // <[f], f_*[C]>
  int mu = 0;     // points of the double-point preimage lying on C, mod 2
  int euler = 0;  // normal bundle non-orientability along C
  int mu_count = 0;
  int rhs() const { return (mu + euler) % 2; }
};

inline int herbert_lhs_r1(const ImmersedMulticurve& f, int component) { return pairing_mod2(f, component, f); }

inline R1Evaluation herbert_rhs_r1(const ImmersedMulticurve& f, int component) {
  auto dp = double_points(f);
  R1Evaluation e;
  for (const auto& [first, second] : dp.ordered_preimages)
    if (first.component == component) ++e.mu_count;
  e.mu = e.mu_count % 2;
  e.euler = two_sidedness(f, component);
  return e;
}

inline R1Evaluation herbert_r1(const ImmersedMulticurve& f, int component) {
  auto e = herbert_rhs_r1(f, component);
  e.lhs = herbert_lhs_r1(f, component);
  return e;
}

/// Disjoint union of two multicurves on the same surface. Component ids are
/// kept; clashing ids get a suffix.
inline ImmersedMulticurve union_curves(const ImmersedMulticurve& f, const ImmersedMulticurve& g) {
  if (f.empty()) return g;
  if (g.empty()) return f;
  if (!(f.ambient() == g.ambient())) throw Violation("ambient-mismatch", "curves live on different surfaces");
  auto comps = f.components();
  auto ids = f.ids();
  for (std::size_t k = 0; k < g.size(); ++k) {
    comps.push_back(g.components()[k]);
    std::string id = g.ids()[k];
    while (std::find(ids.begin(), ids.end(), id) != ids.end()) id += "'";
    ids.push_back(id);
  }
  return ImmersedMulticurve(f.ambient_ptr(), std::move(comps), std::move(ids));
}

}  // namespace multipoint
