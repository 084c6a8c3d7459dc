#pragma once

// Represented classes: immersions and their multiple-point sets carried as
// exact geometric representatives, never quotiented by bordism. Equalities
// between classes are checked as exact point or segment multisets.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multipoint/curves2d.hpp"
#include "multipoint/surfaces3d.hpp"

namespace multipoint {

struct EmptyClass {};
/// psi_0: the unit for the internal product (and mu_1, the source identity).
struct IdentityMarker {};

struct PointSet2 {
  std::vector<AmbientPoint> points;
};

/// Closed curves in T^3, each a bag of lifted segments whose endpoints agree
/// mod Z^3.
struct CurveSet3 {
  std::vector<std::vector<Segment3>> circles;
};

struct PointSet3 {
  std::vector<Point3> points;  // wrapped
};

/// Points on the source circles of a multicurve.
struct CirclePoints {
  std::vector<CurveParam> points;
};

/// Points and curves on the source surface of a triangulated immersion.
struct MeshPoints {
  std::shared_ptr<const TriangulatedImmersion3> source;
  std::vector<MeshPoint> points;
};

struct MeshCurves {
  std::shared_ptr<const TriangulatedImmersion3> source;
  std::vector<MeshSegment> pieces;
};

using ClassPayload = std::variant<EmptyClass, IdentityMarker, ImmersedMulticurve, TriangulatedImmersion3, PointSet2,
                                  CurveSet3, PointSet3, CirclePoints, MeshPoints, MeshCurves>;

struct RepresentedClass {
  ClassPayload payload;
  /// Per element: the unordered labels of the sheets through it (the normal
  /// structure of a multiple-point set). Empty when not tracked.
  std::vector<std::vector<std::string>> structure;
  std::string note;

  template <class T>
  bool holds() const { return std::holds_alternative<T>(payload); }
  template <class T>
  const T& as() const { return std::get<T>(payload); }

  std::size_t size() const {
    return std::visit(
        [](const auto& p) -> std::size_t {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, EmptyClass>) return 0;
          else if constexpr (std::is_same_v<T, IdentityMarker>) return 1;
          else if constexpr (std::is_same_v<T, ImmersedMulticurve>) return p.size();
          else if constexpr (std::is_same_v<T, TriangulatedImmersion3>) return static_cast<std::size_t>(p.size());
          else if constexpr (std::is_same_v<T, CurveSet3>) return p.circles.size();
          else if constexpr (std::is_same_v<T, MeshCurves>) return p.pieces.size();
          else return p.points.size();
        },
        payload);
  }
  bool empty() const { return !holds<IdentityMarker>() && size() == 0; }
};

inline RepresentedClass empty_class(std::string note = "") { return {EmptyClass{}, {}, std::move(note)}; }
inline RepresentedClass make_class(ImmersedMulticurve f) { return {std::move(f), {}, ""}; }
inline RepresentedClass make_class(TriangulatedImmersion3 f) { return {std::move(f), {}, ""}; }

namespace detail {

inline std::vector<std::string> labels(std::string a, std::string b) {
  std::vector<std::string> out{std::move(a), std::move(b)};
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string sheet_label(const TriangulatedImmersion3& f, int tri) { return f.ids()[f.component_of(tri)]; }

/// Canonical form of a lifted segment up to integer translation and
/// reversal.
inline std::pair<Point3, Point3> segment_key(const Segment3& s) {
  std::pair<Point3, Point3> k1{wrap(s.a), s.b - s.a}, k2{wrap(s.b), s.a - s.b};
  return std::min(k1, k2);
}

/// Groups segments into closed curves by matching wrapped endpoints.
inline std::vector<std::vector<Segment3>> chain_segments(const std::vector<Segment3>& segs) {
  std::map<Point3, std::vector<int>> ends;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    ends[wrap(segs[s].a)].push_back(s);
    ends[wrap(segs[s].b)].push_back(s);
  }
  for (const auto& [p, list] : ends)
    if (list.size() != 2) throw Violation("trace-not-closed", "curve end " + to_string(p));
  std::vector<int> circle(segs.size(), -1);
  std::vector<std::vector<Segment3>> out;
  for (int start = 0; start < static_cast<int>(segs.size()); ++start) {
    if (circle[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{start};
    circle[start] = id;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      out[id].push_back(segs[s]);
      for (const auto& p : {segs[s].a, segs[s].b})
        for (int t : ends[wrap(p)])
          if (circle[t] < 0) {
            circle[t] = id;
            stack.push_back(t);
          }
    }
  }
  return out;
}

inline std::vector<Segment3> all_segments(const CurveSet3& c) {
  std::vector<Segment3> out;
  for (const auto& circle : c.circles) out.insert(out.end(), circle.begin(), circle.end());
  return out;
}

/// Points where lifted segments cross the surface g, as points of g's
/// source.
inline std::vector<MeshPoint> segments_on_surface(const std::vector<Segment3>& segs, const TriangulatedImmersion3& g) {
  std::vector<MeshPoint> out;
  for (const auto& s : segs)
    for (int k = 0; k < g.size(); ++k)
      for (const auto& w : overlapping_translations(seg_box(s), g.triangle(k).v)) {
        Triangle3 c = g.triangle(k);
        for (auto& v : c.v) v = v + w;
        auto hit = seg_tri_intersect(s, c);
        if (hit.kind == SegmentTriangleIntersection::Kind::degenerate)
          throw Violation("non-transverse", "curve meets t" + std::to_string(k) + " at an edge or endpoint");
        if (hit.transverse()) out.push_back({k, hit.point - w});
      }
  std::sort(out.begin(), out.end());
  return out;
}

/// Transverse crossings between curve pieces on a source mesh. Pieces that
/// only touch end to end are consecutive pieces of one curve and are skipped.
inline std::vector<MeshPoint> mesh_double_points(const TriangulatedImmersion3& f, const std::vector<MeshSegment>& pieces) {
  std::vector<MeshPoint> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const auto& x = pieces[i];
      const auto& y = pieces[j];
      if (x.tri != y.tri) continue;
      const Triangle3& t = f.triangle(x.tri);
      Segment2 sx{triangle_chart(t, x.local.a), triangle_chart(t, x.local.b)};
      Segment2 sy{triangle_chart(t, y.local.a), triangle_chart(t, y.local.b)};
      auto hit = seg_intersect(sx, sy);
      if (hit.kind == SegmentIntersection::Kind::none) continue;
      if (hit.interior()) {
        out.push_back({x.tri, x.local.a + hit.s * (x.local.b - x.local.a)});
        continue;
      }
      const bool end_to_end = hit.is_point() && (hit.s.is_zero() || hit.s == 1) && (hit.t.is_zero() || hit.t == 1);
      if (!end_to_end) throw Violation("non-transverse", "source curves touch in t" + std::to_string(x.tri));
    }
  std::sort(out.begin(), out.end());
  return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out = "{";
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? ", " : "") + to_string(items[k]);
  return out + "}";
}

inline std::string to_string(const std::pair<Point3, Point3>& k) { return to_string(k.first) + "+" + to_string(k.second); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Monoid and products

/// Certifies the representative when it is an immersion; point and curve
/// sets need no certificate.
inline void certify(const RepresentedClass& c) {
  if (c.holds<ImmersedMulticurve>()) require_certified(c.as<ImmersedMulticurve>());
  if (c.holds<TriangulatedImmersion3>()) certified_analysis(c.as<TriangulatedImmersion3>());
}

/// Disjoint union. The union must itself be in general position.
inline RepresentedClass add(const RepresentedClass& a, const RepresentedClass& b) {
  if (a.holds<EmptyClass>()) return b;
  if (b.holds<EmptyClass>()) return a;
  if (a.payload.index() != b.payload.index()) throw Violation("universe-mismatch", "add");
  RepresentedClass out;
  if (a.holds<ImmersedMulticurve>()) {
    out.payload = union_curves(a.as<ImmersedMulticurve>(), b.as<ImmersedMulticurve>());
  } else if (a.holds<TriangulatedImmersion3>()) {
    const auto& f = a.as<TriangulatedImmersion3>();
    out.payload = union_immersions(f, b.as<TriangulatedImmersion3>(), f.name());
  } else if (a.holds<PointSet2>()) {
    auto pts = a.as<PointSet2>().points;
    const auto& more = b.as<PointSet2>().points;
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    out.payload = PointSet2{std::move(pts)};
  } else if (a.holds<PointSet3>()) {
    auto pts = a.as<PointSet3>().points;
    const auto& more = b.as<PointSet3>().points;
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    out.payload = PointSet3{std::move(pts)};
  } else if (a.holds<CurveSet3>()) {
    auto circles = a.as<CurveSet3>().circles;
    const auto& more = b.as<CurveSet3>().circles;
    circles.insert(circles.end(), more.begin(), more.end());
    out.payload = CurveSet3{std::move(circles)};
  } else {
    throw Violation("unsupported", "add on this universe");
  }
  if (!a.structure.empty() || !b.structure.empty()) {
    out.structure = a.structure;
    out.structure.insert(out.structure.end(), b.structure.begin(), b.structure.end());
  }
  certify(out);
  return out;
}

/// Transverse intersection inside the common ambient: curves x curves in a
/// surface give points, surfaces x surfaces in T^3 give curves, surfaces x
/// curves in T^3 give points. The identity marker is a unit.
inline RepresentedClass internal_product(const RepresentedClass& a, const RepresentedClass& b) {
  if (a.holds<IdentityMarker>()) return b;
  if (b.holds<IdentityMarker>()) return a;
  if (a.empty() || b.empty()) return empty_class();
  RepresentedClass out;
  if (a.holds<ImmersedMulticurve>() && b.holds<ImmersedMulticurve>()) {
    const auto& f = a.as<ImmersedMulticurve>();
    const auto& g = b.as<ImmersedMulticurve>();
    PointSet2 pts;
    for (const auto& c : crossings_between(f, g)) {
      pts.points.push_back(c.at);
      out.structure.push_back(detail::labels(f.ids()[c.first.component], g.ids()[c.second.component]));
    }
    out.payload = std::move(pts);
    return out;
  }
  if (a.holds<TriangulatedImmersion3>() && b.holds<TriangulatedImmersion3>()) {
    std::vector<Segment3> segs;
    for (const auto& s : intersect_surfaces(a.as<TriangulatedImmersion3>(), b.as<TriangulatedImmersion3>()))
      segs.push_back(s.seg);
    out.payload = CurveSet3{detail::chain_segments(segs)};
    return out;
  }
  const RepresentedClass* curve = a.holds<CurveSet3>() ? &a : b.holds<CurveSet3>() ? &b : nullptr;
  const RepresentedClass* surface = a.holds<TriangulatedImmersion3>() ? &a : b.holds<TriangulatedImmersion3>() ? &b : nullptr;
  if (curve && surface) {
    auto segs = detail::all_segments(curve->as<CurveSet3>());
    out.payload = PointSet3{segments_meet_surface(segs, surface->as<TriangulatedImmersion3>())};
    return out;
  }
  throw Violation("unsupported", "internal product on these universes");
}

/// The fiber product of f along g, immersed in the source of g.
inline RepresentedClass pullback_class(const RepresentedClass& g, const RepresentedClass& f) {
  if (f.empty()) return empty_class();
  if (g.holds<ImmersedMulticurve>() && f.holds<ImmersedMulticurve>()) {
    CirclePoints pts;
    for (const auto& c : crossings_between(g.as<ImmersedMulticurve>(), f.as<ImmersedMulticurve>()))
      pts.points.push_back(c.first);
    std::sort(pts.points.begin(), pts.points.end());
    return {std::move(pts), {}, ""};
  }
  if (!g.holds<TriangulatedImmersion3>()) throw Violation("unsupported", "pullback along this universe");
  auto src = std::make_shared<const TriangulatedImmersion3>(g.as<TriangulatedImmersion3>());
  if (f.holds<TriangulatedImmersion3>()) {
    MeshCurves curves{src, {}};
    for (const auto& s : intersect_surfaces(*src, f.as<TriangulatedImmersion3>())) curves.pieces.push_back(s.preimage(0));
    return {std::move(curves), {}, ""};
  }
  if (f.holds<CurveSet3>())
    return {MeshPoints{src, detail::segments_on_surface(detail::all_segments(f.as<CurveSet3>()), *src)}, {}, ""};
  if (f.holds<PointSet3>()) return empty_class("generically-empty-guaranteed");
  throw Violation("unsupported", "pullback of this universe");
}

// ---------------------------------------------------------------------------
// psi_r and mu_r

/// The r-fold self-intersection class. r = 0 gives the identity marker and
/// r = 1 the class itself. Past the generic range the result is empty with
/// a note rather than an error.
inline RepresentedClass psi_r(const RepresentedClass& f, int r) {
  if (r < 0) throw std::invalid_argument("psi_r: negative r");
  if (r == 0) return {IdentityMarker{}, {}, ""};
  if (r == 1) return f;
  if (f.holds<ImmersedMulticurve>() && r == 2) {
    const auto& c = f.as<ImmersedMulticurve>();
    auto dp = double_points(c);
    RepresentedClass out{PointSet2{dp.points}, {}, ""};
    for (std::size_t k = 0; k < dp.points.size(); ++k) {
      const auto& [a, b] = dp.ordered_preimages[2 * k];
      out.structure.push_back(detail::labels(c.ids()[a.component], c.ids()[b.component]));
    }
    return out;
  }
  if (f.holds<TriangulatedImmersion3>() && (r == 2 || r == 3)) {
    const auto& s = f.as<TriangulatedImmersion3>();
    auto an = certified_analysis(s);
    if (r == 2) {
      RepresentedClass out{CurveSet3{}, {}, ""};
      auto& set = std::get<CurveSet3>(out.payload);
      for (const auto& circle : double_curves(s, an).circles) set.circles.push_back(circle.segments);
      return out;
    }
    auto tp = triple_points(s, an);
    RepresentedClass out{PointSet3{tp.points}, {}, ""};
    for (std::size_t k = 0; k < tp.points.size(); ++k) {
      std::vector<std::string> l;
      for (int j = 0; j < 3; ++j) l.push_back(detail::sheet_label(s, tp.mu3_points[3 * k + j].first.tri));
      std::sort(l.begin(), l.end());
      out.structure.push_back(std::move(l));
    }
    return out;
  }
  if (f.holds<MeshCurves>() && r == 2) {
    const auto& m = f.as<MeshCurves>();
    return {MeshPoints{m.source, detail::mesh_double_points(*m.source, m.pieces)}, {}, ""};
  }
  if (f.holds<EmptyClass>()) return empty_class();
  return empty_class("generically-empty-guaranteed");
}

/// The r-fold points with one distinguished preimage, immersed in the source
/// of f by that preimage.
inline RepresentedClass mu_r(const RepresentedClass& f, int r) {
  if (r < 1) throw std::invalid_argument("mu_r: r must be at least 1");
  if (r == 1) return {IdentityMarker{}, {}, "source-identity"};
  if (f.holds<ImmersedMulticurve>() && r == 2) {
    CirclePoints pts;
    for (const auto& [a, b] : double_points(f.as<ImmersedMulticurve>()).ordered_preimages) pts.points.push_back(a);
    std::sort(pts.points.begin(), pts.points.end());
    return {std::move(pts), {}, ""};
  }
  if (f.holds<TriangulatedImmersion3>() && (r == 2 || r == 3)) {
    auto src = std::make_shared<const TriangulatedImmersion3>(f.as<TriangulatedImmersion3>());
    auto an = certified_analysis(*src);
    if (r == 2) {
      MeshCurves curves{src, {}};
      for (const auto& p : double_curves(*src, an).preimages)
        curves.pieces.insert(curves.pieces.end(), p.pieces.begin(), p.pieces.end());
      return {std::move(curves), {}, ""};
    }
    MeshPoints pts{src, {}};
    for (const auto& [p, rest] : triple_points(*src, an).mu3_points) pts.points.push_back(p);
    std::sort(pts.points.begin(), pts.points.end());
    return {std::move(pts), {}, ""};
  }
  if (f.holds<EmptyClass>()) return empty_class();
  return empty_class("generically-empty-guaranteed");
}

// ---------------------------------------------------------------------------
// Euler class

/// Named bits: the value of a degree-one class on each listed cycle.
struct EvaluationFunctional {
  std::vector<std::pair<std::string, int>> bits;

  int at(const std::string& name) const {
    for (const auto& [n, b] : bits)
      if (n == name) return b;
    throw Violation("unknown-cycle", name);
  }
};

/// On curve components: the two-sidedness bit. On surface components: 1
/// iff the component is non-orientable (the normal line in T^3 twists
/// exactly where the source does).
inline EvaluationFunctional euler_class(const RepresentedClass& f) {
  EvaluationFunctional e;
  if (f.holds<ImmersedMulticurve>()) {
    const auto& c = f.as<ImmersedMulticurve>();
    for (std::size_t k = 0; k < c.size(); ++k) e.bits.emplace_back(c.ids()[k], two_sidedness(c, static_cast<int>(k)));
  } else if (f.holds<TriangulatedImmersion3>()) {
    const auto& s = f.as<TriangulatedImmersion3>();
    for (int k = 0; k < s.component_count(); ++k) e.bits.emplace_back(s.ids()[k], s.orientable(k) ? 0 : 1);
  } else if (!f.empty()) {
    throw Violation("unsupported", "euler class of this universe");
  }
  return e;
}

/// Normal transport along user cycles on a surface's source.
inline EvaluationFunctional euler_class(const TriangulatedImmersion3& f, const std::vector<MeshCycle>& cycles) {
  EvaluationFunctional e;
  for (const auto& c : cycles) {
    int bit = 0;
    for (const auto& [t, edge] : resolve_cycle(f, c).crossed) bit ^= f.neighbor(t, edge).flip;
    e.bits.emplace_back(c.name, bit);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Property checks

struct PropertyCheck {
  std::string property;
  bool holds = false;
  std::string lhs, rhs;
};

/// g^* psi_2[f] = psi_2 g^*[f] as exact point sets on the source of g.
inline PropertyCheck check_naturality(const TriangulatedImmersion3& g, const TriangulatedImmersion3& f) {
  const auto G = make_class(g);
  const auto F = make_class(f);
  certify(G);
  certify(F);
  auto lhs = pullback_class(G, psi_r(F, 2));
  auto rhs = psi_r(pullback_class(G, F), 2);
  auto points = [](const RepresentedClass& c) {
    return c.holds<MeshPoints>() ? c.as<MeshPoints>().points : std::vector<MeshPoint>{};
  };
  const auto l = points(lhs), r = points(rhs);
  return {"naturality", l == r, detail::join(l), detail::join(r)};
}

/// psi_r(f + g) splits by how many of the sheets come from g; each part must
/// equal the matching product psi_{r-i} f . psi_i g.
inline PropertyCheck check_cartan(const ImmersedMulticurve& f, const ImmersedMulticurve& g, int r) {
  if (r != 2) throw std::invalid_argument("check_cartan: curves support r = 2");
  const auto h = union_curves(f, g);
  require_certified(h);
  const int nf = static_cast<int>(f.size());
  auto dh = double_points(h);
  std::array<std::vector<AmbientPoint>, 3> parts;
  for (std::size_t k = 0; k < dh.points.size(); ++k) {
    const auto& [a, b] = dh.ordered_preimages[2 * k];
    parts[(a.component >= nf) + (b.component >= nf)].push_back(dh.points[k]);
  }
  std::array<std::vector<AmbientPoint>, 3> expect;
  expect[0] = double_points(f).points;
  for (const auto& c : crossings_between(f, g)) expect[1].push_back(c.at);
  expect[2] = double_points(g).points;
  PropertyCheck out{"cartan-r2", true, "", ""};
  for (int i = 0; i < 3; ++i) {
    std::sort(parts[i].begin(), parts[i].end());
    std::sort(expect[i].begin(), expect[i].end());
    out.holds = out.holds && parts[i] == expect[i];
    out.lhs += (i ? " | " : "") + detail::join(parts[i]);
    out.rhs += (i ? " | " : "") + detail::join(expect[i]);
  }
  return out;
}

inline PropertyCheck check_cartan(const TriangulatedImmersion3& f, const TriangulatedImmersion3& g, int r) {
  if (r != 2 && r != 3) throw std::invalid_argument("check_cartan: surfaces support r = 2, 3");
  const auto h = union_immersions(f, g);
  const auto an = certified_analysis(h);
  const int nf = f.size();
  PropertyCheck out{"cartan-r" + std::to_string(r), true, "", ""};
  if (r == 2) {
    using Key = std::pair<Point3, Point3>;
    std::array<std::vector<Key>, 3> parts, expect;
    for (const auto& s : an.segments)
      parts[(s.sheets[0].tri >= nf) + (s.sheets[1].tri >= nf)].push_back(detail::segment_key(s.seg));
    for (const auto& s : certified_analysis(f).segments) expect[0].push_back(detail::segment_key(s.seg));
    for (const auto& s : intersect_surfaces(f, g)) expect[1].push_back(detail::segment_key(s.seg));
    for (const auto& s : certified_analysis(g).segments) expect[2].push_back(detail::segment_key(s.seg));
    for (int i = 0; i < 3; ++i) {
      std::sort(parts[i].begin(), parts[i].end());
      std::sort(expect[i].begin(), expect[i].end());
      out.holds = out.holds && parts[i] == expect[i];
      out.lhs += (i ? " | " : "") + std::to_string(parts[i].size());
      out.rhs += (i ? " | " : "") + std::to_string(expect[i].size());
    }
    return out;
  }
  std::array<std::vector<Point3>, 4> parts, expect;
  const auto tp = triple_points(h, an);
  for (std::size_t k = 0; k < tp.points.size(); ++k) {
    int from_g = 0;
    for (int j = 0; j < 3; ++j) from_g += tp.mu3_points[3 * k + j].first.tri >= nf;
    parts[from_g].push_back(tp.points[k]);
  }
  const auto F = make_class(f), G = make_class(g);
  expect[0] = psi_r(F, 3).as<PointSet3>().points;
  auto mixed = [](const RepresentedClass& c) {
    return c.holds<PointSet3>() ? c.as<PointSet3>().points : std::vector<Point3>{};
  };
  expect[1] = mixed(internal_product(psi_r(F, 2), G));
  expect[2] = mixed(internal_product(F, psi_r(G, 2)));
  expect[3] = psi_r(G, 3).as<PointSet3>().points;
  for (int i = 0; i < 4; ++i) {
    std::sort(parts[i].begin(), parts[i].end());
    std::sort(expect[i].begin(), expect[i].end());
    out.holds = out.holds && parts[i] == expect[i];
    out.lhs += (i ? " | " : "") + detail::join(parts[i]);
    out.rhs += (i ? " | " : "") + detail::join(expect[i]);
  }
  return out;
}

/// psi_2 of the preimage curves mu_2(f) on M equals mu_3(f), point for point.
inline PropertyCheck check_mu_tower(const TriangulatedImmersion3& f, int r = 2) {
  if (r != 2) throw std::invalid_argument("check_mu_tower: r = 2 only");
  const auto F = make_class(f);
  auto lhs = psi_r(mu_r(F, 2), 2);
  auto rhs = mu_r(F, 3);
  auto points = [](const RepresentedClass& c) {
    return c.holds<MeshPoints>() ? c.as<MeshPoints>().points : std::vector<MeshPoint>{};
  };
  const auto l = points(lhs), m = points(rhs);
  return {"mu-tower", l == m, detail::join(l), detail::join(m)};
}

}  // namespace multipoint
