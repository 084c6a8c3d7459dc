#pragma once

// Closed triangulated surfaces immersed in the flat 3-torus R^3/Z^3: source
// mesh recovery, general position, double curves, triple points, and the
// crossing counts that evaluate the r = 1 and r = 2 identities.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multipoint/exactgeom.hpp"

namespace multipoint {

/// Across edge `edge` of a triangle (edge i runs v[i] -> v[i+1]): the
/// neighbouring triangle, its matching edge, the integer translation that
/// puts the neighbour's vertices onto the shared edge, and whether both
/// triangles run the edge the same way (an orientation flip).
struct MeshNeighbor {
  int tri = -1;
  int edge = 0;
  Point3 offset;
  int flip = 0;
};

/// A point of the source surface: triangle index plus a point of that
/// triangle in its own (lifted) coordinates.
struct MeshPoint {
  int tri = 0;
  Point3 local;
  friend bool operator==(const MeshPoint&, const MeshPoint&) = default;
  friend auto operator<=>(const MeshPoint&, const MeshPoint&) = default;
};

inline std::string to_string(const MeshPoint& m) { return "t" + std::to_string(m.tri) + " " + to_string(m.local); }

/// A straight piece of a curve on the source surface, inside one triangle.
struct MeshSegment {
  int tri = 0;
  Segment3 local;
  friend bool operator==(const MeshSegment&, const MeshSegment&) = default;
};

class TriangulatedImmersion3 {
 public:
  TriangulatedImmersion3() = default;

  /// Each group is matched into a closed mesh on its own; triangles from
  /// different groups are never glued, even when edges coincide.
  explicit TriangulatedImmersion3(std::vector<std::vector<Triangle3>> groups, std::string name = "f")
      : name_(std::move(name)), groups_(std::move(groups)) {
    for (std::size_t g = 0; g < groups_.size(); ++g)
      for (const auto& t : groups_[g]) {
        if (t.degenerate())
          throw Violation("degenerate-triangle", "t" + std::to_string(triangles_.size()));
        triangles_.push_back(t);
        group_.push_back(static_cast<int>(g));
      }
    build();
  }

  static TriangulatedImmersion3 single(std::vector<Triangle3> tris, std::string name = "f") {
    return TriangulatedImmersion3({std::move(tris)}, std::move(name));
  }

  const std::string& name() const { return name_; }
  const std::vector<Triangle3>& triangles() const { return triangles_; }
  const Triangle3& triangle(int t) const { return triangles_.at(t); }
  int size() const { return static_cast<int>(triangles_.size()); }
  bool empty() const { return triangles_.empty(); }
  const std::vector<std::vector<Triangle3>>& groups() const { return groups_; }

  const MeshNeighbor& neighbor(int t, int edge) const { return neighbors_.at(t)[edge]; }
  int source_vertex(int t, int corner) const { return corner_class_.at(3 * t + corner); }
  int vertex_count() const { return vertex_count_; }

  int component_of(int t) const { return component_.at(t); }
  int component_count() const { return static_cast<int>(component_ids_.size()); }
  const std::vector<std::string>& ids() const { return component_ids_; }
  bool orientable(int component) const { return orientable_.at(component); }
  int euler_characteristic(int component) const {
    int faces = 0;
    std::set<int> verts;
    for (int t = 0; t < size(); ++t)
      if (component_[t] == component) {
        ++faces;
        for (int c = 0; c < 3; ++c) verts.insert(source_vertex(t, c));
      }
    // every edge is shared by two faces
    return static_cast<int>(verts.size()) - 3 * faces / 2 + faces;
  }

  int component_index(const std::string& id) const {
    auto it = std::find(component_ids_.begin(), component_ids_.end(), id);
    if (it == component_ids_.end()) throw Violation("unknown-component", id);
    return static_cast<int>(it - component_ids_.begin());
  }

  /// Position of a source point in the 3-torus, wrapped into [0,1)^3.
  static Point3 image(const MeshPoint& m) { return wrap(m.local); }

 private:
  using EdgeKey = std::pair<Point3, Point3>;

  void build() {
    const int n = size();
    neighbors_.assign(n, {});
    std::map<std::pair<int, EdgeKey>, std::vector<std::pair<int, int>>> edges;  // -> (t, edge)
    std::map<std::pair<int, EdgeKey>, std::vector<bool>> forward;
    for (int t = 0; t < n; ++t)
      for (int e = 0; e < 3; ++e) {
        const Point3& a = triangles_[t].v[e];
        const Point3& b = triangles_[t].v[(e + 1) % 3];
        EdgeKey k1{wrap(a), b - a}, k2{wrap(b), a - b};
        const bool fwd = k1 < k2;
        auto key = std::pair{group_[t], fwd ? k1 : k2};
        edges[key].push_back({t, e});
        forward[key].push_back(fwd);
      }
    for (const auto& [key, list] : edges) {
      const auto& fw = forward[key];
      const std::string where = "t" + std::to_string(list[0].first) + " edge " + std::to_string(list[0].second);
      if (list.size() == 1) throw Violation("open-edge", where);
      if (list.size() > 2) throw Violation("nonmanifold-edge", where);
      for (int side = 0; side < 2; ++side) {
        auto [t, e] = list[side];
        auto [u, f] = list[1 - side];
        const bool same = fw[side] == fw[1 - side];
        const Point3& a = triangles_[t].v[e];
        const Point3& match = same ? triangles_[u].v[f] : triangles_[u].v[(f + 1) % 3];
        neighbors_[t][e] = {u, f, a - match, same ? 1 : 0};
      }
    }
    build_vertices();
    build_components();
  }

  // Corners are glued across edges; then every vertex star is walked once
  // to check it is a single disc that closes up without a net translation.
  void build_vertices() {
    const int n = size();
    std::vector<int> parent(3 * n);
    for (int i = 0; i < 3 * n; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int t = 0; t < n; ++t)
      for (int e = 0; e < 3; ++e) {
        const auto& nb = neighbors_[t][e];
        for (int end = 0; end < 2; ++end) {
          const int c = (e + end) % 3;
          const int c2 = matching_corner(t, c, nb);
          int a = find(3 * t + c), b = find(3 * nb.tri + c2);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    std::map<int, int> ids;
    std::map<int, int> class_size;
    corner_class_.assign(3 * n, 0);
    for (int i = 0; i < 3 * n; ++i) {
      int r = find(i);
      auto it = ids.emplace(r, static_cast<int>(ids.size())).first;
      corner_class_[i] = it->second;
      ++class_size[it->second];
    }
    vertex_count_ = static_cast<int>(ids.size());

    std::vector<bool> seen(3 * n, false);
    for (int start = 0; start < 3 * n; ++start) {
      if (seen[start]) continue;
      int t = start / 3, c = start % 3;
      int edge = c;  // leave through the edge starting at this corner
      Point3 shift{0, 0, 0};
      int count = 0;
      do {
        seen[3 * t + c] = true;
        ++count;
        const auto& nb = neighbors_[t][edge];
        const int c2 = matching_corner(t, c, nb);
        shift = shift - nb.offset;
        t = nb.tri;
        c = c2;
        edge = nb.edge == c ? (c + 2) % 3 : c;
        if (count > 3 * n) throw Violation("vertex-link-not-cycle", "runaway star walk at t" + std::to_string(t));
      } while (3 * t + c != start);
      if (count != class_size[corner_class_[start]])
        throw Violation("vertex-link-not-cycle", "pinched vertex at t" + std::to_string(start / 3));
      if (!is_zero(shift)) throw Violation("inconsistent-wrap", "star of t" + std::to_string(start / 3) +
                                                                    " closes up only after a translation");
    }
  }

  int matching_corner(int t, int c, const MeshNeighbor& nb) const {
    const Point3& p = triangles_[t].v[c];
    for (int k : {nb.edge, (nb.edge + 1) % 3})
      if (triangles_[nb.tri].v[k] + nb.offset == p) return k;
    throw Violation("inconsistent-wrap", "edge match lost at t" + std::to_string(t));
  }

  void build_components() {
    const int n = size();
    component_.assign(n, -1);
    std::vector<int> sign(n, 0);
    int next = 0;
    for (int s = 0; s < n; ++s) {
      if (component_[s] >= 0) continue;
      bool ok = true;
      std::vector<int> stack{s};
      component_[s] = next;
      sign[s] = 1;
      while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int e = 0; e < 3; ++e) {
          const auto& nb = neighbors_[t][e];
          const int want = nb.flip ? -sign[t] : sign[t];
          if (component_[nb.tri] < 0) {
            component_[nb.tri] = next;
            sign[nb.tri] = want;
            stack.push_back(nb.tri);
          } else if (sign[nb.tri] != want) {
            ok = false;
          }
        }
      }
      orientable_.push_back(ok);
      ++next;
    }
    for (int k = 0; k < next; ++k)
      component_ids_.push_back(next == 1 ? name_ : name_ + "." + std::to_string(k));
  }

  std::string name_;
  std::vector<std::vector<Triangle3>> groups_;
  std::vector<Triangle3> triangles_;
  std::vector<int> group_;
  std::vector<std::array<MeshNeighbor, 3>> neighbors_;
  std::vector<int> corner_class_;
  int vertex_count_ = 0;
  std::vector<int> component_;
  std::vector<bool> orientable_;
  std::vector<std::string> component_ids_;
};

inline TriangulatedImmersion3 union_immersions(const TriangulatedImmersion3& f, const TriangulatedImmersion3& g,
                                               std::string name = "") {
  auto groups = f.groups();
  groups.insert(groups.end(), g.groups().begin(), g.groups().end());
  if (name.empty()) name = f.name() + "+" + g.name();
  return TriangulatedImmersion3(std::move(groups), std::move(name));
}

// ---------------------------------------------------------------------------
// Pairwise and triple intersections

/// One lift of a triangle: its vertices translated by an integer vector.
struct Sheet {
  int tri = 0;
  Point3 offset;
  friend bool operator==(const Sheet&, const Sheet&) = default;
};

inline Triangle3 lift(const TriangulatedImmersion3& f, const Sheet& s) {
  Triangle3 t = f.triangle(s.tri);
  for (auto& v : t.v) v = v + s.offset;
  return t;
}

/// Transverse intersection segment of two sheets, in the coordinates of the
/// lifts. incidence[e].triangle says which sheet's edge carries endpoint e.
struct DoubleSegment {
  Segment3 seg;
  std::array<Sheet, 2> sheets;
  std::array<EdgeIncidence, 2> incidence;

  MeshSegment preimage(int k) const { return {sheets[k].tri, {seg.a - sheets[k].offset, seg.b - sheets[k].offset}}; }
};

struct TripleHit {
  Point3 point;  // lift coordinates of the segment
  int segment = 0;
  Sheet third;
};

struct Analysis3 {
  std::vector<DoubleSegment> segments;
  std::vector<TripleHit> hits;
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
};

namespace detail {

inline std::string sheet_name(const Sheet& s) {
  return "t" + std::to_string(s.tri) + (is_zero(s.offset) ? "" : "+" + to_string(s.offset));
}

inline std::array<Point3, 3> seg_box(const Segment3& s) { return {s.a, s.b, s.b}; }

// Which way the line through vertex v of `t` with direction `dir` (lying in
// t's plane) enters t: +1 along dir, -1 against it, 0 neither.
inline int cone_side(const Triangle3& t, int corner, const Point3& dir) {
  const Point3& v = t.v[corner];
  const Point3 e1 = t.v[(corner + 1) % 3] - v;
  const Point3 e2 = t.v[(corner + 2) % 3] - v;
  const Point3 n = cross(e1, e2);
  const Rational den = dot(cross(e1, e2), n);
  const int a = (dot(cross(dir, e2), n) / den).sign();
  const int b = (dot(cross(e1, dir), n) / den).sign();
  if (a >= 0 && b >= 0) return 1;
  if (a <= 0 && b <= 0) return -1;
  return 0;
}

inline int corner_at(const Triangle3& t, const Point3& p) {
  for (int i = 0; i < 3; ++i)
    if (t.v[i] == p) return i;
  return -1;
}

inline void check_pair(const TriangulatedImmersion3& f, const Sheet& A, const Sheet& B, Analysis3& out) {
  const Triangle3 a = lift(f, A), b = lift(f, B);
  std::vector<Point3> shared;
  for (const auto& p : a.v)
    if (corner_at(b, p) >= 0) shared.push_back(p);
  const std::string where = sheet_name(A) + "," + sheet_name(B);
  const Point3 na = a.normal();
  const bool coplanar = dot(na, b.v[0] - a.v[0]).is_zero() && dot(na, b.v[1] - a.v[0]).is_zero() &&
                        dot(na, b.v[2] - a.v[0]).is_zero();

  if (shared.size() == 3) {
    out.issues.push_back({"coplanar-overlap", where});
    return;
  }
  if (shared.size() == 2) {
    int edge = -1;
    for (int e = 0; e < 3; ++e) {
      const Point3 &p = a.v[e], &q = a.v[(e + 1) % 3];
      if ((p == shared[0] && q == shared[1]) || (p == shared[1] && q == shared[0])) edge = e;
    }
    const auto& nb = f.neighbor(A.tri, edge);
    if (nb.tri != B.tri || !(nb.offset == B.offset - A.offset)) {
      out.issues.push_back({"edge-contact", where});
      return;
    }
    if (coplanar) {
      const Point3 ca = a.v[(edge + 2) % 3];
      Point3 cb;
      for (const auto& p : b.v)
        if (!(p == shared[0]) && !(p == shared[1])) cb = p;
      const Point3 d = shared[1] - shared[0];
      if (dot(cross(d, ca - shared[0]), na).sign() == dot(cross(d, cb - shared[0]), na).sign())
        out.issues.push_back({"coplanar-overlap", where + " (folded)"});
    }
    return;
  }
  if (shared.size() == 1) {
    const int ia = corner_at(a, shared[0]), ib = corner_at(b, shared[0]);
    if (f.source_vertex(A.tri, ia) != f.source_vertex(B.tri, ib)) {
      out.issues.push_back({"vertex-contact", where});
      return;
    }
    if (coplanar) {
      if (coplanar_contact(a, b, shared)) out.issues.push_back({"coplanar-overlap", where});
      return;
    }
    const Point3 dir = cross(na, b.normal());
    const int sa = cone_side(a, ia, dir), sb = cone_side(b, ib, dir);
    if (sa != 0 && sa == sb) out.issues.push_back({"vertex-on-double-curve", where});
    return;
  }
  auto hit = tri_tri_intersect(a, b);
  if (hit.kind == TriangleIntersection::Kind::none) return;
  if (hit.kind == TriangleIntersection::Kind::degenerate) {
    out.issues.push_back({hit.reason, where});
    return;
  }
  out.segments.push_back({hit.segment, {A, B}, hit.incidence});
}

inline bool shares_vertex(const Triangle3& a, const Triangle3& b) {
  for (const auto& p : a.v)
    if (corner_at(b, p) >= 0) return true;
  return false;
}

inline void find_triples(const TriangulatedImmersion3& f, Analysis3& out) {
  for (std::size_t s = 0; s < out.segments.size(); ++s) {
    const auto& seg = out.segments[s];
    const Triangle3 a = lift(f, seg.sheets[0]), b = lift(f, seg.sheets[1]);
    for (int k = 0; k < f.size(); ++k)
      for (const auto& w : overlapping_translations(seg_box(seg.seg), f.triangle(k).v)) {
        const Sheet third{k, w};
        const Triangle3 c = lift(f, third);
        if (shares_vertex(a, c) || shares_vertex(b, c)) continue;
        auto hit = seg_tri_intersect(seg.seg, c);
        if (hit.kind == SegmentTriangleIntersection::Kind::none) continue;
        if (hit.kind == SegmentTriangleIntersection::Kind::degenerate) {
          out.issues.push_back({"triple-point-on-edge", sheet_name(seg.sheets[0]) + "," + sheet_name(seg.sheets[1]) +
                                                            "," + sheet_name(third)});
          continue;
        }
        out.hits.push_back({hit.point, static_cast<int>(s), third});
      }
  }
}

}  // namespace detail

/// Every pair of distinct sheets that can meet is tested once: triangle i
/// against lifts of triangle j >= i (for i == j, only translations that are
/// lexicographically positive).
inline Analysis3 analyze(const TriangulatedImmersion3& f) {
  Analysis3 out;
  const int n = f.size();
  const Point3 zero{0, 0, 0};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (const auto& z : overlapping_translations(f.triangle(i).v, f.triangle(j).v)) {
        if (i == j && !(z > zero)) continue;
        detail::check_pair(f, {i, zero}, {j, z}, out);
      }
  if (out.issues.empty()) detail::find_triples(f, out);
  if (out.issues.empty()) {
    std::map<Point3, int> count;
    for (const auto& h : out.hits) ++count[wrap(h.point)];
    for (const auto& [p, k] : count)
      if (k != 3) out.issues.push_back({k > 3 ? "quadruple-point" : "triple-point-mismatch", to_string(p)});
  }
  // A duplicated sheet also produces vertex and edge contacts around it;
  // report the overlap first.
  std::stable_sort(out.issues.begin(), out.issues.end(), [](const Issue& a, const Issue& b) {
    return (a.code == "coplanar-overlap") > (b.code == "coplanar-overlap");
  });
  return out;
}

struct GeneralPositionCert3 {
  bool no_coplanar_overlap = true;
  bool transverse_pairs = true;
  bool isolated_triples = true;
  bool no_quadruple_points = true;
  std::size_t double_segments = 0;
  std::size_t triple_points = 0;
  std::vector<Issue> violations;
  bool ok() const { return violations.empty(); }
};

inline GeneralPositionCert3 validate_general_position_3d(const TriangulatedImmersion3& f) {
  auto an = analyze(f);
  GeneralPositionCert3 cert;
  cert.double_segments = an.segments.size();
  cert.triple_points = an.hits.size() / 3;
  for (const auto& i : an.issues) {
    if (i.code == "coplanar-overlap") cert.no_coplanar_overlap = false;
    else if (i.code == "triple-point-on-edge" || i.code == "triple-point-mismatch") cert.isolated_triples = false;
    else if (i.code == "quadruple-point") cert.no_quadruple_points = false;
    else cert.transverse_pairs = false;
  }
  cert.violations = std::move(an.issues);
  return cert;
}

inline Analysis3 certified_analysis(const TriangulatedImmersion3& f) {
  auto an = analyze(f);
  if (!an.ok()) throw Violation(an.issues.front().code, an.issues.front().detail);
  return an;
}

// ---------------------------------------------------------------------------
// Double curves

struct PreimageCircle {
  std::vector<MeshSegment> pieces;
  int w1 = 0;
  bool double_cover = false;  // one source circle covering its double curve twice
};

struct DoubleCircle {
  std::vector<Segment3> segments;  // consecutive lifts, endpoints agree mod Z^3
  std::vector<int> preimages;      // indices into DoubleCurveArrangement::preimages
};

struct DoubleCurveArrangement {
  std::vector<DoubleCircle> circles;
  std::vector<PreimageCircle> preimages;

  int w1_total() const {
    int bit = 0;
    for (const auto& p : preimages) bit ^= p.w1;
    return bit;
  }
};

namespace detail {

inline MeshPoint sheet_point(const Sheet& s, const Point3& p) { return {s.tri, p - s.offset}; }

inline DoubleCurveArrangement trace_double_curves(const TriangulatedImmersion3& f, const Analysis3& an) {
  const auto& segs = an.segments;
  std::map<Point3, std::vector<std::pair<int, int>>> ends;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    ends[wrap(segs[s].seg.a)].push_back({s, 0});
    ends[wrap(segs[s].seg.b)].push_back({s, 1});
  }
  for (const auto& [p, list] : ends)
    if (list.size() != 2) throw Violation("trace-not-closed", "double curve end " + to_string(p));

  auto end_point = [&](int s, int e) { return e == 0 ? segs[s].seg.a : segs[s].seg.b; };

  DoubleCurveArrangement out;
  std::vector<bool> used(segs.size(), false);
  for (int start = 0; start < static_cast<int>(segs.size()); ++start) {
    if (used[start]) continue;
    DoubleCircle circle;
    std::array<PreimageCircle, 2> slots;
    std::array<int, 2> slot_sheet{0, 1};  // sheet index of the current segment held by each slot
    int s = start, entry = 0;
    while (true) {
      used[s] = true;
      const int exit = 1 - entry;
      Segment3 oriented = entry == 0 ? segs[s].seg : Segment3{segs[s].seg.b, segs[s].seg.a};
      circle.segments.push_back(oriented);
      for (int k = 0; k < 2; ++k) {
        MeshSegment piece = segs[s].preimage(slot_sheet[k]);
        if (entry == 1) std::swap(piece.local.a, piece.local.b);
        slots[k].pieces.push_back(piece);
      }
      // move on through the exit endpoint
      const Point3 P = end_point(s, exit);
      const auto& pair = ends[wrap(P)];
      auto [s2, e2] = pair[0].first == s && pair[0].second == exit ? pair[1] : pair[0];
      const Point3 P2 = end_point(s2, e2);
      const int edge_sheet = segs[s].incidence[exit].triangle;
      const int edge = segs[s].incidence[exit].edge;
      std::array<int, 2> next{-1, -1};
      for (int k = 0; k < 2; ++k) {
        const int sh = slot_sheet[k];
        if (sh != edge_sheet) {
          const MeshPoint here = sheet_point(segs[s].sheets[sh], P);
          for (int m = 0; m < 2; ++m)
            if (sheet_point(segs[s2].sheets[m], P2) == here) next[k] = m;
        }
      }
      for (int k = 0; k < 2; ++k)
        if (slot_sheet[k] == edge_sheet) {
          const int other = next[1 - k];
          if (other < 0) throw Violation("trace-not-closed", "lost the interior sheet at " + to_string(P));
          next[k] = 1 - other;
          const auto& nb = f.neighbor(segs[s].sheets[edge_sheet].tri, edge);
          if (segs[s2].sheets[next[k]].tri != nb.tri)
            throw Violation("trace-not-closed", "sheet does not continue across its edge at " + to_string(P));
          slots[k].w1 ^= nb.flip;
        }
      slot_sheet = next;
      if (s2 == start) {
        if (e2 != 0) throw Violation("trace-not-closed", "circle re-enters its first segment backwards");
        break;
      }
      s = s2;
      entry = e2;
    }
    if (slot_sheet[0] == 0) {
      for (auto& sl : slots) {
        circle.preimages.push_back(static_cast<int>(out.preimages.size()));
        out.preimages.push_back(std::move(sl));
      }
    } else {
      PreimageCircle both = std::move(slots[0]);
      both.pieces.insert(both.pieces.end(), slots[1].pieces.begin(), slots[1].pieces.end());
      both.w1 ^= slots[1].w1;
      both.double_cover = true;
      circle.preimages.push_back(static_cast<int>(out.preimages.size()));
      out.preimages.push_back(std::move(both));
    }
    out.circles.push_back(std::move(circle));
  }
  return out;
}

}  // namespace detail

inline DoubleCurveArrangement double_curves(const TriangulatedImmersion3& f, const Analysis3& an) {
  return detail::trace_double_curves(f, an);
}

inline DoubleCurveArrangement double_curves(const TriangulatedImmersion3& f) {
  return double_curves(f, certified_analysis(f));
}

// ---------------------------------------------------------------------------
// Triple points

struct TriplePointSet {
  std::vector<Point3> points;  // wrapped, sorted
  /// Six per point: every ordering of the three sheets through it.
  std::vector<std::array<MeshPoint, 3>> ordered_triples;
  /// Three per point: a sheet point and the unordered pair of the other two.
  std::vector<std::pair<MeshPoint, std::array<MeshPoint, 2>>> mu3_points;
};

inline TriplePointSet triple_points(const TriangulatedImmersion3& /*f*/, const Analysis3& an) {
  std::map<Point3, std::set<MeshPoint>> sheets;
  for (const auto& h : an.hits) {
    auto& set = sheets[wrap(h.point)];
    const auto& seg = an.segments[h.segment];
    set.insert(detail::sheet_point(seg.sheets[0], h.point));
    set.insert(detail::sheet_point(seg.sheets[1], h.point));
    set.insert(detail::sheet_point(h.third, h.point));
  }
  TriplePointSet out;
  for (const auto& [p, set] : sheets) {
    if (set.size() != 3) throw Violation("quadruple-point", to_string(p));
    out.points.push_back(p);
    std::array<MeshPoint, 3> s{};
    std::copy(set.begin(), set.end(), s.begin());
    std::array<int, 3> perm{0, 1, 2};
    do out.ordered_triples.push_back({s[perm[0]], s[perm[1]], s[perm[2]]});
    while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < 3; ++k) out.mu3_points.push_back({s[k], {s[(k + 1) % 3], s[(k + 2) % 3]}});
  }
  return out;
}

inline TriplePointSet triple_points(const TriangulatedImmersion3& f) { return triple_points(f, certified_analysis(f)); }

// ---------------------------------------------------------------------------
// Homology coordinates and generic translates

inline constexpr int kTranslateBudget = 16;

namespace detail {

struct Collision {};

// Generic-looking exact vector (d, d^2, d^3) added to a fixed base.
inline Point3 generic_vector(int attempt, const Point3& base) {
  Rational d(1, 3);
  for (int i = 0; i < attempt; ++i) d /= 2;
  return base + Point3{d, d * d, d * d * d};
}

template <class F>
auto with_retries(const char* what, F&& body) {
  for (int attempt = 0; attempt < kTranslateBudget; ++attempt) {
    try {
      return body(attempt);
    } catch (const Collision&) {
    }
  }
  throw Violation("basepoint-collision", std::string(what) + ": retry budget exhausted");
}

// Lattice points (b + Z^2) in a triangle of the plane; throws Collision on
// any boundary contact.
inline int lattice_hits(const std::array<Point2, 3>& t, const Point2& b) {
  Rational lox = min(min(t[0].x, t[1].x), t[2].x), hix = max(max(t[0].x, t[1].x), t[2].x);
  Rational loy = min(min(t[0].y, t[1].y), t[2].y), hiy = max(max(t[0].y, t[1].y), t[2].y);
  const bool flat = cross(t[1] - t[0], t[2] - t[0]).is_zero();
  int hits = 0;
  for (long m = (lox - b.x).floor().to_long(); m <= (hix - b.x).floor().to_long() + 1; ++m)
    for (long k = (loy - b.y).floor().to_long(); k <= (hiy - b.y).floor().to_long() + 1; ++k) {
      Point2 p{b.x + Rational(m), b.y + Rational(k)};
      if (flat) {
        for (int i = 0; i < 3; ++i) {
          const Point2 &u = t[i], &v = t[(i + 1) % 3];
          if (cross(v - u, p - u).is_zero() && min(u.x, v.x) <= p.x && p.x <= max(u.x, v.x) &&
              min(u.y, v.y) <= p.y && p.y <= max(u.y, v.y))
            throw Collision{};
        }
        continue;
      }
      int in = point_in_triangle2(p, t);
      if (in == 0) throw Collision{};
      if (in > 0) ++hits;
    }
  return hits;
}

inline Point2 other_axes(const Point3& p, int axis) {
  switch (axis) {
    case 0: return {p.y, p.z};
    case 1: return {p.x, p.z};
    default: return {p.x, p.y};
  }
}

// Transverse crossings of segments with all lifts of the triangles of f
// translated by tau, mod 2. Collision on any non-transverse contact. A
// nonnegative `component` restricts f to that source component.
inline int crossings_with_translate(const std::vector<Segment3>& segs, const TriangulatedImmersion3& f,
                                    const Point3& tau, int component = -1) {
  int count = 0;
  for (const auto& s : segs)
    for (int k = 0; k < f.size(); ++k) {
      if (component >= 0 && f.component_of(k) != component) continue;
      Triangle3 moved = f.triangle(k);
      for (auto& v : moved.v) v = v + tau;
      for (const auto& w : overlapping_translations(seg_box(s), moved.v)) {
        Triangle3 c = moved;
        for (auto& v : c.v) v = v + w;
        auto hit = seg_tri_intersect(s, c);
        if (hit.kind == SegmentTriangleIntersection::Kind::degenerate) throw Collision{};
        if (hit.transverse()) ++count;
      }
    }
  return count % 2;
}

}  // namespace detail

using Bits3 = std::array<int, 3>;

/// Z/2 class of f(M) in H_2(T^3): bit i counts crossings with the closed
/// coordinate line in direction i through a generic basepoint.
inline Bits3 ambient_class_H2(const TriangulatedImmersion3& f) {
  return detail::with_retries("ambient_class_H2", [&](int attempt) {
    const Point3 b = detail::generic_vector(attempt, {Rational(1, 3), Rational(2, 7), Rational(3, 11)});
    Bits3 bits{};
    for (int axis = 0; axis < 3; ++axis) {
      int hits = 0;
      for (const auto& t : f.triangles()) {
        std::array<Point2, 3> p{detail::other_axes(t.v[0], axis), detail::other_axes(t.v[1], axis),
                                detail::other_axes(t.v[2], axis)};
        hits += detail::lattice_hits(p, detail::other_axes(b, axis));
      }
      bits[axis] = hits % 2;
    }
    return bits;
  });
}

/// Z/2 class of a closed curve in H_1(T^3), given as consecutive segment
/// lifts: bit i counts crossings with the coordinate torus x_i = const.
inline Bits3 curve_class_H1(const std::vector<Segment3>& curve) {
  return detail::with_retries("curve_class_H1", [&](int attempt) {
    const Point3 c = detail::generic_vector(attempt, {Rational(2, 5), Rational(3, 7), Rational(5, 13)});
    Bits3 bits{};
    for (int axis = 0; axis < 3; ++axis) {
      long count = 0;
      for (const auto& s : curve) {
        const Rational lo = min(s.a[axis], s.b[axis]), hi = max(s.a[axis], s.b[axis]);
        // integers n with lo <= c + n <= hi
        const long first = (lo - c[axis]).floor().to_long();
        for (long n = first; Rational(n) + c[axis] <= hi; ++n) {
          const Rational x = c[axis] + Rational(n);
          if (x == lo || x == hi) throw detail::Collision{};
          if (lo < x) ++count;
        }
      }
      bits[axis] = static_cast<int>(count % 2);
    }
    return bits;
  });
}

/// Both sides of the r = 2 identity evaluated on [M].
struct R2Evaluation {
  int lhs = 0;    // double curves crossing a generic translate of f(M)
  int mu = 0;     // triple points mod 2
  int euler = 0;  // normal w1 summed over the preimage circles
  std::size_t triple_count = 0;
  std::size_t circle_count = 0;
  Point3 translate;
  int rhs() const { return (mu + euler) % 2; }
};

inline int herbert_lhs_r2(const TriangulatedImmersion3& f, const DoubleCurveArrangement& dc, Point3* used = nullptr,
                          int component = -1) {
  std::vector<Segment3> segs;
  for (const auto& c : dc.circles) segs.insert(segs.end(), c.segments.begin(), c.segments.end());
  return detail::with_retries("herbert_lhs_r2", [&](int attempt) {
    const Point3 tau = detail::generic_vector(attempt, {0, 0, 0});
    int bit = detail::crossings_with_translate(segs, f, tau, component);
    if (used) *used = tau;
    return bit;
  });
}

/// The r = 2 identity on the fundamental class of one source component, or
/// of all of M when component is -1.
inline R2Evaluation herbert_r2_on(const TriangulatedImmersion3& f, const DoubleCurveArrangement& dc,
                                  const TriplePointSet& tp, int component = -1) {
  R2Evaluation e;
  e.triple_count = tp.points.size();
  e.circle_count = dc.circles.size();
  if (component < 0) {
    e.mu = static_cast<int>(tp.points.size() % 2);
    e.euler = dc.w1_total();
  } else {
    for (const auto& [p, rest] : tp.mu3_points) e.mu ^= f.component_of(p.tri) == component;
    for (const auto& pre : dc.preimages)
      if (f.component_of(pre.pieces.front().tri) == component) e.euler ^= pre.w1;
  }
  e.lhs = herbert_lhs_r2(f, dc, &e.translate, component);
  return e;
}

inline R2Evaluation herbert_r2(const TriangulatedImmersion3& f) {
  auto an = certified_analysis(f);
  return herbert_r2_on(f, double_curves(f, an), triple_points(f, an));
}

inline int herbert_lhs_r2(const TriangulatedImmersion3& f) { return herbert_r2(f).lhs; }
inline int herbert_rhs_r2(const TriangulatedImmersion3& f) { return herbert_r2(f).rhs(); }

// ---------------------------------------------------------------------------
// Cycles on the source surface

struct MeshCyclePoint {
  int tri = 0;
  Rational a, b;  // weights of v0 and v1; v2 gets 1 - a - b
  friend bool operator==(const MeshCyclePoint&, const MeshCyclePoint&) = default;
};

struct MeshCycle {
  std::string name;
  std::vector<MeshCyclePoint> points;
};

/// A cycle resolved into straight pieces inside triangles, with the edges it
/// crosses.
struct CyclePath {
  std::vector<MeshSegment> pieces;
  std::vector<std::pair<int, int>> crossed;  // (triangle, edge) left through
};

namespace detail {

inline Point3 barycentric(const Triangle3& t, const MeshCyclePoint& p) {
  const Rational c = Rational(1) - p.a - p.b;
  return p.a * t.v[0] + p.b * t.v[1] + c * t.v[2];
}

inline std::array<Rational, 3> weights(const MeshCyclePoint& p) { return {p.a, p.b, Rational(1) - p.a - p.b}; }

}  // namespace detail

/// Consecutive cycle points lie in one triangle (straight step) or in two
/// triangles sharing an edge (one crossing). When several shared edges
/// qualify, the one giving the shortest chord between the lifted points is
/// used; ties are rejected.
inline CyclePath resolve_cycle(const TriangulatedImmersion3& f, const MeshCycle& cycle) {
  if (cycle.points.size() < 2) throw Violation("too-few-vertices", "cycle " + cycle.name);
  for (const auto& p : cycle.points) {
    if (p.tri < 0 || p.tri >= f.size()) throw Violation("bad-triangle", "t" + std::to_string(p.tri));
    for (const auto& w : detail::weights(p))
      if (w.sign() <= 0) throw Violation("vertex-on-edge", "cycle point not interior to t" + std::to_string(p.tri));
  }
  CyclePath path;
  const std::size_t n = cycle.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = cycle.points[k];
    const auto& q = cycle.points[(k + 1) % n];
    const Triangle3& T = f.triangle(p.tri);
    const Point3 P = detail::barycentric(T, p);
    if (p.tri == q.tri) {
      const Point3 Q = detail::barycentric(T, q);
      if (P == Q) throw Violation("zero-length-segment", "cycle " + cycle.name);
      path.pieces.push_back({p.tri, {P, Q}});
      continue;
    }
    struct Candidate {
      Rational len;
      int edge;
      Point3 cross;
    };
    std::vector<Candidate> cands;
    for (int e = 0; e < 3; ++e) {
      const auto& nb = f.neighbor(p.tri, e);
      if (nb.tri != q.tri) continue;
      const Triangle3& U = f.triangle(q.tri);
      const Point3 Q = detail::barycentric(U, q) + nb.offset;
      // chart: shared edge on (0,0)-(1,0), T above, U below
      const auto wp = detail::weights(p);
      const Point2 pc{wp[(e + 1) % 3], wp[(e + 2) % 3]};
      const auto wq = detail::weights(q);
      Point2 qc{0, 0};
      for (int i = 0; i < 3; ++i) {
        const Point3 corner = U.v[i] + nb.offset;
        Point2 at;
        if (corner == T.v[e]) at = {0, 0};
        else if (corner == T.v[(e + 1) % 3]) at = {1, 0};
        else at = {1, -1};
        qc = qc + wq[i] * at;
      }
      const Rational lambda = pc.y / (pc.y - qc.y);
      const Rational x = pc.x + lambda * (qc.x - pc.x);
      cands.push_back({norm2(Q - P), e, T.v[e] + x * (T.v[(e + 1) % 3] - T.v[e])});
    }
    if (cands.empty())
      throw Violation("no-route", "t" + std::to_string(p.tri) + " and t" + std::to_string(q.tri) + " share no edge");
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.len < b.len; });
    if (cands.size() > 1 && cands[0].len == cands[1].len)
      throw Violation("ambiguous-step", "cycle " + cycle.name + " between t" + std::to_string(p.tri) + " and t" +
                                            std::to_string(q.tri));
    const auto& c = cands[0];
    const auto& nb = f.neighbor(p.tri, c.edge);
    path.pieces.push_back({p.tri, {P, c.cross}});
    path.pieces.push_back({q.tri, {c.cross - nb.offset, detail::barycentric(f.triangle(q.tri), q)}});
    path.crossed.push_back({p.tri, c.edge});
  }
  return path;
}

/// Both sides of the r = 1 identity on a cycle of M.
struct CycleEvaluation {
  int lhs = 0;    // f(cycle) against a generic translate of f(M)
  int mu = 0;     // crossings with the preimage double curves on M
  int euler = 0;  // normal w1 along the cycle
  int rhs() const { return (mu + euler) % 2; }
};

namespace detail {

// Transverse crossings between pieces on the same triangle, compared in
// that triangle's affine chart.
inline int mesh_crossings(const TriangulatedImmersion3& f, const std::vector<MeshSegment>& a,
                          const std::vector<MeshSegment>& b, const char* violation) {
  int count = 0;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.tri != y.tri) continue;
      const Triangle3& t = f.triangle(x.tri);
      Segment2 sx{triangle_chart(t, x.local.a), triangle_chart(t, x.local.b)};
      Segment2 sy{triangle_chart(t, y.local.a), triangle_chart(t, y.local.b)};
      auto hit = seg_intersect(sx, sy);
      if (hit.kind == SegmentIntersection::Kind::none) continue;
      if (!hit.interior()) throw Violation(violation, "t" + std::to_string(x.tri) + " " + to_string(hit.point));
      ++count;
    }
  return count;
}

}  // namespace detail

inline CycleEvaluation herbert_r1_on_cycle(const TriangulatedImmersion3& f, const MeshCycle& cycle,
                                           const DoubleCurveArrangement& dc) {
  auto path = resolve_cycle(f, cycle);
  CycleEvaluation e;
  std::vector<MeshSegment> preimage;
  for (const auto& p : dc.preimages) preimage.insert(preimage.end(), p.pieces.begin(), p.pieces.end());
  e.mu = detail::mesh_crossings(f, path.pieces, preimage, "cycle-touches-double-curve") % 2;
  for (const auto& [t, edge] : path.crossed) e.euler ^= f.neighbor(t, edge).flip;
  std::vector<Segment3> image;
  for (const auto& piece : path.pieces) image.push_back(piece.local);
  e.lhs = detail::with_retries("herbert_r1_on_cycle", [&](int attempt) {
    return detail::crossings_with_translate(image, f, detail::generic_vector(attempt, {0, 0, 0}));
  });
  return e;
}

inline CycleEvaluation herbert_r1_on_cycle(const TriangulatedImmersion3& f, const MeshCycle& cycle) {
  return herbert_r1_on_cycle(f, cycle, double_curves(f));
}

// ---------------------------------------------------------------------------
// Intersections between two different immersions

/// Transverse intersection of f with g: segments in lift coordinates with
/// the f-sheet first. Throws "non-transverse" on any degenerate contact.
inline std::vector<DoubleSegment> intersect_surfaces(const TriangulatedImmersion3& f, const TriangulatedImmersion3& g) {
  std::vector<DoubleSegment> out;
  const Point3 zero{0, 0, 0};
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      for (const auto& z : overlapping_translations(f.triangle(i).v, g.triangle(j).v)) {
        Triangle3 b = g.triangle(j);
        for (auto& v : b.v) v = v + z;
        auto hit = tri_tri_intersect(f.triangle(i), b);
        if (hit.kind == TriangleIntersection::Kind::none) continue;
        if (hit.kind == TriangleIntersection::Kind::degenerate)
          throw Violation("non-transverse", hit.reason + " between t" + std::to_string(i) + " and t" +
                                                std::to_string(j) + "+" + to_string(z));
        out.push_back({hit.segment, {Sheet{i, zero}, Sheet{j, z}}, hit.incidence});
      }
  return out;
}

/// Transverse points where segments (lift coordinates) cross the surface g,
/// wrapped and sorted. Throws "non-transverse" on any degenerate contact.
inline std::vector<Point3> segments_meet_surface(const std::vector<Segment3>& segs, const TriangulatedImmersion3& g) {
  std::vector<Point3> out;
  for (const auto& s : segs)
    for (int k = 0; k < g.size(); ++k)
      for (const auto& w : overlapping_translations(detail::seg_box(s), g.triangle(k).v)) {
        Triangle3 c = g.triangle(k);
        for (auto& v : c.v) v = v + w;
        auto hit = seg_tri_intersect(s, c);
        if (hit.kind == SegmentTriangleIntersection::Kind::degenerate)
          throw Violation("non-transverse", "curve meets t" + std::to_string(k) + " at an edge or endpoint");
        if (hit.transverse()) out.push_back(wrap(hit.point));
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace multipoint
