#pragma once

// Closed surfaces assembled from unit squares with dihedral edge gluings.

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "multipoint/exactgeom.hpp"

namespace multipoint {

enum class Side : int { E = 0, W = 1, N = 2, S = 3 };
enum class GlueMode { same, flip };

inline constexpr std::array<Side, 4> kSides{Side::E, Side::W, Side::N, Side::S};

inline char side_char(Side s) { return "EWNS"[static_cast<int>(s)]; }

inline std::optional<Side> side_from_char(char c) {
  switch (c) {
    case 'E': return Side::E;
    case 'W': return Side::W;
    case 'N': return Side::N;
    case 'S': return Side::S;
    default: return std::nullopt;
  }
}

/// Point at parameter t along the edge (t runs with the positive axis).
inline Point2 edge_point(Side s, const Rational& t) {
  switch (s) {
    case Side::E: return {1, t};
    case Side::W: return {0, t};
    case Side::N: return {t, 1};
    default: return {t, 0};
  }
}

inline Point2 edge_direction(Side s) {
  return (s == Side::E || s == Side::W) ? Point2{0, 1} : Point2{1, 0};
}

inline Point2 inward_normal(Side s) {
  switch (s) {
    case Side::E: return {-1, 0};
    case Side::W: return {1, 0};
    case Side::N: return {0, -1};
    default: return {0, 1};
  }
}

/// Edge parameter of a point known to lie on the edge line.
inline Rational edge_parameter(Side s, const Point2& p) { return (s == Side::E || s == Side::W) ? p.y : p.x; }

/// Integer affine map p -> L p + c between square-local frames.
struct Transform2 {
  std::array<std::array<int, 2>, 2> L{{{1, 0}, {0, 1}}};
  std::array<int, 2> c{0, 0};

  Point2 apply(const Point2& p) const {
    return {Rational(L[0][0]) * p.x + Rational(L[0][1]) * p.y + Rational(c[0]),
            Rational(L[1][0]) * p.x + Rational(L[1][1]) * p.y + Rational(c[1])};
  }
  Point2 apply_linear(const Point2& v) const {
    return {Rational(L[0][0]) * v.x + Rational(L[0][1]) * v.y, Rational(L[1][0]) * v.x + Rational(L[1][1]) * v.y};
  }
  int det() const { return L[0][0] * L[1][1] - L[0][1] * L[1][0]; }
  Transform2 inverse() const {
    // L is a signed permutation matrix, so its inverse is its transpose.
    Transform2 t;
    t.L = {{{L[0][0], L[1][0]}, {L[0][1], L[1][1]}}};
    t.c = {-(t.L[0][0] * c[0] + t.L[0][1] * c[1]), -(t.L[1][0] * c[0] + t.L[1][1] * c[1])};
    return t;
  }
};

struct EdgeRef {
  int square = 0;
  Side side = Side::E;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

inline std::string to_string(const EdgeRef& e) { return "s" + std::to_string(e.square) + "." + side_char(e.side); }

struct Gluing {
  EdgeRef a, b;
  GlueMode mode = GlueMode::same;
  friend bool operator==(const Gluing&, const Gluing&) = default;
};

/// Leaving a square through an edge: where you arrive and how coordinates
/// change. `map` takes the departure frame to the arrival frame, so the
/// departure square lands just outside the arrival edge.
struct EdgeCrossing {
  EdgeRef to;
  Transform2 map;
  int sign = 1;  // det of map: -1 for an orientation-reversing gluing
  int gluing = 0;
};

namespace detail {

inline Transform2 gluing_transform(Side from, Side to, GlueMode mode) {
  const int sigma = mode == GlueMode::same ? 1 : -1;
  const Point2 dx = edge_direction(from), nx = inward_normal(from);
  const Point2 dy = edge_direction(to), ny = inward_normal(to);
  auto i = [](const Rational& r) { return static_cast<int>(r.to_long()); };
  Transform2 t;
  // L = sigma dy dx^T - ny nx^T
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Rational dyr = r == 0 ? dy.x : dy.y, dxc = c == 0 ? dx.x : dx.y;
      Rational nyr = r == 0 ? ny.x : ny.y, nxc = c == 0 ? nx.x : nx.y;
      t.L[r][c] = i(Rational(sigma) * dyr * dxc - nyr * nxc);
    }
  const Point2 target = edge_point(to, mode == GlueMode::same ? 0 : 1);
  const Point2 image = t.apply(edge_point(from, 0));
  t.c = {i(target.x - image.x), i(target.y - image.y)};
  return t;
}

}  // namespace detail

class SquareComplex {
 public:
  SquareComplex() = default;
  SquareComplex(std::string name, int squares, std::vector<Gluing> gluings)
      : name_(std::move(name)), squares_(squares), gluings_(std::move(gluings)) {
    across_.assign(static_cast<std::size_t>(std::max(squares_, 0)) * 4, std::nullopt);
    for (std::size_t g = 0; g < gluings_.size(); ++g) {
      const auto& gl = gluings_[g];
      if (!in_range(gl.a) || !in_range(gl.b)) continue;
      add_crossing(gl.a, gl.b, gl.mode, static_cast<int>(g));
      if (!(gl.a == gl.b)) add_crossing(gl.b, gl.a, gl.mode, static_cast<int>(g));
    }
  }

  const std::string& name() const { return name_; }
  int square_count() const { return squares_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }

  const EdgeCrossing* across(int square, Side side) const {
    if (square < 0 || square >= squares_) return nullptr;
    const auto& slot = across_[static_cast<std::size_t>(square) * 4 + static_cast<int>(side)];
    return slot ? &*slot : nullptr;
  }

  /// Structural equality; the label is ignored.
  friend bool operator==(const SquareComplex& a, const SquareComplex& b) {
    return a.squares_ == b.squares_ && a.gluings_ == b.gluings_;
  }

  static SquareComplex torus() {
    return {"torus", 1,
            {{{0, Side::E}, {0, Side::W}, GlueMode::same}, {{0, Side::N}, {0, Side::S}, GlueMode::same}}};
  }
  static SquareComplex klein_bottle() {
    return {"klein", 1,
            {{{0, Side::E}, {0, Side::W}, GlueMode::flip}, {{0, Side::N}, {0, Side::S}, GlueMode::same}}};
  }
  /// Four squares in a horizontal cycle, vertical gluings pairing 0<->1 and
  /// 2<->3. Two cone points of angle 4 pi, chi = -2.
  static SquareComplex genus_two() {
    std::vector<Gluing> g;
    for (int i = 0; i < 4; ++i) g.push_back({{i, Side::E}, {(i + 1) % 4, Side::W}, GlueMode::same});
    const int up[4] = {1, 0, 3, 2};
    for (int i = 0; i < 4; ++i) g.push_back({{i, Side::N}, {up[i], Side::S}, GlueMode::same});
    return {"genus2", 4, std::move(g)};
  }

 private:
  bool in_range(const EdgeRef& e) const { return e.square >= 0 && e.square < squares_; }

  void add_crossing(const EdgeRef& from, const EdgeRef& to, GlueMode mode, int gluing) {
    auto& slot = across_[static_cast<std::size_t>(from.square) * 4 + static_cast<int>(from.side)];
    if (slot) return;  // reported by validate_complex
    Transform2 t = detail::gluing_transform(from.side, to.side, mode);
    slot = EdgeCrossing{to, t, t.det(), gluing};
  }

  std::string name_;
  int squares_ = 0;
  std::vector<Gluing> gluings_;
  std::vector<std::optional<EdgeCrossing>> across_;
};

struct ValidationReport {
  bool closed = false;
  bool connected = false;
  bool surface = false;
  bool orientable = false;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler = 0;
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Corner index within a square: 0 = (0,0), 1 = (1,0), 2 = (1,1), 3 = (0,1).
inline int corner_at(Side s, int end) {
  switch (s) {
    case Side::E: return end == 0 ? 1 : 2;
    case Side::W: return end == 0 ? 0 : 3;
    case Side::N: return end == 0 ? 3 : 2;
    default: return end == 0 ? 0 : 1;
  }
}

}  // namespace detail

inline ValidationReport validate_complex(const SquareComplex& c) {
  ValidationReport rep;
  const int n = c.square_count();
  rep.faces = n;
  if (n <= 0) {
    rep.issues.push_back({"empty-complex", "no squares"});
    return rep;
  }
  std::map<EdgeRef, int> uses;
  for (const auto& g : c.gluings()) {
    for (const auto& e : {g.a, g.b}) {
      if (e.square < 0 || e.square >= n) {
        rep.issues.push_back({"bad-square", to_string(e)});
        continue;
      }
      ++uses[e];
    }
    if (g.a == g.b) rep.issues.push_back({"self-glued-edge", to_string(g.a)});
  }
  rep.closed = true;
  for (int s = 0; s < n; ++s)
    for (Side side : kSides) {
      EdgeRef e{s, side};
      auto it = uses.find(e);
      int k = it == uses.end() ? 0 : it->second;
      if (k == 0) {
        rep.closed = false;
        rep.issues.push_back({"boundary-edge", to_string(e)});
      } else if (k > 1) {
        rep.closed = false;
        rep.issues.push_back({"multiply-glued-edge", to_string(e)});
      }
    }
  rep.edges = static_cast<int>(c.gluings().size());

  detail::UnionFind squares(n);
  for (const auto& g : c.gluings())
    if (g.a.square >= 0 && g.a.square < n && g.b.square >= 0 && g.b.square < n) squares.unite(g.a.square, g.b.square);
  rep.connected = true;
  for (int s = 0; s < n; ++s)
    if (squares.find(s) != 0) {
      rep.connected = false;
      rep.issues.push_back({"disconnected", "square s" + std::to_string(s) + " unreachable from s0"});
    }

  // Vertex links: wedges (square corners) joined across glued edges.
  detail::UnionFind corners(4 * n);
  std::vector<int> degree(static_cast<std::size_t>(4 * n), 0);
  for (const auto& g : c.gluings()) {
    if (g.a.square < 0 || g.a.square >= n || g.b.square < 0 || g.b.square >= n) continue;
    for (int end = 0; end < 2; ++end) {
      int other_end = g.mode == GlueMode::same ? end : 1 - end;
      int ca = 4 * g.a.square + detail::corner_at(g.a.side, end);
      int cb = 4 * g.b.square + detail::corner_at(g.b.side, other_end);
      corners.unite(ca, cb);
      ++degree[ca];
      ++degree[cb];
    }
  }
  std::map<int, int> vertex_of;
  for (int k = 0; k < 4 * n; ++k) vertex_of.emplace(corners.find(k), static_cast<int>(vertex_of.size()));
  rep.vertices = static_cast<int>(vertex_of.size());
  rep.surface = rep.closed;
  for (int k = 0; k < 4 * n; ++k)
    if (degree[k] != 2) {
      rep.surface = false;
      rep.issues.push_back({"vertex-link-not-cycle",
                            "corner " + std::to_string(k % 4) + " of s" + std::to_string(k / 4) + " has link degree " +
                                std::to_string(degree[k])});
    }
  rep.euler = rep.vertices - rep.edges + rep.faces;

  // Orientation: propagate square orientations along a spanning tree of the
  // face-adjacency graph; each non-tree gluing closes a basis loop whose sign
  // product must be +1.
  std::vector<int> orient(static_cast<std::size_t>(n), 0);
  rep.orientable = true;
  std::queue<int> todo;
  orient[0] = 1;
  todo.push(0);
  while (!todo.empty()) {
    int s = todo.front();
    todo.pop();
    for (Side side : kSides) {
      const EdgeCrossing* x = c.across(s, side);
      if (!x) continue;
      int want = orient[s] * x->sign;
      int& o = orient[x->to.square];
      if (o == 0) {
        o = want;
        todo.push(x->to.square);
      } else if (o != want) {
        rep.orientable = false;
      }
    }
  }
  if (rep.closed && rep.orientable && rep.euler % 2 != 0)
    rep.issues.push_back({"euler-mismatch", "orientable surface with odd Euler characteristic"});
  if (rep.euler > 2 || (!rep.orientable && rep.euler > 1))
    if (rep.closed) rep.issues.push_back({"euler-mismatch", "chi=" + std::to_string(rep.euler)});
  return rep;
}

struct SurfaceType {
  bool orientable = true;
  /// Genus when orientable, number of crosscaps otherwise.
  int genus = 0;
  friend bool operator==(const SurfaceType&, const SurfaceType&) = default;
};

inline SurfaceType classify_surface(const SquareComplex& c) {
  auto rep = validate_complex(c);
  if (!rep.ok()) throw Violation("invalid-complex", rep.issues.front().code + " " + rep.issues.front().detail);
  if (rep.orientable) return {true, (2 - rep.euler) / 2};
  return {false, 2 - rep.euler};
}

/// A closed path in the square complex, recorded as the sequence of edges it
/// leaves through starting from `base`.
struct AmbientLoop {
  int base = 0;
  std::vector<Side> exits;

  struct Step {
    int square;
    std::optional<Side> entry;
    Side exit;
  };
  AmbientLoop concat(const AmbientLoop& other) const {
    AmbientLoop out = *this;
    out.exits.insert(out.exits.end(), other.exits.begin(), other.exits.end());
    return out;
  }
};

/// Per-step view of a loop (square, entry edge, exit edge). Throws when a
/// step leaves through a boundary edge or the loop fails to close.
inline std::vector<AmbientLoop::Step> loop_steps(const SquareComplex& c, const AmbientLoop& loop) {
  std::vector<AmbientLoop::Step> steps;
  int square = loop.base;
  std::optional<Side> entry;
  for (Side exit : loop.exits) {
    const EdgeCrossing* x = c.across(square, exit);
    if (!x) throw Violation("loop-not-closed", "boundary edge " + to_string(EdgeRef{square, exit}));
    steps.push_back({square, entry, exit});
    square = x->to.square;
    entry = x->to.side;
  }
  if (square != loop.base) throw Violation("loop-not-closed", "loop ends in s" + std::to_string(square));
  return steps;
}

/// w1 of the ambient surface evaluated on a loop: 1 iff the loop crosses an
/// odd number of orientation-reversing gluings.
inline int orientation_character(const SquareComplex& c, const AmbientLoop& loop) {
  int bit = 0;
  for (const auto& step : loop_steps(c, loop))
    if (c.across(step.square, step.exit)->sign < 0) bit ^= 1;
  return bit;
}

}  // namespace multipoint
