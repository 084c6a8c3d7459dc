#pragma once

// Line-oriented scene files. One directive per line, '#' starts a comment:
//
//   surface <name> / squares <k> / glue s<i>.<E|W|N|S> s<j>.<E|W|N|S> <same|flip>
//   curve <name> on <surface> / pt s<i> <x> <y>
//   immersion3 <name> / tri <9 rationals>
//   cycle <name> on <immersion3> / mpt t<i> <a> <b>
//   verify <name> [cycles...]
//
// Repeating a curve stanza adds a component; repeating an immersion3 stanza
// adds a group (matched into its own closed mesh). torus, klein and genus2
// are predefined surfaces.

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multipoint/herbert.hpp"

namespace multipoint {

class SceneError : public std::runtime_error {
 public:
  SceneError(int line, std::string code, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + code + ": " + detail),
        line_(line),
        code_(std::move(code)) {}
  int line() const { return line_; }
  const std::string& code() const { return code_; }

 private:
  int line_;
  std::string code_;
};

struct SurfaceDecl {
  std::string name;
  int squares = 0;
  std::vector<Gluing> gluings;
  friend bool operator==(const SurfaceDecl&, const SurfaceDecl&) = default;
};

struct CurveDecl {
  std::string name, surface;
  std::vector<std::vector<CurveVertex>> loops;
  friend bool operator==(const CurveDecl&, const CurveDecl&) = default;
};

struct ImmersionDecl {
  std::string name;
  std::vector<std::vector<Triangle3>> groups;
  friend bool operator==(const ImmersionDecl&, const ImmersionDecl&) = default;
};

struct CycleDecl {
  std::string name, immersion;
  std::vector<MeshCyclePoint> points;
  friend bool operator==(const CycleDecl&, const CycleDecl&) = default;
};

struct VerifyDecl {
  std::string name;
  std::vector<std::string> cycles;
  friend bool operator==(const VerifyDecl&, const VerifyDecl&) = default;
};

struct Scene {
  std::vector<SurfaceDecl> surfaces;
  std::vector<CurveDecl> curves;
  std::vector<ImmersionDecl> immersions;
  std::vector<CycleDecl> cycles;
  std::vector<VerifyDecl> verifies;
  friend bool operator==(const Scene&, const Scene&) = default;

  template <class T>
  static const T* find(const std::vector<T>& items, const std::string& name) {
    for (const auto& item : items)
      if (item.name == name) return &item;
    return nullptr;
  }
  template <class T>
  static T* find(std::vector<T>& items, const std::string& name) {
    for (auto& item : items)
      if (item.name == name) return &item;
    return nullptr;
  }
};

inline bool is_builtin_surface(const std::string& name) {
  return name == "torus" || name == "klein" || name == "genus2";
}

namespace detail {

inline std::vector<std::string> tokens(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

class SceneParser {
 public:
  Scene parse(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_;
      directive(tokens(text.substr(start, end - start)));
      start = end + 1;
    }
    close();
    return std::move(scene_);
  }

 private:
  enum class Open { none, surface, curve, immersion, cycle };

  [[noreturn]] void fail(const std::string& code, const std::string& detail) const { throw SceneError(line_, code, detail); }
  [[noreturn]] void fail_stanza(const std::string& detail) const { throw SceneError(stanza_line_, "syntax", detail); }

  void expect(const std::vector<std::string>& t, std::size_t n, const char* usage) const {
    if (t.size() != n) fail("syntax", std::string("expected `") + usage + "`");
  }

  Rational rational(const std::string& s) const {
    auto r = Rational::parse(s);
    if (!r) fail("invalid rational", s);
    return *r;
  }

  int index(const std::string& s, char prefix) const {
    if (s.size() < 2 || s[0] != prefix || s.find_first_not_of("0123456789", 1) != std::string::npos)
      fail("syntax", std::string("expected ") + prefix + "<index>, got " + s);
    return std::stoi(s.substr(1));
  }

  EdgeRef edge(const std::string& s) const {
    auto dot = s.find('.');
    if (dot == std::string::npos || dot + 2 != s.size()) fail("syntax", "expected s<i>.<side>, got " + s);
    auto side = side_from_char(s[dot + 1]);
    if (!side) fail("syntax", "bad side in " + s);
    return {index(s.substr(0, dot), 's'), *side};
  }

  bool surface_known(const std::string& name) const {
    return is_builtin_surface(name) || Scene::find(scene_.surfaces, name);
  }

  void require_new(const std::string& name) const {
    if (surface_known(name) || Scene::find(scene_.immersions, name) || Scene::find(scene_.cycles, name))
      fail("duplicate-name", name);
  }

  void close() {
    if (open_ == Open::surface && scene_.surfaces.back().squares <= 0)
      fail_stanza("surface " + scene_.surfaces.back().name + " has no squares");
    if (open_ == Open::curve && scene_.curves[current_].loops.back().empty()) fail_stanza("curve stanza has no points");
    if (open_ == Open::immersion && scene_.immersions[current_].groups.back().empty())
      fail_stanza("immersion3 stanza has no triangles");
    open_ = Open::none;
    stanza_line_ = line_;
  }

  void directive(const std::vector<std::string>& t) {
    if (t.empty()) return;
    const std::string& word = t[0];
    if (word == "surface") {
      expect(t, 2, "surface <name>");
      close();
      if (surface_known(t[1]) || Scene::find(scene_.curves, t[1])) fail("duplicate-name", t[1]);
      scene_.surfaces.push_back({t[1], 0, {}});
      open_ = Open::surface;
    } else if (word == "squares") {
      if (open_ != Open::surface) fail("syntax", "squares outside a surface stanza");
      expect(t, 2, "squares <k>");
      if (t[1].find_first_not_of("0123456789") != std::string::npos) fail("syntax", "bad square count " + t[1]);
      scene_.surfaces.back().squares = std::stoi(t[1]);
    } else if (word == "glue") {
      if (open_ != Open::surface) fail("syntax", "glue outside a surface stanza");
      expect(t, 4, "glue s<i>.<side> s<j>.<side> <same|flip>");
      if (t[3] != "same" && t[3] != "flip") fail("syntax", "glue mode must be same or flip");
      scene_.surfaces.back().gluings.push_back({edge(t[1]), edge(t[2]), t[3] == "same" ? GlueMode::same : GlueMode::flip});
    } else if (word == "curve") {
      if (t.size() != 4 || t[2] != "on") fail("syntax", "expected `curve <name> on <surface>`");
      close();
      if (!surface_known(t[3])) fail("dangling-reference", "surface " + t[3]);
      auto* existing = Scene::find(scene_.curves, t[1]);
      if (!existing) {
        require_new(t[1]);
        scene_.curves.push_back({t[1], t[3], {}});
        existing = &scene_.curves.back();
      } else if (existing->surface != t[3]) {
        fail("syntax", "curve " + t[1] + " continued on a different surface");
      }
      existing->loops.emplace_back();
      current_ = static_cast<std::size_t>(existing - scene_.curves.data());
      open_ = Open::curve;
    } else if (word == "pt") {
      if (open_ != Open::curve) fail("syntax", "pt outside a curve stanza");
      expect(t, 4, "pt s<i> <x> <y>");
      scene_.curves[current_].loops.back().push_back({index(t[1], 's'), {rational(t[2]), rational(t[3])}});
    } else if (word == "immersion3") {
      expect(t, 2, "immersion3 <name>");
      close();
      auto* existing = Scene::find(scene_.immersions, t[1]);
      if (!existing) {
        if (surface_known(t[1]) || Scene::find(scene_.curves, t[1]) || Scene::find(scene_.cycles, t[1]))
          fail("duplicate-name", t[1]);
        scene_.immersions.push_back({t[1], {}});
        existing = &scene_.immersions.back();
      }
      existing->groups.emplace_back();
      current_ = static_cast<std::size_t>(existing - scene_.immersions.data());
      open_ = Open::immersion;
    } else if (word == "tri") {
      if (open_ != Open::immersion) fail("syntax", "tri outside an immersion3 stanza");
      expect(t, 10, "tri <9 rationals>");
      Triangle3 tri;
      for (int v = 0; v < 3; ++v)
        tri.v[v] = {rational(t[1 + 3 * v]), rational(t[2 + 3 * v]), rational(t[3 + 3 * v])};
      scene_.immersions[current_].groups.back().push_back(tri);
    } else if (word == "cycle") {
      if (t.size() != 4 || t[2] != "on") fail("syntax", "expected `cycle <name> on <immersion3>`");
      close();
      if (!Scene::find(scene_.immersions, t[3])) fail("dangling-reference", "immersion3 " + t[3]);
      if (Scene::find(scene_.curves, t[1])) fail("duplicate-name", t[1]);
      require_new(t[1]);
      scene_.cycles.push_back({t[1], t[3], {}});
      open_ = Open::cycle;
    } else if (word == "mpt") {
      if (open_ != Open::cycle) fail("syntax", "mpt outside a cycle stanza");
      expect(t, 4, "mpt t<i> <a> <b>");
      scene_.cycles.back().points.push_back({index(t[1], 't'), rational(t[2]), rational(t[3])});
    } else if (word == "verify") {
      if (t.size() < 2) fail("syntax", "expected `verify <name> [cycles...]`");
      close();
      const bool curve = Scene::find(scene_.curves, t[1]);
      const bool surface = Scene::find(scene_.immersions, t[1]);
      if (!curve && !surface) fail("dangling-reference", t[1]);
      VerifyDecl v{t[1], {}};
      for (std::size_t k = 2; k < t.size(); ++k) {
        const auto* c = Scene::find(scene_.cycles, t[k]);
        if (!c) fail("dangling-reference", "cycle " + t[k]);
        if (c->immersion != t[1]) fail("dangling-reference", "cycle " + t[k] + " is not on " + t[1]);
        v.cycles.push_back(t[k]);
      }
      scene_.verifies.push_back(std::move(v));
    } else {
      fail("syntax", "unknown directive " + word);
    }
  }

  Scene scene_;
  Open open_ = Open::none;
  std::size_t current_ = 0;
  int line_ = 0;
  int stanza_line_ = 0;  // where the open stanza started
};

}  // namespace detail

/// Parses a scene; the first error is thrown as SceneError with its line.
inline Scene parse_scene(std::string_view text) { return detail::SceneParser{}.parse(text); }

inline std::string print_scene(const Scene& s) {
  std::ostringstream out;
  for (const auto& d : s.surfaces) {
    out << "surface " << d.name << "\nsquares " << d.squares << '\n';
    for (const auto& g : d.gluings)
      out << "glue " << to_string(g.a) << ' ' << to_string(g.b) << (g.mode == GlueMode::same ? " same" : " flip")
          << '\n';
  }
  for (const auto& c : s.curves)
    for (const auto& loop : c.loops) {
      out << "curve " << c.name << " on " << c.surface << '\n';
      for (const auto& v : loop) out << "pt s" << v.square << ' ' << v.p.x << ' ' << v.p.y << '\n';
    }
  for (const auto& m : s.immersions)
    for (const auto& group : m.groups) {
      out << "immersion3 " << m.name << '\n';
      for (const auto& t : group) {
        out << "tri";
        for (const auto& v : t.v) out << ' ' << v.x << ' ' << v.y << ' ' << v.z;
        out << '\n';
      }
    }
  for (const auto& c : s.cycles) {
    out << "cycle " << c.name << " on " << c.immersion << '\n';
    for (const auto& p : c.points) out << "mpt t" << p.tri << ' ' << p.a << ' ' << p.b << '\n';
  }
  for (const auto& v : s.verifies) {
    out << "verify " << v.name;
    for (const auto& c : v.cycles) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Building objects

inline std::shared_ptr<const SquareComplex> build_surface(const Scene& s, const std::string& name) {
  if (name == "torus") return std::make_shared<SquareComplex>(SquareComplex::torus());
  if (name == "klein") return std::make_shared<SquareComplex>(SquareComplex::klein_bottle());
  if (name == "genus2") return std::make_shared<SquareComplex>(SquareComplex::genus_two());
  const auto* d = Scene::find(s.surfaces, name);
  if (!d) throw Violation("dangling-reference", "surface " + name);
  auto c = std::make_shared<SquareComplex>(d->name, d->squares, d->gluings);
  auto rep = validate_complex(*c);
  if (!rep.ok()) throw Violation(rep.issues.front().code, rep.issues.front().detail);
  return c;
}

/// Component ids: the curve name for one loop, name.k otherwise.
inline ImmersedMulticurve build_curve(const Scene& s, const CurveDecl& c) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < c.loops.size(); ++k)
    ids.push_back(c.loops.size() == 1 ? c.name : c.name + "." + std::to_string(k));
  return ImmersedMulticurve::from_vertices(build_surface(s, c.surface), c.loops, std::move(ids));
}

inline TriangulatedImmersion3 build_immersion(const ImmersionDecl& m) { return TriangulatedImmersion3(m.groups, m.name); }

inline MeshCycle build_cycle(const CycleDecl& c) { return {c.name, c.points}; }

/// The verify directives of a scene, or every curve and immersion (with all
/// of its cycles) when there are none.
inline std::vector<VerifyDecl> verify_targets(const Scene& s) {
  if (!s.verifies.empty()) return s.verifies;
  std::vector<VerifyDecl> out;
  for (const auto& c : s.curves) out.push_back({c.name, {}});
  for (const auto& m : s.immersions) {
    VerifyDecl v{m.name, {}};
    for (const auto& c : s.cycles)
      if (c.immersion == m.name) v.cycles.push_back(c.name);
    out.push_back(std::move(v));
  }
  return out;
}

/// Builds and verifies one target. Violations from building or certifying
/// propagate: they mean the scene is not a valid input.
inline HerbertReport verify_target(const Scene& s, const VerifyDecl& v, const std::string& label) {
  if (const auto* c = Scene::find(s.curves, v.name)) return verify(build_curve(s, *c), label);
  const auto* m = Scene::find(s.immersions, v.name);
  if (!m) throw Violation("dangling-reference", v.name);
  std::vector<MeshCycle> cycles;
  for (const auto& name : v.cycles) cycles.push_back(build_cycle(*Scene::find(s.cycles, name)));
  return verify(build_immersion(*m), cycles, label);
}

}  // namespace multipoint
