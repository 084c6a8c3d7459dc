#pragma once

// Seeded random scenes. Curves are random closed polylines on a square
// complex; surfaces come from a catalog of tori in T^3 (graphs over a grid,
// integer shears, random translations). Candidates that fail certification
// are redrawn until the budget runs out.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "multipoint/scene.hpp"

namespace multipoint {

struct GeneratorConfig {
  std::string universe = "curves";  // curves | surfaces
  std::string ambient = "torus";    // torus | klein | genus2 | t3-tori
  int min_components = 1, max_components = 2;
  int min_segments = 3, max_segments = 8;  // curves only
  bool embedded = false;                   // curves: reject self-crossings
  int budget = 200;
  std::uint64_t seed = 0;
};

/// mt19937_64 with its own bounded draw, so a seed gives the same scene on
/// every standard library.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  long uniform(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  bool coin() { return uniform(0, 1) == 1; }

  /// A rational strictly inside (0, 1) with denominator at most 64.
  Rational unit_interior() {
    const long d = uniform(2, 64);
    return Rational(uniform(1, d - 1), d);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline std::vector<CurveVertex> random_loop(SceneRng& rng, const SquareComplex& c, int segments) {
  std::vector<CurveVertex> loop;
  int square = static_cast<int>(rng.uniform(0, c.square_count() - 1));
  for (int k = 0; k < segments; ++k) {
    loop.push_back({square, {rng.unit_interior(), rng.unit_interior()}});
    // the next vertex sits in this square or across one of its edges
    const long pick = rng.uniform(0, 4);
    if (pick < 4)
      if (const auto* x = c.across(square, kSides[pick])) square = x->to.square;
  }
  return loop;
}

// Graph of a periodic height function over an n x n grid anchored at (s, t),
// then sheared by an integer matrix and translated.
inline std::vector<Triangle3> catalog_torus(SceneRng& rng, int axis) {
  const int n = static_cast<int>(rng.uniform(1, 2));
  const Rational s = rng.unit_interior(), t = rng.unit_interior(), c = rng.unit_interior();
  std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n));
  for (auto& row : h)
    for (auto& x : row) x = c + (n == 1 ? Rational(0) : (rng.unit_interior() - Rational(1, 2)) / 4);
  // identity or one elementary shear e_i += e_j
  std::array<std::array<long, 3>, 3> A{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  if (const long pick = rng.uniform(0, 6); pick > 0) {
    const int i = static_cast<int>((pick - 1) / 2);
    const int j = (i + 1 + static_cast<int>((pick - 1) % 2)) % 3;
    A[i][j] = 1;
  }
  auto vertex = [&](int i, int j) {
    const Rational u = s + Rational(i, n), v = t + Rational(j, n);
    const Rational& w = h[i % n][j % n];
    Point3 p = axis == 0 ? Point3{w, u, v} : axis == 1 ? Point3{u, w, v} : Point3{u, v, w};
    Point3 q{0, 0, 0};
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) q[r] += Rational(A[r][k]) * p[k];
    return q;
  };
  std::vector<Triangle3> tris;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      tris.push_back({{vertex(i, j), vertex(i + 1, j), vertex(i, j + 1)}});
      tris.push_back({{vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)}});
    }
  return tris;
}

inline bool curve_scene_ok(const Scene& s, bool embedded) {
  try {
    auto f = build_curve(s, s.curves.front());
    require_certified(f);
    if (embedded && !double_points(f).points.empty()) return false;
    return true;
  } catch (const Violation&) {
    return false;
  }
}

inline bool surface_scene_ok(const Scene& s) {
  try {
    certified_analysis(build_immersion(s.immersions.front()));
    return true;
  } catch (const Violation&) {
    return false;
  }
}

}  // namespace detail

/// A certified scene, a pure function of the config. Throws Violation
/// "budget-exhausted" when every candidate fails.
inline Scene generate(const GeneratorConfig& cfg) {
  if (cfg.min_components < 1 || cfg.min_components > cfg.max_components || cfg.budget < 1 ||
      cfg.min_segments < 2 || cfg.min_segments > cfg.max_segments)
    throw std::invalid_argument("generate: empty range or budget");
  SceneRng rng(cfg.seed);
  for (int attempt = 0; attempt < cfg.budget; ++attempt) {
    Scene s;
    const int comps = static_cast<int>(rng.uniform(cfg.min_components, cfg.max_components));
    if (cfg.universe == "curves") {
      auto ambient = build_surface(s, cfg.ambient);
      CurveDecl c{"f", cfg.ambient, {}};
      for (int k = 0; k < comps; ++k)
        c.loops.push_back(detail::random_loop(rng, *ambient, static_cast<int>(rng.uniform(cfg.min_segments, cfg.max_segments))));
      s.curves.push_back(std::move(c));
      s.verifies.push_back({"f", {}});
      if (detail::curve_scene_ok(s, cfg.embedded)) return s;
    } else if (cfg.universe == "surfaces") {
      if (cfg.ambient != "t3-tori") throw std::invalid_argument("surfaces need the t3-tori ambient");
      ImmersionDecl m{"M", {}};
      for (int k = 0; k < comps; ++k) m.groups.push_back(detail::catalog_torus(rng, static_cast<int>(rng.uniform(0, 2))));
      s.immersions.push_back(std::move(m));
      s.verifies.push_back({"M", {}});
      if (detail::surface_scene_ok(s)) return s;
    } else {
      throw std::invalid_argument("unknown universe " + cfg.universe);
    }
  }
  throw Violation("budget-exhausted", "no certified scene in " + std::to_string(cfg.budget) + " attempts");
}

/// The fuzz corpus: scene i uses seed + i, cycling the curve ambient through
/// torus, klein, genus2 when `mixed` is set.
inline GeneratorConfig fuzz_config(const std::string& universe, std::uint64_t seed, bool mixed_ambient,
                                   const std::string& ambient = "torus") {
  GeneratorConfig cfg;
  cfg.universe = universe;
  cfg.seed = seed;
  if (universe == "surfaces") {
    cfg.ambient = "t3-tori";
    cfg.min_components = 2;
    cfg.max_components = 3;
  } else {
    static const char* kAmbients[] = {"torus", "klein", "genus2"};
    cfg.ambient = mixed_ambient ? kAmbients[seed % 3] : ambient;
  }
  return cfg;
}

}  // namespace multipoint
