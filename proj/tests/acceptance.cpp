// Acceptance run: one PASS/FAIL line per criterion. All comparisons are
// exact; the only thresholds are wall-clock limits.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"

using namespace multipoint;
using namespace oracles;

namespace {

constexpr double kAnchorSeconds = 1.0;
constexpr double kFuzzSeconds = 60.0;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scene doc(const std::string& name) {
  std::ifstream in(std::string(MULTIPOINT_DOCS_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_scene(s.str());
}

bool row_is(const HerbertRow& r, int lhs, int mu, int euler) {
  return r.lhs == lhs && r.mu == mu && r.euler == euler && r.verdict() == "PASS";
}

const char* kCurveAmbients[] = {"torus", "klein", "genus2"};

// ---------------------------------------------------------------------------

Outcome anchors() {
  Outcome out;
  std::ostringstream timing;
  auto timed = [&](const std::string& name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double s = seconds_since(t0);
    timing << name << " " << s << "s ";
    out.require(s < kAnchorSeconds, name + " took " + std::to_string(s) + "s");
  };
  timed("figure-eight", [&] {
    auto s = doc("figure-eight.scene");
    auto f = make_class(build_curve(s, s.curves[0]));
    auto rep = verify_target(s, s.verifies[0], "figure-eight");
    out.require(rep.rows.size() == 1 && row_is(rep.rows[0], 0, 0, 0), "figure-eight row");
    out.require(psi_r(f, 2).size() == 1, "figure-eight #double points");
    out.require(mu_r(f, 2).size() == 2, "figure-eight #preimages");
  });
  timed("axes", [&] {
    auto s = doc("axes.scene");
    auto rep = verify_target(s, s.verifies[0], "axes");
    out.require(rep.rows.size() == 2, "axes rows");
    for (const auto& r : rep.rows) out.require(row_is(r, 1, 1, 0), "axes row " + r.target);
  });
  timed("klein-core", [&] {
    auto s = doc("klein-core.scene");
    auto rep = verify_target(s, s.verifies[0], "klein-core");
    out.require(rep.rows.size() == 1 && row_is(rep.rows[0], 1, 0, 1), "klein-core row");
  });
  timed("three-tori", [&] {
    auto s = doc("three-tori.scene");
    auto rep = verify_target(s, s.verifies[0], "three-tori");
    out.require(!rep.rows.empty() && rep.rows[0].target == "[M]" && rep.rows[0].r == 2 && row_is(rep.rows[0], 1, 1, 0),
                "three-tori [M] row");
    out.require(rep.pass(), "three-tori component rows");
    auto f = build_immersion(s.immersions[0]);
    auto tp = triple_points(f);
    out.require(tp.points.size() == 1, "three-tori triple points");
    out.require(double_curves(f).circles.size() == 3, "three-tori double circles");
    out.require(tp.ordered_triples.size() == 6, "three-tori ordered triples");
    out.require(tp.mu3_points.size() == 3, "three-tori mu3 points");
  });
  if (out.ok) out.detail = timing.str();
  return out;
}

Outcome fuzz() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  int scenes = 0, rows = 0;
  auto run = [&](const std::string& universe, int count) {
    for (int i = 0; i < count; ++i) {
      const auto label = universe + "-" + std::to_string(i);
      try {
        const Scene s = generate(fuzz_config(universe, static_cast<std::uint64_t>(i), true));
        for (const auto& v : verify_targets(s)) {
          auto rep = verify_target(s, v, label);
          rows += static_cast<int>(rep.rows.size());
          out.require(rep.pass(), label + " " + to_tsv(rep));
        }
        ++scenes;
      } catch (const Violation& e) {
        out.require(false, label + " " + e.what());
      }
    }
  };
  run("curves", 500);
  run("surfaces", 100);
  const double s = seconds_since(t0);
  out.require(s < kFuzzSeconds, "fuzz took " + std::to_string(s) + "s");
  if (out.ok) out.detail = std::to_string(scenes) + " scenes, " + std::to_string(rows) + " rows, " + std::to_string(s) + "s";
  return out;
}

Outcome prop41() {
  Outcome out;
  int nat = 0, emb = 0, cart2 = 0, cart3 = 0, tower = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto m = random_tori(1000 + seed, 3);
    auto c = check_naturality(groups(m, 0, 1, "g"), groups(m, 1, 3, "f"));
    out.require(c.holds, "naturality seed " + std::to_string(1000 + seed) + ": " + c.lhs + " vs " + c.rhs);
    nat += c.holds;
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = make_class(random_curve(2000 + seed, kCurveAmbients[seed % 3], 1 + static_cast<int>(seed % 2), true));
    const bool empty = psi_r(f, 2).empty() && psi_r(f, 3).empty() && mu_r(f, 2).empty();
    const bool identity = psi_r(f, 1).as<ImmersedMulticurve>() == f.as<ImmersedMulticurve>();
    out.require(empty && identity, "embedding seed " + std::to_string(2000 + seed));
    emb += empty && identity;
  }
  {
    auto t = make_class(random_tori(2500, 1));
    out.require(psi_r(t, 2).empty() && psi_r(t, 3).empty(), "embedded torus");
    out.require(psi_r(t, 1).as<TriangulatedImmersion3>().triangles() == t.as<TriangulatedImmersion3>().triangles(),
                "psi_1 on a torus");
  }
  std::uint64_t seed = 3000;
  for (int pairs = 0; pairs < 100 && seed < 4000; seed += 2) {
    const char* ambient = kCurveAmbients[pairs % 3];
    auto f = random_curve(seed, ambient, 1, false);
    auto g = random_curve(seed + 1, ambient, 1, false);
    try {
      require_certified(union_curves(f, g));
    } catch (const Violation&) {
      continue;  // the pair is not transverse; draw another
    }
    auto c = check_cartan(f, g, 2);
    out.require(c.holds, "cartan curves seed " + std::to_string(seed) + ": " + c.lhs + " vs " + c.rhs);
    cart2 += c.holds;
    ++pairs;
  }
  out.require(cart2 == 100, "only " + std::to_string(cart2) + " curve pairs checked");
  for (std::uint64_t s = 0; s < 25; ++s) {
    auto m = random_tori(5000 + s, 3);
    auto f = groups(m, 0, 2, "f"), g = groups(m, 2, 3, "g");
    auto c3 = check_cartan(f, g, 3);
    auto c2 = check_cartan(f, g, 2);
    out.require(c3.holds && c2.holds, "cartan tori seed " + std::to_string(5000 + s) + ": " + c3.lhs + " vs " + c3.rhs);
    cart3 += c3.holds && c2.holds;
    auto t = check_mu_tower(m);
    out.require(t.holds, "mu tower seed " + std::to_string(5000 + s) + ": " + t.lhs + " vs " + t.rhs);
    tower += t.holds;
  }
  out.detail = "naturality " + std::to_string(nat) + "/50, embeddings " + std::to_string(emb) + "/100, cartan " +
               std::to_string(cart2) + "/100 + " + std::to_string(cart3) + "/25, mu-tower " + std::to_string(tower) +
               "/25" + (out.ok ? "" : "; first failure: " + out.detail);
  return out;
}

Outcome self_pairing_is_euler() {
  Outcome out;
  int comps = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_curve(6000 + seed, kCurveAmbients[seed % 3], 1 + static_cast<int>(seed % 3 == 0), true);
    for (int c = 0; c < static_cast<int>(f.size()); ++c, ++comps)
      out.require(pairing_mod2(f, c, f) == two_sidedness(f, c), "seed " + std::to_string(6000 + seed));
  }
  if (out.ok) out.detail = std::to_string(comps) + " components";
  return out;
}

Outcome form_cross_oracle() {
  Outcome out;
  int checked = 0, cross = 0, skipped = 0;
  for (const char* ambient : {"torus", "klein"}) {
    auto surface = build_surface(Scene{}, ambient);
    const Mat2 q = intersection_form(surface);
    std::optional<ImmersedMulticurve> prev;
    std::optional<Vec2> prev_x;
    for (std::uint64_t seed = 7000; checked < (ambient[0] == 't' ? 100 : 200) && seed < 9000; ++seed) {
      auto f = random_curve(seed, ambient, 1, false);
      auto x = crossing_vector(f, 0);
      if (!x) {
        ++skipped;
        continue;
      }
      out.require(pairing_mod2(f, 0, f) == form_pairing(q, *x, *x), std::string(ambient) + " self seed " + std::to_string(seed));
      ++checked;
      if (prev) {
        try {
          crossings_between(f, *prev);
          out.require(pairing_mod2(f, 0, *prev) == form_pairing(q, *x, *prev_x),
                      std::string(ambient) + " pair seed " + std::to_string(seed));
          ++cross;
        } catch (const Violation&) {
          // not transverse to the previous curve
        }
      }
      prev = f;
      prev_x = x;
    }
  }
  out.require(checked == 200, "only " + std::to_string(checked) + " curves checked");
  if (out.ok)
    out.detail = std::to_string(checked) + " self pairings, " + std::to_string(cross) + " cross pairings, " +
                 std::to_string(skipped) + " non-generic draws skipped";
  return out;
}

Outcome degenerate_rejected() {
  Outcome out;
  const std::pair<const char*, const char*> cases[] = {{"degenerate/tangency.scene", "tangency"},
                                                       {"degenerate/triple-point.scene", "triple-point"},
                                                       {"degenerate/coplanar-overlap.scene", "coplanar-overlap"},
                                                       {"degenerate/vertex-on-edge.scene", "vertex-on-edge"}};
  for (const auto& [file, code] : cases) {
    auto s = doc(file);
    try {
      verify_target(s, s.verifies[0], file);
      out.require(false, std::string(file) + " produced a verdict");
    } catch (const Violation& v) {
      out.require(v.code() == code, std::string(file) + " rejected as " + v.code());
    }
  }
  if (out.ok) out.detail = "tangency, triple-point, coplanar-overlap, vertex-on-edge";
  return out;
}

Outcome deterministic_reports() {
  Outcome out;
  auto corpus = [] {
    std::string tsv;
    for (const char* name : {"figure-eight.scene", "axes.scene", "klein-core.scene", "three-tori.scene", "two-tori.scene"}) {
      auto s = doc(name);
      for (const auto& v : verify_targets(s)) tsv += to_tsv(verify_target(s, v, name));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto s = generate(fuzz_config(seed % 2 ? "surfaces" : "curves", seed, true));
      for (const auto& v : verify_targets(s)) tsv += to_tsv(verify_target(s, v, "gen-" + std::to_string(seed)));
    }
    return tsv;
  };
  const auto first = corpus();
  for (int run = 0; run < 2; ++run) out.require(corpus() == first, "run " + std::to_string(run + 2) + " differs");
  if (out.ok) out.detail = "3 runs, " + std::to_string(first.size()) + " bytes each";
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"anchor scenes", anchors},
      {"fuzz 500 curve + 100 tori scenes", fuzz},
      {"naturality, embeddings, cartan, mu-tower", prop41},
      {"self-pairing equals euler on embedded curves", self_pairing_is_euler},
      {"pushoff pairing equals intersection form", form_cross_oracle},
      {"degenerate fixtures rejected", degenerate_rejected},
      {"byte-identical machine reports", deterministic_reports},
  };
  int failures = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.ok;
    std::cout << "criterion " << n << " (" << name << "): " << (o.ok ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
