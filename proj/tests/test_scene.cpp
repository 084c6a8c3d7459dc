#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "multipoint/generate.hpp"

using namespace multipoint;

namespace {

std::string doc(const std::string& name) {
  std::ifstream in(std::string(MULTIPOINT_DOCS_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void expect_error(const std::string& text, const std::string& code, int line) {
  try {
    parse_scene(text);
    FAIL() << "parsed: " << text;
  } catch (const SceneError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

}  // namespace

TEST(Parse, FigureEightGolden) {
  auto s = parse_scene(doc("figure-eight.scene"));
  ASSERT_EQ(s.curves.size(), 1u);
  auto f = build_curve(s, s.curves[0]);
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f.ids()[0], "f");
  EXPECT_EQ(f.components()[0].vertices[1].p, (Point2{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(s.verifies, (std::vector<VerifyDecl>{{"f", {}}}));
}

TEST(Parse, RepeatedStanzasAppend) {
  auto s = parse_scene(doc("axes.scene"));
  auto f = build_curve(s, s.curves[0]);
  EXPECT_EQ(f.ids(), (std::vector<std::string>{"axes.0", "axes.1"}));
  auto t = parse_scene(doc("three-tori.scene"));
  EXPECT_EQ(t.immersions[0].groups.size(), 3u);
  EXPECT_EQ(build_immersion(t.immersions[0]).component_count(), 3);
}

TEST(Parse, EmptyAndComments) {
  EXPECT_EQ(parse_scene(""), Scene{});
  EXPECT_EQ(parse_scene("# nothing\n\n   \n"), Scene{});
}

TEST(Parse, Errors) {
  expect_error("curve f on torus\npt s0 1/0 0\n", "invalid rational", 2);
  expect_error("curve f on torus\npt s0 x 1/2\n", "invalid rational", 2);
  expect_error("\ncurve f on nowhere\n", "dangling-reference", 2);
  expect_error("verify g\n", "dangling-reference", 1);
  expect_error("cycle c on M\n", "dangling-reference", 1);
  expect_error("pt s0 1/2 1/2\n", "syntax", 1);
  expect_error("curve f on torus\n", "syntax", 1);
  expect_error("surface torus\nsquares 1\n", "duplicate-name", 1);
  expect_error("frobnicate\n", "syntax", 1);
  expect_error("immersion3 M\ntri 0 0 0 1 0 0\n", "syntax", 2);
}

TEST(Parse, CustomSurface) {
  const std::string text =
      "surface T\nsquares 1\nglue s0.E s0.W same\nglue s0.N s0.S same\n"
      "curve c on T\npt s0 1/6 1/2\npt s0 1/2 1/2\npt s0 5/6 1/2\n";
  auto s = parse_scene(text);
  auto c = build_curve(s, s.curves[0]);
  EXPECT_EQ(c.ambient(), SquareComplex::torus());
  EXPECT_EQ(two_sidedness(c, 0), 0);
}

TEST(Parse, RoundTrip) {
  for (const char* name : {"figure-eight.scene", "axes.scene", "klein-core.scene", "three-tori.scene", "two-tori.scene"}) {
    auto s = parse_scene(doc(name));
    EXPECT_EQ(parse_scene(print_scene(s)), s) << name;
  }
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto s = generate(fuzz_config(seed % 2 ? "surfaces" : "curves", seed, true));
    EXPECT_EQ(parse_scene(print_scene(s)), s) << seed;
  }
}

TEST(Generate, Deterministic) {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.min_components = cfg.max_components = 1;
  cfg.max_segments = 12;
  const auto a = print_scene(generate(cfg));
  EXPECT_EQ(a, print_scene(generate(cfg)));
  cfg.seed = 43;
  EXPECT_NE(a, print_scene(generate(cfg)));
}

TEST(Generate, CatalogScenesAreCertified) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GeneratorConfig cfg;
    cfg.universe = "surfaces";
    cfg.ambient = "t3-tori";
    cfg.min_components = cfg.max_components = 3;
    cfg.seed = seed;
    auto s = generate(cfg);
    auto f = build_immersion(s.immersions[0]);
    EXPECT_TRUE(validate_general_position_3d(f).ok());
    EXPECT_EQ(f.component_count(), 3);
  }
}

TEST(Generate, BudgetExhausted) {
  GeneratorConfig cfg;
  cfg.min_segments = cfg.max_segments = 2;  // a two-vertex loop doubles back on itself
  cfg.budget = 1;
  try {
    generate(cfg);
    FAIL();
  } catch (const Violation& v) {
    EXPECT_EQ(v.code(), "budget-exhausted");
  }
}

TEST(Generate, EmbeddedHasNoDoublePoints) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg = fuzz_config("curves", seed, true);
    cfg.embedded = true;
    auto s = generate(cfg);
    EXPECT_TRUE(double_points(build_curve(s, s.curves[0])).points.empty());
  }
}

TEST(Report, TsvRowsAndDeterminism) {
  auto s = parse_scene(doc("klein-core.scene"));
  auto a = verify_target(s, s.verifies[0], "klein-core");
  EXPECT_EQ(to_tsv(a), "klein-core\t1\tcore\t1\t0\t1\tPASS\n");
  auto b = verify_target(s, s.verifies[0], "klein-core");
  EXPECT_EQ(to_tsv(a), to_tsv(b));
  auto t = parse_scene(doc("three-tori.scene"));
  auto r = verify_target(t, t.verifies[0], "three-tori");
  EXPECT_EQ(to_tsv(r).substr(0, to_tsv(r).find('\n')), "three-tori\t2\t[M]\t1\t1\t0\tPASS");
  EXPECT_EQ(r.triple_points, 1u);
  EXPECT_EQ(r.double_points, 3u);
}

TEST(Report, ExplainNamesTheDoublePoint) {
  auto s = parse_scene(doc("figure-eight.scene"));
  auto text = explain(verify_target(s, s.verifies[0], "figure-eight"));
  EXPECT_NE(text.find("double point s0 (3/8, 3/8) preimages"), std::string::npos) << text;
  EXPECT_NE(text.find("component f: 2 double-point preimages"), std::string::npos) << text;
}

TEST(Report, ExplainEmptyAndInjectedFailure) {
  HerbertReport empty{"nothing", {}, 0, 0, {}, 0};
  EXPECT_NE(explain(empty).find("no intersections"), std::string::npos);
  HerbertReport bad{"injected", {{1, "c", 1, 0, 0, ""}}, 0, 0, {}, 0};
  EXPECT_FALSE(bad.pass());
  const auto text = explain(bad);
  EXPECT_NE(text.find("! r=1 c: 1 = 0 + 0  FAIL"), std::string::npos) << text;
  EXPECT_NE(text.find("lhs 1 but mu + e gives 0"), std::string::npos) << text;
}

TEST(Report, DegenerateScenesGetNoVerdict) {
  const std::pair<const char*, const char*> cases[] = {{"degenerate/tangency.scene", "tangency"},
                                                       {"degenerate/triple-point.scene", "triple-point"},
                                                       {"degenerate/vertex-on-edge.scene", "vertex-on-edge"},
                                                       {"degenerate/coplanar-overlap.scene", "coplanar-overlap"}};
  for (const auto& [file, code] : cases) {
    auto s = parse_scene(doc(file));
    try {
      verify_target(s, s.verifies[0], file);
      ADD_FAILURE() << file << " produced a verdict";
    } catch (const Violation& v) {
      EXPECT_EQ(v.code(), code) << file;
    }
  }
}
