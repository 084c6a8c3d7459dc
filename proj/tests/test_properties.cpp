#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace multipoint;
using namespace oracles;

namespace {

const char* kAmbients[] = {"torus", "klein", "genus2"};

}  // namespace

TEST(Oracle, IntersectionForms) {
  EXPECT_EQ(intersection_form(build_surface(Scene{}, "torus")), (Mat2{{{0, 1}, {1, 0}}}));
  EXPECT_EQ(intersection_form(build_surface(Scene{}, "klein")), (Mat2{{{1, 1}, {1, 0}}}));
}

TEST(Oracle, BasisLoopsAgainstLibrary) {
  for (const char* name : {"torus", "klein"}) {
    auto surface = build_surface(Scene{}, name);
    auto core = ImmersedMulticurve::from_vertices(
        surface, {{{0, {Rational(1, 6), Rational(1, 3)}}, {0, {Rational(1, 2), Rational(1, 3)}}, {0, {Rational(3, 4), Rational(1, 3)}}}});
    auto x = *crossing_vector(core, 0);
    EXPECT_EQ(pairing_mod2(core, 0, core), form_pairing(intersection_form(surface), x, x));
  }
}

TEST(Property, PairingMatchesIntersectionForm) {
  int checked = 0;
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    const char* ambient = seed % 2 ? "klein" : "torus";
    auto f = random_curve(seed, ambient, 1, false);
    auto x = crossing_vector(f, 0);
    if (!x) continue;
    EXPECT_EQ(pairing_mod2(f, 0, f), form_pairing(intersection_form(f.ambient_ptr()), *x, *x)) << seed;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Property, SelfPairingIsEulerOnEmbeddedCurves) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = random_curve(300 + seed, kAmbients[seed % 3], 1 + static_cast<int>(seed % 2), true);
    for (int c = 0; c < static_cast<int>(f.size()); ++c) EXPECT_EQ(pairing_mod2(f, c, f), two_sidedness(f, c)) << seed;
  }
}

TEST(Property, PushoffSideAndEpsilonDoNotMatter) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = random_curve(400 + seed, kAmbients[seed % 3], 1, false);
    const int left = pairing_mod2(f, 0, f);
    EXPECT_EQ(pairing_mod2(f, 0, f, PushSide::right), left) << seed;
    EXPECT_EQ(pairing_mod2(f, 0, f, PushSide::left, Rational(1, 4096)), left) << seed;
  }
}

TEST(Property, EmbeddingsHaveNoHigherMultiplePoints) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = make_class(random_curve(500 + seed, kAmbients[seed % 3], 2, true));
    EXPECT_TRUE(psi_r(f, 2).empty()) << seed;
    EXPECT_TRUE(psi_r(f, 3).empty()) << seed;
    EXPECT_EQ(psi_r(f, 1).as<ImmersedMulticurve>(), f.as<ImmersedMulticurve>());
  }
}

TEST(Property, CartanOnCurvePairs) {
  int checked = 0;
  for (std::uint64_t seed = 600; checked < 20 && seed < 800; seed += 2) {
    const char* ambient = kAmbients[checked % 3];
    auto f = random_curve(seed, ambient, 1, false), g = random_curve(seed + 1, ambient, 1, false);
    try {
      require_certified(union_curves(f, g));
    } catch (const Violation&) {
      continue;
    }
    auto c = check_cartan(f, g, 2);
    EXPECT_TRUE(c.holds) << seed << ": " << c.lhs << " vs " << c.rhs;
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(Property, SurfaceLaws) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto m = random_tori(900 + seed, 3);
    auto nat = check_naturality(groups(m, 0, 1, "g"), groups(m, 1, 3, "f"));
    EXPECT_TRUE(nat.holds) << seed << ": " << nat.lhs << " vs " << nat.rhs;
    for (int r : {2, 3}) {
      auto c = check_cartan(groups(m, 0, 2, "f"), groups(m, 2, 3, "g"), r);
      EXPECT_TRUE(c.holds) << seed << " r=" << r << ": " << c.lhs << " vs " << c.rhs;
    }
    auto t = check_mu_tower(m);
    EXPECT_TRUE(t.holds) << seed << ": " << t.lhs << " vs " << t.rhs;
  }
}

TEST(Property, HerbertOnRandomScenes) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Scene s = generate(fuzz_config(seed % 4 == 3 ? "surfaces" : "curves", seed, true));
    for (const auto& v : verify_targets(s)) {
      auto rep = verify_target(s, v, "seed-" + std::to_string(seed));
      EXPECT_TRUE(rep.pass()) << to_tsv(rep);
    }
  }
}
