#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fixtures3d.hpp"
#include "multipoint/bordism.hpp"

using namespace multipoint;
using fixtures::P;
using fixtures::q;

namespace {

std::vector<CurveVertex> shifted(std::vector<CurveVertex> loop, const Point2& by) {
  for (auto& v : loop) v.p = v.p + by;
  return loop;
}

// Proper crossings among polylines that stay inside one square, by the
// orientation test on every segment pair.
int proper_crossings(const std::vector<CurveVertex>& a, const std::vector<CurveVertex>& b) {
  auto orient = [](const Point2& o, const Point2& p, const Point2& r) { return cross(p - o, r - o).sign(); };
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Point2 &p1 = a[i].p, &p2 = a[(i + 1) % a.size()].p;
      const Point2 &q1 = b[j].p, &q2 = b[(j + 1) % b.size()].p;
      if (orient(p1, p2, q1) * orient(p1, p2, q2) < 0 && orient(q1, q2, p1) * orient(q1, q2, p2) < 0) ++n;
    }
  return n;
}

ImmersedMulticurve one(std::vector<CurveVertex> loop, std::string id) {
  return ImmersedMulticurve::from_vertices(fixtures::torus(), {std::move(loop)}, {std::move(id)});
}

const Point3 kCorner{q(1, 4), q(1, 4), q(1, 4)};

}  // namespace

TEST(Monoid, EmptyIsIdentity) {
  auto f = make_class(fixtures::figure_eight());
  auto sum = add(f, empty_class());
  EXPECT_EQ(sum.as<ImmersedMulticurve>(), f.as<ImmersedMulticurve>());
  EXPECT_EQ(add(empty_class(), f).as<ImmersedMulticurve>(), f.as<ImmersedMulticurve>());
}

TEST(Monoid, AxesAsSum) {
  auto a = make_class(one(fixtures::horizontal(q(1, 2)), "a"));
  auto b = make_class(one(fixtures::vertical(q(1, 3)), "b"));
  auto sum = add(a, b);
  EXPECT_EQ(sum.as<ImmersedMulticurve>(), fixtures::torus_axes());
  auto other = add(b, a);
  EXPECT_EQ(other.size(), 2u);
}

TEST(Monoid, OverlapIsRejected) {
  auto f = make_class(fixtures::figure_eight());
  EXPECT_THROW(add(f, f), Violation);
}

TEST(InternalProduct, AxesMeetOnce) {
  auto a = make_class(one(fixtures::horizontal(q(1, 2)), "a"));
  auto b = make_class(one(fixtures::vertical(q(1, 3)), "b"));
  auto pt = internal_product(a, b);
  ASSERT_TRUE(pt.holds<PointSet2>());
  ASSERT_EQ(pt.size(), 1u);
  EXPECT_EQ(pt.as<PointSet2>().points[0], (AmbientPoint{0, P(q(1, 3), q(1, 2))}));
  EXPECT_EQ(pt.structure[0], (std::vector<std::string>{"a", "b"}));
}

TEST(InternalProduct, ParallelLoopsAndUnit) {
  auto a = make_class(one(fixtures::horizontal(q(1, 2)), "a"));
  auto c = make_class(one(fixtures::horizontal(q(1, 4)), "c"));
  EXPECT_TRUE(internal_product(a, c).empty());
  auto unit = psi_r(a, 0);
  EXPECT_TRUE(unit.holds<IdentityMarker>());
  EXPECT_EQ(internal_product(unit, a).as<ImmersedMulticurve>(), a.as<ImmersedMulticurve>());
  EXPECT_EQ(internal_product(a, unit).as<ImmersedMulticurve>(), a.as<ImmersedMulticurve>());
}

TEST(InternalProduct, TwoToriMeetInACircle) {
  auto z = make_class(TriangulatedImmersion3::single(fixtures3d::z_torus(), "Z"));
  auto y = make_class(TriangulatedImmersion3::single(fixtures3d::y_torus(), "Y"));
  auto c = internal_product(z, y);
  ASSERT_TRUE(c.holds<CurveSet3>());
  ASSERT_EQ(c.size(), 1u);
  for (const auto& s : c.as<CurveSet3>().circles[0]) {
    EXPECT_EQ(s.a.y.frac(), q(1, 4));
    EXPECT_EQ(s.a.z.frac(), q(1, 4));
  }
  EXPECT_EQ(curve_class_H1(c.as<CurveSet3>().circles[0]), (Bits3{1, 0, 0}));
}

TEST(Pullback, CurveAlongCurve) {
  auto a = make_class(one(fixtures::horizontal(q(1, 2)), "a"));
  auto b = make_class(one(fixtures::vertical(q(1, 3)), "b"));
  auto pts = pullback_class(a, b);
  ASSERT_TRUE(pts.holds<CirclePoints>());
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts.as<CirclePoints>().points[0].component, 0);
  EXPECT_TRUE(pullback_class(a, empty_class()).empty());
}

TEST(Pullback, TorusAlongTorus) {
  auto g = make_class(TriangulatedImmersion3::single(fixtures3d::z_torus(), "G"));
  auto f = make_class(TriangulatedImmersion3::single(fixtures3d::y_torus(), "F"));
  auto c = pullback_class(g, f);
  ASSERT_TRUE(c.holds<MeshCurves>());
  std::vector<Segment3> image;
  for (const auto& piece : c.as<MeshCurves>().pieces) {
    EXPECT_EQ(piece.local.a.z, q(1, 4));
    EXPECT_EQ(piece.local.a.y.frac(), q(1, 4));
    image.push_back(piece.local);
  }
  EXPECT_EQ(curve_class_H1(image), (Bits3{1, 0, 0}));
}

TEST(Psi, DispatchAndRanges) {
  auto fig = make_class(fixtures::figure_eight());
  EXPECT_EQ(psi_r(fig, 1).as<ImmersedMulticurve>(), fixtures::figure_eight());
  auto d = psi_r(fig, 2);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.as<PointSet2>().points[0], (AmbientPoint{0, P(q(3, 8), q(3, 8))}));
  auto beyond = psi_r(fig, 3);
  EXPECT_TRUE(beyond.empty());
  EXPECT_EQ(beyond.note, "generically-empty-guaranteed");
  EXPECT_TRUE(psi_r(make_class(fixtures::klein_core()), 2).empty());

  auto three = make_class(fixtures3d::three_tori());
  auto t = psi_r(three, 3);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.as<PointSet3>().points[0], kCorner);
  EXPECT_EQ(t.structure[0], (std::vector<std::string>{"M.0", "M.1", "M.2"}));
  EXPECT_EQ(psi_r(three, 2).size(), 3u);
  EXPECT_EQ(psi_r(three, 4).note, "generically-empty-guaranteed");
}

TEST(Mu, SourcePoints) {
  auto fig = make_class(fixtures::figure_eight());
  EXPECT_EQ(mu_r(fig, 2).size(), 2u);
  EXPECT_TRUE(mu_r(make_class(fixtures::klein_core()), 2).empty());
  auto m3 = mu_r(make_class(fixtures3d::three_tori()), 3);
  ASSERT_EQ(m3.size(), 3u);
  for (const auto& p : m3.as<MeshPoints>().points) EXPECT_EQ(TriangulatedImmersion3::image(p), kCorner);
}

TEST(EulerClass, Examples) {
  auto k = euler_class(make_class(fixtures::klein_core()));
  EXPECT_EQ(k.at("core"), 1);
  auto axes = euler_class(make_class(fixtures::torus_axes()));
  EXPECT_EQ(axes.at("a"), 0);
  EXPECT_EQ(axes.at("b"), 0);
  for (const auto& [name, bit] : euler_class(make_class(fixtures3d::three_tori())).bits) EXPECT_EQ(bit, 0) << name;
}

TEST(Naturality, ClosedForm) {
  auto g = TriangulatedImmersion3::single(fixtures3d::z_torus(), "G");
  auto f = TriangulatedImmersion3({fixtures3d::y_torus(), fixtures3d::x_torus()}, "F");
  auto check = check_naturality(g, f);
  EXPECT_TRUE(check.holds) << check.lhs << " vs " << check.rhs;
  auto lhs = pullback_class(make_class(g), psi_r(make_class(f), 2));
  ASSERT_EQ(lhs.size(), 1u);
  EXPECT_EQ(TriangulatedImmersion3::image(lhs.as<MeshPoints>().points[0]), kCorner);
}

TEST(Naturality, EmbeddedSidesEmpty) {
  auto g = TriangulatedImmersion3::single(fixtures3d::z_torus(), "G");
  auto f = TriangulatedImmersion3::single(fixtures3d::y_torus(), "F");
  auto check = check_naturality(g, f);
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.lhs, "{}");
}

TEST(Cartan, TwoFigureEights) {
  auto first = fixtures::figure_eight_loop();
  auto second = shifted(first, P(q(-4, 17), q(-3, 19)));
  ASSERT_EQ(proper_crossings(first, second), 2);
  auto f = one(first, "f");
  auto g = one(second, "g");
  auto check = check_cartan(f, g, 2);
  EXPECT_TRUE(check.holds) << check.lhs << " vs " << check.rhs;
  EXPECT_EQ(double_points(union_curves(f, g)).points.size(), 1u + 1u + 2u);
}

TEST(Cartan, DisjointEmbeddings) {
  auto f = one(fixtures::horizontal(q(1, 2)), "f");
  auto g = one(fixtures::horizontal(q(1, 4)), "g");
  auto check = check_cartan(f, g, 2);
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.lhs, "{} | {} | {}");
}

TEST(Cartan, ThreeToriSplit) {
  auto f = fixtures3d::two_tori();
  auto g = TriangulatedImmersion3::single(fixtures3d::x_torus(), "X");
  auto r3 = check_cartan(f, g, 3);
  EXPECT_TRUE(r3.holds) << r3.lhs << " vs " << r3.rhs;
  EXPECT_EQ(r3.lhs, "{} | {(1/4, 1/4, 1/4)} | {} | {}");
  auto r2 = check_cartan(f, g, 2);
  EXPECT_TRUE(r2.holds) << r2.lhs << " vs " << r2.rhs;
}

TEST(MuTower, ThreeToriAndEmbedded) {
  auto check = check_mu_tower(fixtures3d::three_tori());
  EXPECT_TRUE(check.holds) << check.lhs << " vs " << check.rhs;
  auto m3 = mu_r(make_class(fixtures3d::three_tori()), 3);
  EXPECT_EQ(m3.size(), 3u);
  auto flat = check_mu_tower(TriangulatedImmersion3::single(fixtures3d::z_torus()));
  EXPECT_TRUE(flat.holds);
  EXPECT_EQ(flat.lhs, "{}");
}
