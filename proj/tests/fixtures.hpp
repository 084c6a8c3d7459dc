#pragma once

// Small hand-built scenes shared by the unit tests.

#include <memory>

#include "multipoint/curves2d.hpp"

namespace fixtures {

using namespace multipoint;

inline Rational q(long n, long d = 1) { return Rational(n, d); }
inline Point2 P(Rational x, Rational y) { return {std::move(x), std::move(y)}; }

inline std::shared_ptr<const SquareComplex> torus() { return std::make_shared<SquareComplex>(SquareComplex::torus()); }
inline std::shared_ptr<const SquareComplex> klein() {
  return std::make_shared<SquareComplex>(SquareComplex::klein_bottle());
}
inline std::shared_ptr<const SquareComplex> genus2() {
  return std::make_shared<SquareComplex>(SquareComplex::genus_two());
}

inline std::vector<CurveVertex> horizontal(const Rational& y, int square = 0) {
  return {{square, P(q(1, 6), y)}, {square, P(q(1, 2), y)}, {square, P(q(5, 6), y)}};
}

inline std::vector<CurveVertex> vertical(const Rational& x, int square = 0) {
  return {{square, P(x, q(1, 8))}, {square, P(x, q(3, 8))}, {square, P(x, q(2, 3))}};
}

/// Two lobes inside one square, crossing once at (3/8, 3/8).
inline std::vector<CurveVertex> figure_eight_loop() {
  return {{0, P(q(1, 4), q(1, 4))}, {0, P(q(1, 2), q(1, 2))}, {0, P(q(1, 2), q(1, 4))}, {0, P(q(1, 4), q(1, 2))}};
}

inline ImmersedMulticurve figure_eight() { return ImmersedMulticurve::from_vertices(torus(), {figure_eight_loop()}); }

inline ImmersedMulticurve torus_axes() {
  return ImmersedMulticurve::from_vertices(torus(), {horizontal(q(1, 2)), vertical(q(1, 3))}, {"a", "b"});
}

inline ImmersedMulticurve klein_core() {
  return ImmersedMulticurve::from_vertices(klein(), {horizontal(q(1, 2))}, {"core"});
}

}  // namespace fixtures
