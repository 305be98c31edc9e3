#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "bodymap_synth/error.hpp"
#include "bodymap_synth/geometry.hpp"

using namespace bms;

namespace {

// Direct Bernstein sum, written out by degree.
Point bernstein(const std::vector<Point>& p, double t) {
  const double u = 1.0 - t;
  if (p.size() == 3) {
    return {u * u * p[0].x + 2 * u * t * p[1].x + t * t * p[2].x,
            u * u * p[0].y + 2 * u * t * p[1].y + t * t * p[2].y};
  }
  return {u * u * u * p[0].x + 3 * u * u * t * p[1].x + 3 * u * t * t * p[2].x + t * t * t * p[3].x,
          u * u * u * p[0].y + 3 * u * u * t * p[1].y + 3 * u * t * t * p[2].y + t * t * t * p[3].y};
}

std::vector<Point> random_controls(RandomStream& s, int degree) {
  std::vector<Point> p;
  for (int i = 0; i <= degree; ++i) {
    p.push_back({1000.0 * s.uniform01(), 800.0 * s.uniform01()});
  }
  return p;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("distance_to_segment") {
  CHECK(distance_to_segment({0, 1}, {-1, 0}, {1, 0}) == 1.0);
  CHECK(distance_to_segment({3, 0}, {-1, 0}, {1, 0}) == 2.0);
  CHECK(distance_to_segment({-4, 3}, {0, 0}, {5, 0}) == 5.0);
  CHECK(distance_to_segment({3, 4}, {0, 0}, {0, 0}) == 5.0);
}

TEST_CASE("polyline length and distance") {
  const Polyline line{{{0, 0}, {3, 4}, {3, 10}}};
  CHECK(line.length() == 11.0);
  CHECK(Polyline{}.length() == 0.0);
  CHECK(distance_to_polyline({0, 4}, line) == doctest::Approx(2.4));
  CHECK(distance_to_polyline({5, 8}, line) == 2.0);
}

TEST_CASE("Bezier construction") {
  CHECK_THROWS_AS(BezierCurve({{0, 0}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(BezierCurve({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}), DomainError);
  CHECK_THROWS_AS(BezierCurve({{0, 0}, {std::nan(""), 1}, {2, 2}}), DomainError);
  CHECK(BezierCurve({{0, 0}, {1, 1}, {2, 2}}).degree() == 2);
  CHECK(BezierCurve({{0, 0}, {1, 1}, {2, 2}, {3, 3}}).degree() == 3);
}

TEST_CASE("eval_bezier") {
  const BezierCurve quad({{0, 0}, {1, 2}, {2, 0}});
  CHECK(eval_bezier(quad, 0.5) == Point{1, 1});
  const BezierCurve cubic({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(eval_bezier(cubic, 0.5) == Point{0.5, 0.75});
  CHECK_THROWS_AS(eval_bezier(quad, -0.01), DomainError);
  CHECK_THROWS_AS(eval_bezier(quad, 1.01), DomainError);

  SUBCASE("endpoints are exact and interior matches the Bernstein sum") {
    RandomStream s = derive_stream(3, "bezier");
    for (int i = 0; i < 200; ++i) {
      const auto p = random_controls(s, 2 + i % 2);
      const BezierCurve c(p);
      CHECK(eval_bezier(c, 0.0) == p.front());
      CHECK(eval_bezier(c, 1.0) == p.back());
      const double t = s.uniform01();
      CHECK(distance(eval_bezier(c, t), bernstein(p, t)) < 1e-9);
    }
  }
}

TEST_CASE("flatten") {
  SUBCASE("a curve with controls on its chord is one segment") {
    const Polyline line = flatten(BezierCurve({{0, 0}, {5, 5}, {10, 10}}));
    REQUIRE(line.vertices.size() == 2);
    CHECK(line.vertices[0] == Point{0, 0});
    CHECK(line.vertices[1] == Point{10, 10});
  }

  SUBCASE("endpoints are exact, no repeated vertices") {
    RandomStream s = derive_stream(4, "flatten");
    for (int i = 0; i < 200; ++i) {
      const auto p = random_controls(s, 2 + i % 2);
      const Polyline line = flatten(BezierCurve(p));
      REQUIRE(line.vertices.size() >= 2);
      CHECK(line.vertices.front() == p.front());
      CHECK(line.vertices.back() == p.back());
      for (std::size_t k = 1; k < line.vertices.size(); ++k) {
        CHECK(line.vertices[k] != line.vertices[k - 1]);
      }
    }
  }

  SUBCASE("dense curve samples stay within tolerance of the polyline") {
    RandomStream s = derive_stream(5, "flatten");
    for (const double tol : {1.0, 0.25, 0.05}) {
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const BezierCurve c(random_controls(s, 2 + i % 2));
        const Polyline line = flatten(c, tol);
        for (int k = 0; k <= 1000; ++k) {
          worst = std::max(worst, distance_to_polyline(eval_bezier(c, k / 1000.0), line));
        }
      }
      CHECK(worst <= tol);
    }
  }

  SUBCASE("polyline vertices lie on the curve") {
    // Subdivision vertices are de Casteljau points; each must be (numerically)
    // on the curve at some parameter. Check against a fine parameter scan.
    const BezierCurve c({{100, 100}, {400, 700}, {700, -200}, {900, 500}});
    const Polyline line = flatten(c);
    for (const Point& v : line.vertices) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k <= 200000; ++k) {
        best = std::min(best, distance(v, eval_bezier(c, k / 200000.0)));
      }
      CHECK(best < 0.05);
    }
  }

  SUBCASE("tighter tolerance never gives fewer vertices") {
    const BezierCurve c({{0, 0}, {300, 600}, {600, -300}, {900, 300}});
    std::size_t previous = 0;
    for (const double tol : {4.0, 1.0, 0.25, 0.05}) {
      const std::size_t n = flatten(c, tol).vertices.size();
      CHECK(n >= previous);
      previous = n;
    }
  }
}

}  // TEST_SUITE
