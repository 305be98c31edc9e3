#include <cmath>

#include "doctest.h"

#include "bodymap_synth/bodymap.hpp"
#include "bodymap_synth/error.hpp"
#include "bodymap_synth/primitives.hpp"

using namespace bms;

namespace {

// Independent floor-pixel lookup, not SampleDomain::contains.
bool pixel_in(const BodyMask& mask, const RegionPartition* partition, int region, Point p) {
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  if (!(fx >= 0 && fy >= 0 && fx < mask.width() && fy < mask.height())) {
    return false;
  }
  const int x = static_cast<int>(fx);
  const int y = static_cast<int>(fy);
  return mask.inside(x, y) && (partition == nullptr || partition->region_at(x, y) == region);
}

void check_line_bounds(const BezierCurve& c, const LineParams& params) {
  const auto cp = c.control_points();
  REQUIRE((c.degree() == 2 || c.degree() == 3));
  CHECK(distance(c.start(), c.end()) <= params.endpoint_radius);
  CHECK(c.start() != c.end());
  for (int k = 1; k < c.degree(); ++k) {
    CHECK(distance(cp[static_cast<std::size_t>(k)], chord_point(c.start(), c.end(), k, c.degree())) <=
          params.control_deviation);
  }
}

}  // namespace

TEST_SUITE("primitives") {

TEST_CASE("kind names") {
  for (const PrimitiveKind k : kAllPrimitiveKinds) {
    CHECK(parse_primitive_kind(to_string(k)) == k);
  }
  CHECK(to_string(PrimitiveKind::DashedLine) == "dashed_line");
  CHECK_THROWS_AS(parse_primitive_kind("circle"), ConfigError);
}

TEST_CASE("parameter checks") {
  CHECK_NOTHROW(check_params(LineParams{}));
  CHECK_THROWS_AS(check_params(LineParams{0.0, 30.0}), ConfigError);
  CHECK_THROWS_AS(check_params(LineParams{200.0, -1.0}), ConfigError);
  CHECK_THROWS_AS(check_params(ClusterParams{0, 5, 20.0}), ConfigError);
  CHECK_THROWS_AS(check_params(ClusterParams{6, 5, 20.0}), ConfigError);
  CHECK_THROWS_AS(check_params(ClusterParams{3, 20, -2.0}), ConfigError);
  CHECK_THROWS_AS(check_params(DashPattern{0.0, 8.0}), ConfigError);
  CHECK_THROWS_AS(check_params(DashPattern{12.0, 0.0}), ConfigError);
}

TEST_CASE("chord points") {
  CHECK(chord_point({0, 0}, {30, 0}, 1, 3) == Point{10, 0});
  CHECK(chord_point({0, 0}, {30, 0}, 2, 3) == Point{20, 0});
  CHECK(chord_point({2, 4}, {6, 8}, 1, 2) == Point{4, 6});
}

TEST_CASE("lines over the whole mask") {
  const BodyMask mask = default_mask(1000, 800, 40);
  const SampleDomain domain = SampleDomain::whole(mask);
  const LineParams params;
  RandomStream s = derive_stream(21, "lines");
  int quadratic = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const LinePrimitive line = gen_line(domain, s, params);
    check_line_bounds(line.curve, params);
    quadratic += line.curve.degree() == 2 ? 1 : 0;
    for (const Point& v : flatten(line.curve).vertices) {
      REQUIRE(pixel_in(mask, nullptr, -1, v));
    }
  }
  CHECK(static_cast<double>(quadratic) / n == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("lines inside every region") {
  const BodyMask mask = default_mask(1000, 800, 40);
  const RegionPartition partition = build_partition(mask);
  const LineParams params;
  RandomStream s = derive_stream(22, "region-lines");
  for (int r = 0; r < kRegionCount; ++r) {
    const SampleDomain domain = SampleDomain::region(mask, partition, r);
    for (int i = 0; i < 100; ++i) {
      const DashedLinePrimitive line = gen_dashed_line(domain, s, params, DashPattern{});
      check_line_bounds(line.curve, params);
      for (const Point& v : flatten(line.curve).vertices) {
        REQUIRE(pixel_in(mask, &partition, r, v));
      }
      // Segments are probed too, not only vertices.
      const Polyline poly = flatten(line.curve);
      for (std::size_t k = 1; k < poly.vertices.size(); ++k) {
        const Point a = poly.vertices[k - 1];
        const Point b = poly.vertices[k];
        for (int j = 0; j <= 16; ++j) {
          const double t = j / 16.0;
          REQUIRE(pixel_in(mask, &partition, r, a + t * (b - a)));
        }
      }
    }
  }
}

TEST_CASE("dashed and solid lines consume the stream identically") {
  const BodyMask mask = default_mask(1000, 800, 40);
  const SampleDomain domain = SampleDomain::whole(mask);
  RandomStream a = derive_stream(23, "same");
  RandomStream b = derive_stream(23, "same");
  for (int i = 0; i < 50; ++i) {
    const LinePrimitive solid = gen_line(domain, a, LineParams{});
    const DashedLinePrimitive dashed = gen_dashed_line(domain, b, LineParams{}, DashPattern{5, 5});
    CHECK(solid.curve == dashed.curve);
    CHECK(dashed.dash == DashPattern{5, 5});
  }
}

TEST_CASE("clusters") {
  const BodyMask mask = default_mask(1000, 800, 40);
  const RegionPartition partition = build_partition(mask);
  const ClusterParams params;
  RandomStream s = derive_stream(24, "clusters");
  int smallest = 100;
  int largest = 0;
  for (int r = 0; r < kRegionCount; ++r) {
    const SampleDomain domain = SampleDomain::region(mask, partition, r);
    for (int i = 0; i < 200; ++i) {
      const PointClusterPrimitive c = gen_cluster(domain, s, params, 3.0);
      const int n = static_cast<int>(c.points.size());
      REQUIRE(n >= 3);
      REQUIRE(n <= 20);
      smallest = std::min(smallest, n);
      largest = std::max(largest, n);
      CHECK(c.point_radius == 3.0);
      for (std::size_t k = 0; k < c.points.size(); ++k) {
        REQUIRE(pixel_in(mask, &partition, r, c.points[k]));
        if (k > 0) {
          REQUIRE(distance(c.points[k], c.points[k - 1]) <= 20.0);
        }
      }
    }
  }
  CHECK(smallest == 3);
  CHECK(largest == 20);
}

TEST_CASE("governing vertices") {
  const PointClusterPrimitive cluster{{{1, 2}, {3, 4}}, 3.0};
  CHECK(governing_vertices(cluster) == cluster.points);
  const BezierCurve curve({{0, 0}, {50, 80}, {100, 0}});
  CHECK(governing_vertices(LinePrimitive{curve}) == flatten(curve).vertices);
  CHECK(kind_of(Primitive{cluster}) == PrimitiveKind::PointCluster);
}

TEST_CASE("same stream, same primitive") {
  const BodyMask mask = default_mask(1000, 800, 40);
  const SampleDomain domain = SampleDomain::whole(mask);
  RandomStream a = derive_stream(25, "repeat");
  RandomStream b = derive_stream(25, "repeat");
  CHECK(gen_cluster(domain, a, ClusterParams{}, 3.0) == gen_cluster(domain, b, ClusterParams{}, 3.0));
  CHECK(gen_line(domain, a, LineParams{}) == gen_line(domain, b, LineParams{}));
}

TEST_CASE("impossible domains fail with GenerationFailed") {
  std::vector<std::uint8_t> inside(1000 * 1000, 0);
  inside.front() = 1;
  inside.back() = 1;
  const BodyMask sparse(1000, 1000, std::move(inside));
  const SampleDomain domain = SampleDomain::whole(sparse);
  const GenerationLimits limits{5, 5, kDefaultFlattenTolerance};
  RandomStream s = derive_stream(26, "fail");
  CHECK_THROWS_AS(gen_line(domain, s, LineParams{}, limits), GenerationFailed);
  CHECK_THROWS_AS(gen_cluster(domain, s, ClusterParams{}, 3.0, limits), GenerationFailed);
}

}  // TEST_SUITE
