#include "bodymap_synth/primitives.hpp"

#include <cmath>
#include <string>

#include "bodymap_synth/error.hpp"

namespace bms {

std::string_view to_string(PrimitiveKind kind) noexcept {
  switch (kind) {
    case PrimitiveKind::Line:
      return "line";
    case PrimitiveKind::DashedLine:
      return "dashed_line";
    case PrimitiveKind::PointCluster:
      return "point_cluster";
  }
  return "unknown";
}

PrimitiveKind parse_primitive_kind(std::string_view name) {
  for (const PrimitiveKind kind : kAllPrimitiveKinds) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw ConfigError("unknown primitive kind '" + std::string(name) +
                    "' (expected line, dashed_line or point_cluster)");
}

void check_params(const LineParams& params) {
  if (!(params.endpoint_radius > 0.0) || !std::isfinite(params.endpoint_radius)) {
    throw ConfigError("endpoint_radius must be positive");
  }
  if (!(params.control_deviation >= 0.0) || !std::isfinite(params.control_deviation)) {
    throw ConfigError("control_deviation must be non-negative");
  }
}

void check_params(const ClusterParams& params) {
  if (params.n_min < 1 || params.n_min > params.n_max) {
    throw ConfigError("cluster size range must satisfy 1 <= n_min <= n_max");
  }
  if (!(params.step_radius >= 0.0) || !std::isfinite(params.step_radius)) {
    throw ConfigError("step_radius must be non-negative");
  }
}

void check_params(const DashPattern& dash) {
  if (!(dash.on_length > 0.0) || !(dash.off_length > 0.0) || !std::isfinite(dash.on_length) ||
      !std::isfinite(dash.off_length)) {
    throw ConfigError("dash on/off lengths must be positive");
  }
}

PrimitiveKind kind_of(const Primitive& primitive) noexcept {
  return static_cast<PrimitiveKind>(primitive.index());
}

Point chord_point(Point start, Point end, int k, int degree) noexcept {
  const double f = static_cast<double>(k) / static_cast<double>(degree);
  return {start.x + f * (end.x - start.x), start.y + f * (end.y - start.y)};
}

std::vector<Point> governing_vertices(const Primitive& primitive, double tolerance) {
  if (const auto* cluster = std::get_if<PointClusterPrimitive>(&primitive)) {
    return cluster->points;
  }
  const BezierCurve& curve = std::holds_alternative<LinePrimitive>(primitive)
                                 ? std::get<LinePrimitive>(primitive).curve
                                 : std::get<DashedLinePrimitive>(primitive).curve;
  return flatten(curve, tolerance).vertices;
}

namespace {

constexpr double kSegmentProbeStep = 0.5;

// Probes the segment every half pixel (both ends included).
bool segment_inside(const SampleDomain& domain, Point a, Point b) {
  const double len = distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / kSegmentProbeStep)));
  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    if (!domain.contains({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)})) {
      return false;
    }
  }
  return true;
}

Point sample_in_disk_within(const SampleDomain& domain, RandomStream& stream, Point center, double radius,
                            int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    const Point p = sample_in_disk(stream, center, radius);
    if (domain.contains(p)) {
      return p;
    }
  }
  throw SamplingExhausted("no point inside the domain within radius " + std::to_string(radius));
}

BezierCurve draw_curve(const SampleDomain& domain, RandomStream& stream, const LineParams& params,
                       const GenerationLimits& limits) {
  for (int attempt = 0; attempt < limits.max_retries; ++attempt) {
    try {
      const Point start = sample_point(domain, stream, limits.max_point_tries);
      Point end = start;
      for (int i = 0; i < limits.max_point_tries && end == start; ++i) {
        end = sample_in_disk_within(domain, stream, start, params.endpoint_radius, limits.max_point_tries);
      }
      if (end == start) {
        continue;
      }
      const int degree = static_cast<int>(stream.uniform_int(2, 3));
      std::vector<Point> control;
      control.reserve(static_cast<std::size_t>(degree) + 1);
      control.push_back(start);
      for (int k = 1; k < degree; ++k) {
        control.push_back(sample_in_disk(stream, chord_point(start, end, k, degree), params.control_deviation));
      }
      control.push_back(end);
      BezierCurve curve(std::move(control));

      const Polyline line = flatten(curve, limits.flatten_tolerance);
      bool inside = true;
      for (std::size_t i = 1; i < line.vertices.size() && inside; ++i) {
        inside = segment_inside(domain, line.vertices[i - 1], line.vertices[i]);
      }
      if (inside) {
        return curve;
      }
    } catch (const SamplingExhausted&) {
      // fall through to the next whole-primitive attempt
    }
  }
  throw GenerationFailed("line generation failed after " + std::to_string(limits.max_retries) + " attempts");
}

}  // namespace

LinePrimitive gen_line(const SampleDomain& domain, RandomStream& stream, const LineParams& params,
                       const GenerationLimits& limits) {
  check_params(params);
  return LinePrimitive{draw_curve(domain, stream, params, limits)};
}

DashedLinePrimitive gen_dashed_line(const SampleDomain& domain, RandomStream& stream, const LineParams& params,
                                    const DashPattern& dash, const GenerationLimits& limits) {
  check_params(params);
  check_params(dash);
  return DashedLinePrimitive{draw_curve(domain, stream, params, limits), dash};
}

PointClusterPrimitive gen_cluster(const SampleDomain& domain, RandomStream& stream, const ClusterParams& params,
                                  double point_radius, const GenerationLimits& limits) {
  check_params(params);
  for (int attempt = 0; attempt < limits.max_retries; ++attempt) {
    try {
      const auto n = static_cast<std::size_t>(stream.uniform_int(params.n_min, params.n_max));
      std::vector<Point> points;
      points.reserve(n);
      points.push_back(sample_point(domain, stream, limits.max_point_tries));
      while (points.size() < n) {
        points.push_back(
            sample_in_disk_within(domain, stream, points.back(), params.step_radius, limits.max_point_tries));
      }
      return PointClusterPrimitive{std::move(points), point_radius};
    } catch (const SamplingExhausted&) {
      // retry the whole cluster
    }
  }
  throw GenerationFailed("point cluster generation failed after " + std::to_string(limits.max_retries) +
                         " attempts");
}

}  // namespace bms
