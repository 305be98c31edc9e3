#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "bodymap_synth/bodymap.hpp"
#include "bodymap_synth/geometry.hpp"
#include "bodymap_synth/style.hpp"

namespace bms {

enum class PrimitiveKind { Line, DashedLine, PointCluster };

inline constexpr PrimitiveKind kAllPrimitiveKinds[] = {PrimitiveKind::Line, PrimitiveKind::DashedLine,
                                                       PrimitiveKind::PointCluster};

/// Stable identifiers used in manifests, scenario files and class directories.
std::string_view to_string(PrimitiveKind kind) noexcept;
/// Throws ConfigError for unknown names.
PrimitiveKind parse_primitive_kind(std::string_view name);

struct LineParams {
  double endpoint_radius = 200.0;
  double control_deviation = 30.0;

  friend constexpr bool operator==(LineParams, LineParams) noexcept = default;
};

struct ClusterParams {
  int n_min = 3;
  int n_max = 20;
  double step_radius = 20.0;

  friend constexpr bool operator==(ClusterParams, ClusterParams) noexcept = default;
};

/// Throws ConfigError when the parameters violate their invariants.
void check_params(const LineParams& params);
void check_params(const ClusterParams& params);
void check_params(const DashPattern& dash);

struct LinePrimitive {
  BezierCurve curve;
  friend bool operator==(const LinePrimitive&, const LinePrimitive&) = default;
};

struct DashedLinePrimitive {
  BezierCurve curve;
  DashPattern dash;
  friend bool operator==(const DashedLinePrimitive&, const DashedLinePrimitive&) = default;
};

struct PointClusterPrimitive {
  std::vector<Point> points;
  double point_radius = 3.0;
  friend bool operator==(const PointClusterPrimitive&, const PointClusterPrimitive&) = default;
};

using Primitive = std::variant<LinePrimitive, DashedLinePrimitive, PointClusterPrimitive>;

PrimitiveKind kind_of(const Primitive& primitive) noexcept;

/// Chord point k of d: s + (k/d)(e - s). Interior control point k is drawn
/// around this point.
Point chord_point(Point start, Point end, int k, int degree) noexcept;

/// Points whose containment defines a valid primitive: the flattened polyline
/// vertices for lines, the cluster points for clusters.
std::vector<Point> governing_vertices(const Primitive& primitive, double tolerance = kDefaultFlattenTolerance);

struct GenerationLimits {
  int max_retries = 100;          // whole-primitive attempts
  int max_point_tries = kDefaultMaxTries;  // rejection draws per sampled point
  double flatten_tolerance = kDefaultFlattenTolerance;
};

/// Start s uniform in the domain; end e in the endpoint disk around s (rejected
/// until inside); degree 2 or 3 with equal probability; interior controls
/// displaced within control_deviation of their chord points. The primitive is
/// redrawn whole until every flattened segment stays inside the domain.
/// Throws GenerationFailed when max_retries attempts all fail.
LinePrimitive gen_line(const SampleDomain& domain, RandomStream& stream, const LineParams& params,
                       const GenerationLimits& limits = {});

/// Same construction (and stream consumption) as gen_line; carries the dash.
DashedLinePrimitive gen_dashed_line(const SampleDomain& domain, RandomStream& stream, const LineParams& params,
                                    const DashPattern& dash, const GenerationLimits& limits = {});

/// n uniform in [n_min, n_max]; s_0 uniform in the domain; each following point
/// uniform in the step disk around its predecessor, rejected until inside.
PointClusterPrimitive gen_cluster(const SampleDomain& domain, RandomStream& stream, const ClusterParams& params,
                                  double point_radius, const GenerationLimits& limits = {});

}  // namespace bms
